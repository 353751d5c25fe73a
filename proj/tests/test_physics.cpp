#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

#include "lpbf/physics.hpp"
#include "support.hpp"

using namespace lpbf;

TEST(PhaseModel, FractionAtMidpointAndAbove) {
    const auto cat = builtin_catalog();
    const auto& a = cat.alloy("SS316");
    const auto pc = make_case("SS316", 90, 0.5);
    const auto m = PhaseModel::from(a, pc);
    const double mid = m.midpoint;
    EXPECT_DOUBLE_EQ(m.fraction(mid), 0.5);
    EXPECT_NEAR(m.fraction(mid + m.interval), test::oracle("phase_fraction_xi1"), 1e-15);
    EXPECT_NEAR(m.fraction(mid + m.interval), 0.8808, 1e-4);
    EXPECT_NEAR(m.fraction(mid - m.interval), 1.0 - test::oracle("phase_fraction_xi1"), 1e-15);
    EXPECT_DOUBLE_EQ(liquid_fraction(mid, a, pc), 0.5);
}

TEST(PhaseModel, MonotoneBoundedWithMatchingSlope) {
    const auto cat = builtin_catalog();
    for (const auto& a : cat.alloys) {
        const auto m = PhaseModel::from(a, make_case(a.name, 50, 0.5));
        double prev = 0.0;
        for (double t = -1.0; t <= 3.0; t += 0.001) {
            const double phi = m.fraction(t);
            EXPECT_GE(phi, prev);
            EXPECT_GE(phi, 0.0);
            EXPECT_LE(phi, 1.0);
            prev = phi;
        }
        for (double t : {m.midpoint - m.interval, m.midpoint, m.midpoint + 0.3 * m.interval}) {
            const double h = 1e-6 * m.interval;
            const double fd = (m.fraction(t + h) - m.fraction(t - h)) / (2 * h);
            EXPECT_NEAR(m.slope(t), fd, 1e-6 * std::abs(fd) + 1e-9);
        }
    }
}

TEST(PhaseModel, SharperWithLargerLambda) {
    const auto cat = builtin_catalog();
    auto pc = make_case("SS316", 90, 0.5);
    const auto soft = PhaseModel::from(cat.alloy("SS316"), pc);
    pc.interface_param = 4.0;
    const auto sharp = PhaseModel::from(cat.alloy("SS316"), pc);
    const double t = soft.midpoint + 0.5 * soft.interval;
    EXPECT_GT(sharp.fraction(t), soft.fraction(t));
}

TEST(Laser, HalfSpaceFactorMatchesQuadrature) {
    EXPECT_NEAR(gaussian_half_space_factor(2.0), test::oracle("gaussian_half_space_f2"), 1e-12);
}

TEST(Laser, TotalPowerIsAbsorbedPowerTimesFactor) {
    const auto cat = builtin_catalog();
    const auto& a = cat.alloy("SS316");
    auto pc = make_case("SS316", 90, 0.5);
    pc.absorptivity = 0.35;
    const auto n = compute_numbers(a, pc);
    const auto laser = LaserModel::from(a, pc, 10.0);
    const double scale = a.density * a.specific_heat * n.dT_ref * pc.scan_speed * pc.layer_thickness *
                         pc.layer_thickness;  // scaled power -> W
    EXPECT_NEAR(laser.total_power() * scale, 0.35 * 90 * test::oracle("gaussian_half_space_f2"), 1e-9);
}

TEST(Laser, CellAveragesIntegrateToTotal) {
    const auto cat = builtin_catalog();
    const auto pc = make_case("IN718", 40, 0.45);
    const auto laser = LaserModel::from(cat.alloy("IN718"), pc, 30.0);
    Grid g = Grid::from_extents(60, 60, 12, 1.0);
    std::vector<double> src(g.cells());
    laser.cell_average(g, 0.0, src);
    const double sum = std::accumulate(src.begin(), src.end(), 0.0) * g.cell_volume();
    EXPECT_NEAR(sum / laser.total_power(), 1.0, 1e-9);
}

TEST(Laser, CellAverageMatchesPointwiseQuadrature) {
    const auto cat = builtin_catalog();
    const auto pc = make_case("SS316", 90, 0.5);
    const auto laser = LaserModel::from(cat.alloy("SS316"), pc, 10.0);
    Grid g = Grid::from_extents(30, 20, 6, 2.0);
    std::vector<double> src(g.cells());
    laser.cell_average(g, 3.0, src);
    using boost::math::quadrature::gauss_kronrod;
    for (const auto [i, j, k] : {std::array{6, 5, 0}, std::array{7, 4, 1}, std::array{9, 8, 2}}) {
        const double mean =
            gauss_kronrod<double, 61>::integrate(
                [&](double x) {
                    return gauss_kronrod<double, 61>::integrate(
                        [&](double y) {
                            return gauss_kronrod<double, 61>::integrate(
                                [&](double z) { return laser(x, y, z, 3.0); }, g.z_face(k), g.z_face(k + 1), 0, 1e-13);
                        },
                        g.y_face(j), g.y_face(j + 1), 0, 1e-13);
                },
                g.x_face(i), g.x_face(i + 1), 0, 1e-13) /
            g.cell_volume();
        EXPECT_NEAR(src[g.idx(i, j, k)], mean, 1e-9 * mean) << i << "," << j << "," << k;
    }
}

TEST(Laser, PeakOnCentrelineAndMovesWithTime) {
    const auto cat = builtin_catalog();
    const auto pc = make_case("SS316", 90, 0.5);
    const auto laser = LaserModel::from(cat.alloy("SS316"), pc, 10.0);
    EXPECT_DOUBLE_EQ(laser(10.0, 0.0, 0.0, 0.0), laser.peak);
    EXPECT_DOUBLE_EQ(laser(25.0, 0.0, 0.0, 15.0), laser.peak);
    EXPECT_LT(laser(10.0, 1.0, 0.0, 0.0), laser.peak);
    EXPECT_LT(laser(10.0, 0.0, 0.5, 0.0), laser.peak);
    EXPECT_DOUBLE_EQ(laser_source(10.0, 0.0, 0.0, 0.0, cat.alloy("SS316"), pc, 10.0), laser.peak);
}

TEST(Laser, ZeroPowerGivesZeroSource) {
    const auto cat = builtin_catalog();
    const auto laser = LaserModel::from(cat.alloy("SS316"), make_case("SS316", 0.0, 0.5), 10.0);
    EXPECT_EQ(laser.total_power(), 0.0);
}

TEST(Grid, FromExtentsCoversDomain) {
    const auto g = Grid::from_extents(150, 25, 25, 1.0);
    EXPECT_EQ(g.nx, 150);
    EXPECT_EQ(g.ny, 25);
    EXPECT_EQ(g.nz, 25);
    const auto c = Grid::from_extents(150, 25, 25, 2.0);
    EXPECT_EQ(c.nx, 75);
    EXPECT_EQ(c.ny, 13);
    EXPECT_GE(c.width(), 25.0);
    EXPECT_NEAR(c.y_center(0) + c.y_center(c.ny - 1), 0.0, 1e-12);
}
