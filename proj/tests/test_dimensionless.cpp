#include <gtest/gtest.h>

#include <cmath>

#include "lpbf/dimensionless.hpp"
#include "lpbf/error.hpp"
#include "support.hpp"

using namespace lpbf;
using lpbf::test::oracle;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

DimensionlessSet ss316_90() {
    const auto cat = builtin_catalog();
    return compute_numbers(cat.alloy("SS316"), make_case("SS316", 90, 0.5));
}

}  // namespace

TEST(Numbers, Ss316Oracle) {
    const auto n = ss316_90();
    EXPECT_LT(rel(n.thermal_diffusivity, oracle("ss316_alpha")), 1e-13);
    EXPECT_LT(rel(n.Pe, oracle("ss316_pe")), 1e-13);
    EXPECT_LT(rel(n.Ste, oracle("ss316_ste")), 1e-13);
    EXPECT_LT(rel(n.E, oracle("ss316_e")), 1e-13);
    EXPECT_LT(rel(n.Tc, oracle("ss316_tc")), 1e-13);
    EXPECT_NEAR(n.Pe, 1.047, 5e-4);
    EXPECT_NEAR(n.Ste, 0.07206, 5e-6);
    EXPECT_NEAR(n.E, 86.1, 0.05);
    EXPECT_DOUBLE_EQ(n.dT_ref, 1733 - 301.15);
    EXPECT_DOUBLE_EQ(n.char_time, 2e-5 / 0.5);
    EXPECT_EQ(n.marangoni_sign, -1.0);
}

TEST(Numbers, EveryCatalogCaseMatchesOracleTable) {
    const auto cat = builtin_catalog();
    const auto lines = csv::content_lines(read_text(test::data_dir() / "numbers_oracle.csv"));
    const auto header = csv::split(lines[0].second);
    ASSERT_EQ(lines.size(), 61u);
    const std::vector<std::pair<std::string, double DimensionlessSet::*>> fields = {
        {"Pr", &DimensionlessSet::Pr},   {"Gr", &DimensionlessSet::Gr},   {"Ra", &DimensionlessSet::Ra},
        {"Da", &DimensionlessSet::Da},   {"Ma", &DimensionlessSet::Ma},   {"Pe", &DimensionlessSet::Pe},
        {"Ste", &DimensionlessSet::Ste}, {"Q", &DimensionlessSet::Q},     {"E", &DimensionlessSet::E},
        {"Bi", &DimensionlessSet::Bi},   {"rad_measure", &DimensionlessSet::rad_measure},
        {"Tc", &DimensionlessSet::Tc},   {"Tc_over_Ste", &DimensionlessSet::Tc_over_Ste},
    };
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = csv::split(lines[r].second);
        const auto n = compute_numbers(cat.alloy(cells[0]), make_case(cells[0], *csv::to_double(cells[1]),
                                                                      *csv::to_double(cells[2])));
        for (const auto& [name, member] : fields) {
            const auto col = std::find(header.begin(), header.end(), name) - header.begin();
            EXPECT_LT(rel(n.*member, *csv::to_double(cells[col])), 1e-12) << cells[0] << " row " << r << " " << name;
        }
    }
}

TEST(Numbers, IdentitiesOnCatalog) {
    const auto cat = builtin_catalog();
    for (const auto& pc : cat.all_cases()) {
        const auto n = compute_numbers(cat.alloy(pc.alloy), pc);
        EXPECT_LT(rel(n.E, n.Pe * n.Q), 1e-12) << pc.id;
        EXPECT_EQ(n.Ra, n.Gr * n.Pr) << pc.id;
        EXPECT_EQ(n.Tc_over_Ste, n.Tc / n.Ste) << pc.id;
        for (double v : {n.Pr, n.Da, n.Pe, n.Ste, n.Q, n.E, n.Bi, n.rad_measure, n.Tc}) EXPECT_GT(v, 0.0) << pc.id;
    }
}

TEST(Numbers, UnityInputs) {
    AlloyProperties a{"unit", 1, 1, 1, 1, -1, 1, 1, 1, 1, 2};
    ProcessCase pc = make_case("unit", 1, 1);
    pc.layer_thickness = pc.mushy_length = 1.0;
    pc.ambient_temp = 0.5;
    pc.preheat_temp = 0.75;
    pc.gravity = 1.0;
    const auto n = compute_numbers(a, pc);
    // dT_ref is 1.5 here
    EXPECT_EQ(n.Pr, 1.0);
    EXPECT_EQ(n.Pe, 1.0);
    EXPECT_EQ(n.Ste, 1.0);
    EXPECT_EQ(n.Da, 1.0);
    EXPECT_DOUBLE_EQ(n.Gr, 1.5);
}

TEST(Numbers, RejectsInvalidCase) {
    const auto cat = builtin_catalog();
    auto pc = make_case("SS316", 90, 0.0);
    EXPECT_THROW(compute_numbers(cat.alloy("SS316"), pc), ValidationError);
}

TEST(Temperature, ScaledEndpoints) {
    const auto cat = builtin_catalog();
    const auto& a = cat.alloy("SS316");
    const auto pc = make_case("SS316", 90, 0.5);
    EXPECT_EQ(nondim_temperature(a.liquidus, a, pc), 1.0);
    EXPECT_EQ(nondim_temperature(pc.ambient_temp, a, pc), 0.0);
    EXPECT_LT(rel(nondim_temperature(353.0, a, pc), oracle("ss316_preheat_scaled")), 1e-13);
    EXPECT_NEAR(nondim_temperature(353.0, a, pc), 0.03621, 5e-6);
}

TEST(Temperature, RoundTripProperty) {
    const auto cat = builtin_catalog();
    for (const auto& a : cat.alloys) {
        const auto pc = make_case(a.name, 50, 0.5);
        for (double t = 250.0; t < 4000.0; t += 37.3)
            EXPECT_LT(rel(redim_temperature(nondim_temperature(t, a, pc), a, pc), t), 1e-12);
    }
}

TEST(Uhat, DefaultCoefficients) {
    const auto n = ss316_90();
    EXPECT_LT(rel(u_hat(n, {}), oracle("ss316_uhat_default")), 1e-13);
    EXPECT_NEAR(u_hat(n, {}), 1.347, 5e-4);
}

TEST(Uhat, SelectsTerms) {
    DimensionlessSet n;
    n.E = 5.0;
    n.Pe = 3.0;
    EXPECT_EQ(u_hat(n, {1, 0, 0}), 1.0);
    EXPECT_EQ(u_hat(n, {0, 1, 0}), 5.0);
    EXPECT_EQ(u_hat(n, {0, 0, 1}), 3.0);
}

TEST(Composite, Arithmetic) {
    DimensionlessSet n;
    n.Ma = 100;
    n.Ste = 1;
    n.Tc = 2;
    const auto c = composite_measures(n, 1.5);
    EXPECT_EQ(c.MaUhat, 150.0);
    EXPECT_EQ(c.SteUhat_over_Tc, 0.75);
    const auto zero = composite_measures(n, 0.0);
    EXPECT_EQ(zero.MaUhat, 0.0);
    EXPECT_EQ(zero.SteUhat_over_Tc, 0.0);
}

TEST(Composite, Ss316Oracle) {
    const auto n = ss316_90();
    const auto c = composite_measures(n, u_hat(n, {}));
    EXPECT_LT(rel(c.SteUhat_over_Tc, oracle("ss316_ste_uhat_over_tc")), 1e-12);
    EXPECT_LT(rel(c.MaUhat, oracle("ss316_ma_uhat")), 1e-12);
    EXPECT_NEAR(c.SteUhat_over_Tc, 3.474, 3e-3);
}

TEST(Composite, Distributive) {
    const auto cat = builtin_catalog();
    const UhatCoefficients k{0.8146, 0.0082, -0.1654};
    for (const auto& pc : cat.all_cases()) {
        const auto n = compute_numbers(cat.alloy(pc.alloy), pc);
        const auto c = composite_measures(n, u_hat(n, k));
        EXPECT_LT(rel(c.MaUhat, k.a0 * n.Ma + k.a1 * n.Ma * n.E + k.a2 * n.Ma * n.Pe), 1e-12) << pc.id;
    }
}

TEST(Composite, NonPositiveTc) {
    DimensionlessSet n;
    n.Tc = 0.0;
    EXPECT_THROW(composite_measures(n, 1.0), DomainError);
}
