#include "lpbf/physics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lpbf/dimensionless.hpp"

namespace lpbf {

Grid Grid::from_extents(double lx, double ly, double lz, double spacing) {
    const auto count = [spacing](double extent) {
        // Tolerate round-off so 150 / 1.0 gives 150, not 151.
        return std::max(1, int(std::ceil(extent / spacing - 1e-9)));
    };
    Grid g;
    g.nx = count(lx);
    g.ny = count(ly);
    g.nz = count(lz);
    g.hx = g.hy = g.hz = spacing;
    return g;
}

PhaseModel PhaseModel::from(const AlloyProperties& a, const ProcessCase& pc) {
    const double dT = a.liquidus - pc.ambient_temp;
    PhaseModel m;
    m.midpoint = (0.5 * (a.liquidus + a.solidus) - pc.ambient_temp) / dT;
    m.interval = (a.liquidus - a.solidus) / dT;
    m.lambda = pc.interface_param;
    return m;
}

double PhaseModel::fraction(double t) const {
    const double xi = lambda * (t - midpoint) / interval;
    return 0.5 * (1.0 + std::tanh(xi));
}

double PhaseModel::slope(double t) const {
    const double th = std::tanh(lambda * (t - midpoint) / interval);
    return 0.5 * (1.0 - th * th) * lambda / interval;
}

double liquid_fraction(double scaled_temp, const AlloyProperties& alloy, const ProcessCase& pc) {
    return PhaseModel::from(alloy, pc).fraction(scaled_temp);
}

LaserModel LaserModel::from(const AlloyProperties& a, const ProcessCase& pc, double x_start) {
    const auto n = compute_numbers(a, pc);
    LaserModel m;
    m.f = pc.distribution_factor;
    m.radius = pc.spot_radius / pc.layer_thickness;
    m.thickness = 1.0;
    m.x_start = x_start;
    m.peak = pc.absorptivity * m.f * n.Q / (std::numbers::pi * m.radius * m.radius * m.thickness);
    return m;
}

double LaserModel::operator()(double x, double y, double depth, double t) const {
    const double dx = x - x_start - t;
    const double r2 = radius * radius;
    return peak * std::exp(-f * dx * dx / r2 - f * y * y / r2 - f * depth * depth / (thickness * thickness));
}

double gaussian_half_space_factor(double f) { return 0.5 * std::sqrt(std::numbers::pi / f); }

double LaserModel::total_power() const {
    const double lateral = std::numbers::pi * radius * radius / f;
    return peak * lateral * thickness * gaussian_half_space_factor(f);
}

namespace {

// erf(v) - erf(u) for u <= v, through erfc on either tail to keep precision
// where both values are close to +-1.
double erf_difference(double u, double v) {
    if (u >= 0.0) return std::erfc(u) - std::erfc(v);
    if (v <= 0.0) return std::erfc(-v) - std::erfc(-u);
    return std::erf(v) - std::erf(u);
}

// Mean of exp(-f (s - c)^2 / w^2) over each interval [origin + n h, origin + (n + 1) h].
std::vector<double> segment_means(int count, double h, double origin, double centre, double width, double f) {
    std::vector<double> out(count);
    const double a = std::sqrt(f) / width;
    const double scale = 0.5 * std::sqrt(std::numbers::pi) / a;
    for (int n = 0; n < count; ++n) {
        const double lo = a * (origin + n * h - centre), hi = a * (origin + (n + 1) * h - centre);
        out[n] = scale * erf_difference(lo, hi) / h;
    }
    return out;
}

}  // namespace

void LaserModel::cell_average(const Grid& g, double t, std::span<double> out) const {
    const auto mx = segment_means(g.nx, g.hx, 0.0, x_start + t, radius, f);
    const auto my = segment_means(g.ny, g.hy, g.y_face(0), 0.0, radius, f);
    const auto mz = segment_means(g.nz, g.hz, 0.0, 0.0, thickness, f);
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j) {
            const double yz = peak * my[j] * mz[k];
            double* row = out.data() + g.idx(0, j, k);
            for (int i = 0; i < g.nx; ++i) row[i] = yz * mx[i];
        }
}

double laser_source(double x, double y, double depth, double t, const AlloyProperties& alloy,
                    const ProcessCase& pc, double x_start) {
    return LaserModel::from(alloy, pc, x_start)(x, y, depth, t);
}

}  // namespace lpbf
