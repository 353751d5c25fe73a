#include "lpbf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpbf/csv.hpp"
#include "lpbf/dimensionless.hpp"
#include "lpbf/error.hpp"

namespace lpbf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Position of the threshold crossing between a melted centre `inside` and the
// neighbouring centre `outside`, measured from the melted centre.
double crossing(double inside, double outside, double threshold, double spacing) {
    return spacing * (inside - threshold) / (inside - outside);
}

}  // namespace

MeltpoolExtent meltpool_extent(std::span<const double> phi, const Grid& g, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold", "must lie in (0, 1)");
    constexpr double inf = std::numeric_limits<double>::infinity();
    double lo[3] = {inf, inf, inf}, hi[3] = {-inf, -inf, -inf};
    const int n[3] = {g.nx, g.ny, g.nz};
    const double h[3] = {g.hx, g.hy, g.hz};
    MeltpoolExtent e;
    std::size_t count = 0;

    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double p = phi[g.idx(i, j, k)];
                if (p < threshold) continue;
                ++count;
                const int at[3] = {i, j, k};
                const double centre[3] = {g.x_center(i), g.y_center(j), g.z_center(k)};
                for (int a = 0; a < 3; ++a) {
                    int below[3] = {i, j, k}, above[3] = {i, j, k};
                    --below[a];
                    ++above[a];
                    double low = centre[a] - 0.5 * h[a];
                    double high = centre[a] + 0.5 * h[a];
                    if (at[a] > 0) {
                        const double q = phi[g.idx(below[0], below[1], below[2])];
                        if (q >= threshold) low = inf;  // interior along this axis
                        else low = centre[a] - crossing(p, q, threshold, h[a]);
                    }
                    if (at[a] < n[a] - 1) {
                        const double q = phi[g.idx(above[0], above[1], above[2])];
                        if (q >= threshold) high = -inf;
                        else high = centre[a] + crossing(p, q, threshold, h[a]);
                    }
                    lo[a] = std::min(lo[a], low);
                    hi[a] = std::max(hi[a], high);
                }
            }
    if (count == 0) return e;
    e.length = hi[0] - lo[0];
    e.width = hi[1] - lo[1];
    e.depth = hi[2] - lo[2];
    e.melt_volume = double(count) * g.cell_volume();
    return e;
}

double gradient_max(std::span<const double> T, const Grid& g) {
    const auto diff = [](double minus, double plus, double span) { return (plus - minus) / span; };
    double best = 0.0;
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const auto at = [&](int a, int b, int c) { return T[g.idx(a, b, c)]; };
                const int i0 = std::max(i - 1, 0), i1 = std::min(i + 1, g.nx - 1);
                const int j0 = std::max(j - 1, 0), j1 = std::min(j + 1, g.ny - 1);
                const int k0 = std::max(k - 1, 0), k1 = std::min(k + 1, g.nz - 1);
                const double gx = i1 > i0 ? diff(at(i0, j, k), at(i1, j, k), (i1 - i0) * g.hx) : 0.0;
                const double gy = j1 > j0 ? diff(at(i, j0, k), at(i, j1, k), (j1 - j0) * g.hy) : 0.0;
                const double gz = k1 > k0 ? diff(at(i, j, k0), at(i, j, k1), (k1 - k0) * g.hz) : 0.0;
                best = std::max(best, std::sqrt(gx * gx + gy * gy + gz * gz));
            }
    return best;
}

double gradient_dimensional(double scaled_gradient, const AlloyProperties& alloy, const ProcessCase& pc) {
    return scaled_gradient * (alloy.liquidus - pc.ambient_temp) / pc.layer_thickness;
}

double cooling_rate(double gradient, double scan_speed) { return gradient * scan_speed; }

double sdas(double rate) {
    if (!(rate > 0.0)) throw DomainError("sdas: cooling rate must be positive");
    return 25.0 * std::pow(rate, -0.28);
}

bool MeltpoolMetrics::aspect_defined() const { return !std::isnan(aspect_ratio); }

bool MeltpoolMetrics::operator==(const MeltpoolMetrics& o) const {
    const auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return same(Tmax_tilde, o.Tmax_tilde) && same(vmax_tilde, o.vmax_tilde) && same(Tmax_probe, o.Tmax_probe) &&
           same(vmax_probe, o.vmax_probe) && same(Gmax_tilde, o.Gmax_tilde) && same(length, o.length) &&
           same(width, o.width) && same(depth, o.depth) && same(aspect_ratio, o.aspect_ratio) &&
           same(volume, o.volume) && same(melt_volume, o.melt_volume) && same(G_dim, o.G_dim) &&
           same(cooling_rate, o.cooling_rate) && same(sdas_um, o.sdas_um);
}

MeltpoolMetrics extract(const SimState& s, const AlloyProperties& alloy, const ProcessCase& pc, double threshold) {
    MeltpoolMetrics m;
    m.Tmax_tilde = s.T.empty() ? 0.0 : *std::max_element(s.T.begin(), s.T.end());
    m.vmax_tilde = s.max_speed();
    m.Tmax_probe = m.Tmax_tilde;
    m.vmax_probe = m.vmax_tilde;
    m.Gmax_tilde = gradient_max(s.T, s.grid);

    const auto e = meltpool_extent(s.phi, s.grid, threshold);
    m.length = e.length;
    m.width = e.width;
    m.depth = e.depth;
    m.melt_volume = e.melt_volume;
    m.volume = e.length * e.width * e.depth;
    m.aspect_ratio = e.width > 0.0 ? e.length / e.width : kNaN;

    m.G_dim = gradient_dimensional(m.Gmax_tilde, alloy, pc);
    m.cooling_rate = cooling_rate(m.G_dim, pc.scan_speed);
    m.sdas_um = m.cooling_rate > 0.0 ? sdas(m.cooling_rate) : kNaN;
    return m;
}

MeltpoolMetrics extract(const CaseRun& run, const AlloyProperties& alloy, const ProcessCase& pc, double threshold) {
    MeltpoolMetrics m = extract(run.state, alloy, pc, threshold);
    m.Tmax_probe = std::max(m.Tmax_tilde, run.Tmax_probe);
    m.vmax_probe = std::max(m.vmax_tilde, run.vmax_probe);
    return m;
}

std::string metrics_csv_header() {
    return "alloy,P_W,v_p,Tmax_t,vmax_t,Gmax_t,G_K_per_m,coolrate_K_per_s,l_m,w_m,d_m,aspect,volume,sdas_um";
}

std::string metrics_csv_row(const ProcessCase& pc, const MeltpoolMetrics& m) {
    using csv::fmt;
    std::string row = pc.alloy;
    for (double x : {pc.power, pc.scan_speed, m.Tmax_tilde, m.vmax_tilde, m.Gmax_tilde, m.G_dim, m.cooling_rate,
                     m.length, m.width, m.depth, m.aspect_ratio, m.volume, m.sdas_um})
        row += "," + fmt(x);
    return row;
}

}  // namespace lpbf
