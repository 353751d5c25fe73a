#include <algorithm>
#include <array>
#include <cmath>

#include "lpbf/error.hpp"
#include "lpbf/pcg.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

double kozeny_carman(double phi, double delta) {
    const double solid = 1.0 - phi;
    return solid * solid / (phi * phi * phi + delta);
}

namespace {

constexpr int kDirichletZero = -1;  // wall or solid: neighbour velocity is zero
constexpr int kNeumann = -2;        // free surface: shear flux supplied explicitly

// Divergence is measured against max |u|, floored at this scaled speed and at
// kProjectionShare of the tentative speed. Below that the flow is treated as at
// rest: the correction cannot resolve it beyond round-off of the tentative field.
constexpr double kQuiescentSpeed = 1e-4;
constexpr double kProjectionShare = 1e-3;

enum class Axis { x, y, z };

// Unknowns of one velocity component on the faces between two flowing cells.
struct FaceSystem {
    Axis axis;
    std::vector<std::size_t> face;            // index into the component array
    std::vector<std::array<int, 3>> ijk;
    std::vector<std::array<int, 6>> nb;       // -x, +x, -y, +y, -z(up), +z(down)
    std::vector<double> damping;              // Darcy coefficient on the face
};

struct PressureSystem {
    std::vector<std::size_t> cell;
    std::vector<int> component;
    int components = 0;
};

class MomentumSolver {
public:
    MomentumSolver(SimState& s, const MomentumCoefficients& co, const SolverConfig& cfg)
        : s_(s), g_(s.grid), co_(co), cfg_(cfg) {}

    MomentumStepReport run();

private:
    bool active(int i, int j, int k) const { return active_[g_.idx(i, j, k)] != 0; }

    double U(int i, int j, int k) const {
        if (i < 0 || i > g_.nx || j < 0 || j >= g_.ny || k < 0 || k >= g_.nz) return 0.0;
        return s_.u[g_.u_idx(i, j, k)];
    }
    double V(int i, int j, int k) const {
        if (i < 0 || i >= g_.nx || j < 0 || j > g_.ny || k < 0 || k >= g_.nz) return 0.0;
        return s_.v[g_.v_idx(i, j, k)];
    }
    double W(int i, int j, int k) const {
        if (i < 0 || i >= g_.nx || j < 0 || j >= g_.ny || k < 0 || k > g_.nz) return 0.0;
        return s_.w[g_.w_idx(i, j, k)];
    }

    void build_systems();
    void build_face_system(FaceSystem& fs, Axis axis);
    void build_pressure_system();
    double advective_rate() const;
    void substep(double dt, MomentumStepReport& rep);
    Field& component(Axis a) { return a == Axis::x ? s_.u : a == Axis::y ? s_.v : s_.w; }
    double explicit_terms(const FaceSystem& fs, std::size_t n) const;

    SimState& s_;
    const Grid& g_;
    const MomentumCoefficients& co_;
    const SolverConfig& cfg_;
    std::vector<char> active_;
    std::vector<int> u_map_, v_map_, w_map_;
    FaceSystem fu_, fv_, fw_;
    PressureSystem ps_;
    std::vector<int> cell_map_;
};

void MomentumSolver::build_face_system(FaceSystem& fs, Axis axis) {
    fs.axis = axis;
    auto& map = axis == Axis::x ? u_map_ : axis == Axis::y ? v_map_ : w_map_;
    const std::size_t size = axis == Axis::x ? g_.u_size() : axis == Axis::y ? g_.v_size() : g_.w_size();
    map.assign(size, kDirichletZero);

    const int ni = g_.nx + (axis == Axis::x), nj = g_.ny + (axis == Axis::y), nk = g_.nz + (axis == Axis::z);
    for (int k = 0; k < nk; ++k)
        for (int j = 0; j < nj; ++j)
            for (int i = 0; i < ni; ++i) {
                int i0 = i, j0 = j, k0 = k;
                if (axis == Axis::x) {
                    if (i == 0 || i == g_.nx) continue;
                    i0 = i - 1;
                } else if (axis == Axis::y) {
                    if (j == 0 || j == g_.ny) continue;
                    j0 = j - 1;
                } else {
                    if (k == 0 || k == g_.nz) continue;
                    k0 = k - 1;
                }
                if (!active(i0, j0, k0) || !active(i, j, k)) continue;
                const std::size_t f = axis == Axis::x   ? g_.u_idx(i, j, k)
                                      : axis == Axis::y ? g_.v_idx(i, j, k)
                                                        : g_.w_idx(i, j, k);
                map[f] = int(fs.face.size());
                fs.face.push_back(f);
                fs.ijk.push_back({i, j, k});
                const double phi = 0.5 * (s_.phi[g_.idx(i0, j0, k0)] + s_.phi[g_.idx(i, j, k)]);
                fs.damping.push_back(co_.darcy * kozeny_carman(phi, co_.porosity_floor));
            }

    const auto lookup = [&](int i, int j, int k) -> int {
        if (i < 0 || i >= ni || j < 0 || j >= nj || k < 0 || k >= nk) return kDirichletZero;
        const std::size_t f = axis == Axis::x ? g_.u_idx(i, j, k) : axis == Axis::y ? g_.v_idx(i, j, k) : g_.w_idx(i, j, k);
        return map[f];
    };
    fs.nb.resize(fs.face.size());
    for (std::size_t n = 0; n < fs.face.size(); ++n) {
        const auto [i, j, k] = fs.ijk[n];
        auto& nb = fs.nb[n];
        nb = {lookup(i - 1, j, k), lookup(i + 1, j, k), lookup(i, j - 1, k),
              lookup(i, j + 1, k), lookup(i, j, k - 1), lookup(i, j, k + 1)};
        // Tangential components at the free surface see the shear stress, not a wall.
        if (axis != Axis::z && k == 0) nb[4] = kNeumann;
    }
}

void MomentumSolver::build_pressure_system() {
    cell_map_.assign(g_.cells(), -1);
    ps_ = {};
    for (std::size_t c = 0; c < g_.cells(); ++c)
        if (active_[c]) {
            cell_map_[c] = int(ps_.cell.size());
            ps_.cell.push_back(c);
        }
    ps_.component.assign(ps_.cell.size(), -1);
    std::vector<std::size_t> stack;
    const std::size_t sy = g_.nx, sz = std::size_t(g_.nx) * g_.ny;
    for (std::size_t seed = 0; seed < ps_.cell.size(); ++seed) {
        if (ps_.component[seed] >= 0) continue;
        const int id = ps_.components++;
        ps_.component[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t n = stack.back();
            stack.pop_back();
            const std::size_t c = ps_.cell[n];
            const int i = int(c % g_.nx), j = int((c / sy) % g_.ny), k = int(c / sz);
            const std::array<std::pair<bool, std::size_t>, 6> nbs = {{
                {i > 0, c - 1}, {i < g_.nx - 1, c + 1}, {j > 0, c - sy},
                {j < g_.ny - 1, c + sy}, {k > 0, c - sz}, {k < g_.nz - 1, c + sz},
            }};
            for (const auto& [ok, nc] : nbs) {
                if (!ok || !active_[nc]) continue;
                const int m = cell_map_[nc];
                if (ps_.component[m] < 0) {
                    ps_.component[m] = id;
                    stack.push_back(std::size_t(m));
                }
            }
        }
    }
}

void MomentumSolver::build_systems() {
    active_.assign(g_.cells(), 0);
    for (std::size_t c = 0; c < g_.cells(); ++c) active_[c] = s_.phi[c] >= cfg_.solid_cut;
    build_face_system(fu_, Axis::x);
    build_face_system(fv_, Axis::y);
    build_face_system(fw_, Axis::z);
    build_pressure_system();

    // Faces that are not between two flowing cells carry no velocity.
    for (std::size_t f = 0; f < s_.u.size(); ++f)
        if (u_map_[f] < 0) s_.u[f] = 0.0;
    for (std::size_t f = 0; f < s_.v.size(); ++f)
        if (v_map_[f] < 0) s_.v[f] = 0.0;
    for (std::size_t f = 0; f < s_.w.size(); ++f)
        if (w_map_[f] < 0) s_.w[f] = 0.0;
    for (std::size_t c = 0; c < g_.cells(); ++c)
        if (!active_[c]) s_.p[c] = 0.0;
}

double MomentumSolver::advective_rate() const {
    double rate = 0.0;
    for (std::size_t c : ps_.cell) {
        const int i = int(c % g_.nx), j = int((c / g_.nx) % g_.ny), k = int(c / (std::size_t(g_.nx) * g_.ny));
        const double r = std::max(std::abs(U(i, j, k)), std::abs(U(i + 1, j, k))) / g_.hx +
                         std::max(std::abs(V(i, j, k)), std::abs(V(i, j + 1, k))) / g_.hy +
                         std::max(std::abs(W(i, j, k)), std::abs(W(i, j, k + 1))) / g_.hz;
        rate = std::max(rate, r);
    }
    return rate;
}

// Upwind advection (negated) plus body and surface forces for one face unknown.
double MomentumSolver::explicit_terms(const FaceSystem& fs, std::size_t n) const {
    const auto [i, j, k] = fs.ijk[n];
    const double hx = g_.hx, hy = g_.hy, hz = g_.hz;
    double a = 0.0, b = 0.0, c = 0.0;  // advecting velocity components at the face
    double self = 0.0;
    double xm = 0.0, xp = 0.0, ym = 0.0, yp = 0.0, zm = 0.0, zp = 0.0;
    double force = 0.0;

    switch (fs.axis) {
        case Axis::x:
            self = U(i, j, k);
            a = self;
            b = 0.25 * (V(i - 1, j, k) + V(i, j, k) + V(i - 1, j + 1, k) + V(i, j + 1, k));
            c = 0.25 * (W(i - 1, j, k) + W(i, j, k) + W(i - 1, j, k + 1) + W(i, j, k + 1));
            xm = U(i - 1, j, k), xp = U(i + 1, j, k), ym = U(i, j - 1, k), yp = U(i, j + 1, k);
            zm = k > 0 ? U(i, j, k - 1) : self, zp = U(i, j, k + 1);
            if (k == 0)
                force = co_.marangoni * (s_.T[g_.idx(i, j, 0)] - s_.T[g_.idx(i - 1, j, 0)]) / hx / hz;
            break;
        case Axis::y:
            self = V(i, j, k);
            a = 0.25 * (U(i, j - 1, k) + U(i + 1, j - 1, k) + U(i, j, k) + U(i + 1, j, k));
            b = self;
            c = 0.25 * (W(i, j - 1, k) + W(i, j, k) + W(i, j - 1, k + 1) + W(i, j, k + 1));
            xm = V(i - 1, j, k), xp = V(i + 1, j, k), ym = V(i, j - 1, k), yp = V(i, j + 1, k);
            zm = k > 0 ? V(i, j, k - 1) : self, zp = V(i, j, k + 1);
            if (k == 0)
                force = co_.marangoni * (s_.T[g_.idx(i, j, 0)] - s_.T[g_.idx(i, j - 1, 0)]) / hy / hz;
            break;
        case Axis::z: {
            self = W(i, j, k);
            a = 0.25 * (U(i, j, k - 1) + U(i + 1, j, k - 1) + U(i, j, k) + U(i + 1, j, k));
            b = 0.25 * (V(i, j, k - 1) + V(i, j + 1, k - 1) + V(i, j, k) + V(i, j + 1, k));
            c = self;
            xm = W(i - 1, j, k), xp = W(i + 1, j, k), ym = W(i, j - 1, k), yp = W(i, j + 1, k);
            zm = W(i, j, k - 1), zp = W(i, j, k + 1);
            const double tf = 0.5 * (s_.T[g_.idx(i, j, k - 1)] + s_.T[g_.idx(i, j, k)]);
            // Depth points down, so an upward push is negative.
            force = -co_.buoyancy * std::max(tf - co_.solidus_temp, 0.0);
            break;
        }
    }
    const double ddx = a > 0.0 ? (self - xm) / hx : (xp - self) / hx;
    const double ddy = b > 0.0 ? (self - ym) / hy : (yp - self) / hy;
    const double ddz = c > 0.0 ? (self - zm) / hz : (zp - self) / hz;
    return force - (a * ddx + b * ddy + c * ddz);
}

void MomentumSolver::substep(double dt, MomentumStepReport& rep) {
    const std::array<double, 6> inv_h2 = {1 / (g_.hx * g_.hx), 1 / (g_.hx * g_.hx), 1 / (g_.hy * g_.hy),
                                          1 / (g_.hy * g_.hy), 1 / (g_.hz * g_.hz), 1 / (g_.hz * g_.hz)};
    const double visc = co_.viscosity;

    // Explicit parts use the velocities at the start of the sub-step.
    std::array<Field, 3> rhs;
    std::array<FaceSystem*, 3> systems = {&fu_, &fv_, &fw_};
    for (int a = 0; a < 3; ++a) {
        const auto& fs = *systems[a];
        const Field& vel = component(fs.axis);
        rhs[a].resize(fs.face.size());
        for (std::size_t n = 0; n < fs.face.size(); ++n) rhs[a][n] = vel[fs.face[n]] / dt + explicit_terms(fs, n);
    }

    // Tentative velocity: implicit viscosity and Darcy damping.
    for (int a = 0; a < 3; ++a) {
        const auto& fs = *systems[a];
        const std::size_t m = fs.face.size();
        if (m == 0) continue;
        Field diag(m), inv_diag(m), x(m);
        Field& vel = component(fs.axis);
        for (std::size_t n = 0; n < m; ++n) {
            double d = 1.0 / dt + fs.damping[n];
            for (int q = 0; q < 6; ++q)
                if (fs.nb[n][q] != kNeumann) d += visc * inv_h2[q];
            diag[n] = d;
            inv_diag[n] = 1.0 / d;
            x[n] = vel[fs.face[n]];
        }
        const LinearOperator apply = [&](std::span<const double> in, std::span<double> out) {
            for (std::size_t n = 0; n < m; ++n) {
                double acc = diag[n] * in[n];
                for (int q = 0; q < 6; ++q)
                    if (const int o = fs.nb[n][q]; o >= 0) acc -= visc * inv_h2[q] * in[std::size_t(o)];
                out[n] = acc;
            }
        };
        const auto lin = pcg(apply, inv_diag, rhs[a], x, cfg_.momentum_tol, cfg_.max_linear_iterations);
        rep.linear_iterations += lin.iterations;
        if (!lin.converged) throw SolverError(s_.step, "viscous solve did not converge");
        for (std::size_t n = 0; n < m; ++n) vel[fs.face[n]] = x[n];
    }

    // Projection with Darcy-consistent face weights: u = u* - dt beta grad p.
    const std::size_t np = ps_.cell.size();
    Field b(np), pressure(np), inv_diag(np, 0.0), diag(np, 0.0);
    std::vector<std::array<std::pair<int, double>, 6>> links(np);
    const auto beta = [&](const FaceSystem& fs, int unknown) { return 1.0 / (1.0 + dt * fs.damping[std::size_t(unknown)]); };

    double umax = 0.0;
    for (const auto* fs : systems)
        for (auto f : fs->face) umax = std::max(umax, std::abs(component(fs->axis)[f]));

    for (std::size_t n = 0; n < np; ++n) {
        const std::size_t c = ps_.cell[n];
        const int i = int(c % g_.nx), j = int((c / g_.nx) % g_.ny), k = int(c / (std::size_t(g_.nx) * g_.ny));
        const double div = (U(i + 1, j, k) - U(i, j, k)) / g_.hx + (V(i, j + 1, k) - V(i, j, k)) / g_.hy +
                           (W(i, j, k + 1) - W(i, j, k)) / g_.hz;
        b[n] = -div / dt;
        pressure[n] = s_.p[c];
        const std::array<std::pair<int, std::pair<const FaceSystem*, int>>, 6> faces = {{
            {i > 0 ? cell_map_[c - 1] : -1, {&fu_, u_map_[g_.u_idx(i, j, k)]}},
            {i < g_.nx - 1 ? cell_map_[c + 1] : -1, {&fu_, u_map_[g_.u_idx(i + 1, j, k)]}},
            {j > 0 ? cell_map_[c - g_.nx] : -1, {&fv_, v_map_[g_.v_idx(i, j, k)]}},
            {j < g_.ny - 1 ? cell_map_[c + g_.nx] : -1, {&fv_, v_map_[g_.v_idx(i, j + 1, k)]}},
            {k > 0 ? cell_map_[c - std::size_t(g_.nx) * g_.ny] : -1, {&fw_, w_map_[g_.w_idx(i, j, k)]}},
            {k < g_.nz - 1 ? cell_map_[c + std::size_t(g_.nx) * g_.ny] : -1, {&fw_, w_map_[g_.w_idx(i, j, k + 1)]}},
        }};
        for (int q = 0; q < 6; ++q) {
            const auto& [other, face] = faces[q];
            if (other < 0 || face.second < 0) {
                links[n][q] = {-1, 0.0};
                continue;
            }
            const double coef = beta(*face.first, face.second) * inv_h2[q];
            links[n][q] = {other, coef};
            diag[n] += coef;
        }
        inv_diag[n] = diag[n] > 0.0 ? 1.0 / diag[n] : 0.0;
    }

    // Each connected region is a closed Neumann problem: remove the mean of b.
    {
        std::vector<double> sum(ps_.components, 0.0);
        std::vector<int> count(ps_.components, 0);
        for (std::size_t n = 0; n < np; ++n) {
            sum[ps_.component[n]] += b[n];
            ++count[ps_.component[n]];
        }
        for (std::size_t n = 0; n < np; ++n) b[n] -= sum[ps_.component[n]] / count[ps_.component[n]];
    }

    const double h = std::min({g_.hx, g_.hy, g_.hz});
    const LinearOperator apply = [&](std::span<const double> in, std::span<double> out) {
        for (std::size_t n = 0; n < np; ++n) {
            double acc = diag[n] * in[n];
            for (const auto& [o, coef] : links[n])
                if (o >= 0) acc -= coef * in[std::size_t(o)];
            out[n] = acc;
        }
    };
    // Tentative velocities, kept so the correction can be redone after a re-solve.
    std::array<Field, 3> tentative;
    for (int a = 0; a < 3; ++a) {
        const Field& vel = component(systems[a]->axis);
        for (auto f : systems[a]->face) tentative[a].push_back(vel[f]);
    }
    const auto correct = [&] {
        for (int a = 0; a < 3; ++a) {
            const FaceSystem& fs = *systems[a];
            Field& vel = component(fs.axis);
            for (std::size_t n = 0; n < fs.face.size(); ++n) {
                const auto [i, j, k] = fs.ijk[n];
                std::size_t lo = 0, hi = 0;
                double spacing = 1.0;
                if (fs.axis == Axis::x) lo = g_.idx(i - 1, j, k), hi = g_.idx(i, j, k), spacing = g_.hx;
                if (fs.axis == Axis::y) lo = g_.idx(i, j - 1, k), hi = g_.idx(i, j, k), spacing = g_.hy;
                if (fs.axis == Axis::z) lo = g_.idx(i, j, k - 1), hi = g_.idx(i, j, k), spacing = g_.hz;
                const double grad =
                    (pressure[std::size_t(cell_map_[hi])] - pressure[std::size_t(cell_map_[lo])]) / spacing;
                vel[fs.face[n]] = tentative[a][n] - dt * beta(fs, int(n)) * grad;
            }
        }
    };
    const double floor = std::max(kQuiescentSpeed, kProjectionShare * umax);
    // Relative divergence max |div u| h / max |u| of the corrected field.
    const auto measure = [&] {
        double div_max = 0.0, vmax = 0.0;
        for (std::size_t c : ps_.cell) {
            const int i = int(c % g_.nx), j = int((c / g_.nx) % g_.ny), k = int(c / (std::size_t(g_.nx) * g_.ny));
            const double div = (U(i + 1, j, k) - U(i, j, k)) / g_.hx + (V(i, j + 1, k) - V(i, j, k)) / g_.hy +
                               (W(i, j, k + 1) - W(i, j, k)) / g_.hz;
            div_max = std::max(div_max, std::abs(div));
        }
        for (const auto* fs : systems)
            for (auto f : fs->face) vmax = std::max(vmax, std::abs(component(fs->axis)[f]));
        return std::pair{div_max * h / std::max(vmax, floor), vmax};
    };

    // The stop test scales with a reference speed; when the corrected field is
    // slower than the tentative one, tighten the reference and continue.
    double reference = umax;
    double result = 0.0;
    for (int attempt = 0;; ++attempt) {
        const ResidualTest small_divergence = [&](std::span<const double> r) {
            double rmax = 0.0;
            for (double x : r) rmax = std::max(rmax, std::abs(x));
            const double div = dt * rmax;
            return div * h <= cfg_.pressure_tol * std::max(reference, floor);
        };
        const auto lin = pcg(apply, inv_diag, b, pressure, 0.0, cfg_.max_linear_iterations, small_divergence);
        rep.linear_iterations += lin.iterations;
        if (!lin.converged) throw SolverError(s_.step, "pressure Poisson solve did not converge");
        correct();
        const auto [rel, vmax] = measure();
        result = rel;
        if (rel <= cfg_.pressure_tol || attempt == 4) break;
        reference = std::min(reference, vmax) * std::min(0.5, cfg_.pressure_tol / rel);
    }
    for (std::size_t n = 0; n < np; ++n) s_.p[ps_.cell[n]] = pressure[n];
    const double measure_final = result;
    rep.max_divergence = std::max(rep.max_divergence, measure_final);
}

MomentumStepReport MomentumSolver::run() {
    MomentumStepReport rep;
    build_systems();
    rep.active_cells = ps_.cell.size();
    if (ps_.cell.empty()) return rep;

    double remaining = cfg_.dt;
    while (remaining > 0.0) {
        const double rate = advective_rate();
        int needed = std::max(1, int(std::ceil(remaining * rate / cfg_.cfl)));
        if (rep.substeps + needed > cfg_.max_substeps)
            throw SolverError(s_.step, "momentum CFL limit exceeded (rate " + std::to_string(rate) + ", " +
                                           std::to_string(rep.substeps + needed) + " sub-steps needed)");
        const double h = needed == 1 ? remaining : remaining / needed;
        substep(h, rep);
        ++rep.substeps;
        remaining = needed == 1 ? 0.0 : remaining - h;
    }
    return rep;
}

}  // namespace

MomentumStepReport momentum_step(SimState& state, const MomentumCoefficients& coeffs, const SolverConfig& cfg) {
    MomentumSolver solver(state, coeffs, cfg);
    return solver.run();
}

}  // namespace lpbf
