#include <algorithm>
#include <cmath>

#include "lpbf/error.hpp"
#include "lpbf/pcg.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

namespace {

struct FaceFlux {
    std::size_t upstream_side;    // cell on the low-index side
    std::size_t downstream_side;  // cell on the high-index side
    double rate;                  // signed normal velocity / spacing
};

std::vector<FaceFlux> moving_faces(const SimState& s) {
    const Grid& g = s.grid;
    std::vector<FaceFlux> faces;
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                if (const double vel = s.u[g.u_idx(i, j, k)]; vel != 0.0)
                    faces.push_back({g.idx(i - 1, j, k), g.idx(i, j, k), vel / g.hx});
    for (int k = 0; k < g.nz; ++k)
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (const double vel = s.v[g.v_idx(i, j, k)]; vel != 0.0)
                    faces.push_back({g.idx(i, j - 1, k), g.idx(i, j, k), vel / g.hy});
    for (int k = 1; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (const double vel = s.w[g.w_idx(i, j, k)]; vel != 0.0)
                    faces.push_back({g.idx(i, j, k - 1), g.idx(i, j, k), vel / g.hz});
    return faces;
}

// Conservative first-order upwind transport of `field` over dt. Returns the
// number of sub-steps taken.
int advect(const SimState& s, Field& field, double dt, const SolverConfig& cfg) {
    const auto faces = moving_faces(s);
    if (faces.empty()) return 0;

    Field outflow(field.size(), 0.0);
    for (const auto& f : faces) {
        if (f.rate > 0.0)
            outflow[f.upstream_side] += f.rate;
        else
            outflow[f.downstream_side] -= f.rate;
    }
    const double max_rate = *std::max_element(outflow.begin(), outflow.end());
    const int substeps = std::max(1, int(std::ceil(dt * max_rate / cfg.cfl)));
    if (substeps > cfg.max_substeps)
        throw SolverError(0, "energy advection needs " + std::to_string(substeps) + " sub-steps (limit " +
                                 std::to_string(cfg.max_substeps) + ")");
    const double h = dt / substeps;

    Field delta(field.size(), 0.0);
    for (int n = 0; n < substeps; ++n) {
        for (const auto& f : faces) {
            const double carried = f.rate > 0.0 ? field[f.upstream_side] : field[f.downstream_side];
            const double flux = f.rate * carried;
            delta[f.upstream_side] -= flux;
            delta[f.downstream_side] += flux;
        }
        for (const auto& f : faces) {
            for (auto c : {f.upstream_side, f.downstream_side}) {
                field[c] += h * delta[c];
                delta[c] = 0.0;
            }
        }
    }
    return substeps;
}

// Inverts H = T + L phi(T), which is strictly increasing in T.
double temperature_from_enthalpy(double h, double L, const PhaseModel& phase, double guess) {
    double lo = h - L, hi = h;  // phi lies in [0, 1]
    double t = std::clamp(guess, lo, hi);
    for (int it = 0; it < 100; ++it) {
        const double r = t + L * phase.fraction(t) - h;
        if (r > 0.0)
            hi = t;
        else
            lo = t;
        if (std::abs(r) <= 1e-15 * (1.0 + std::abs(h)) || hi - lo <= 1e-15 * (1.0 + std::abs(h))) break;
        double next = t - r / (1.0 + L * phase.slope(t));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    return t;
}

}  // namespace

EnergyStepReport energy_step(SimState& s, const EnergyCoefficients& co, std::span<const double> source,
                             const SolverConfig& cfg) {
    const Grid& g = s.grid;
    const std::size_t n = g.cells();
    const double dt = cfg.dt;
    const double L = co.latent;
    EnergyStepReport rep;

    // Enthalpy T + L phi, transported by the current face velocities.
    Field enthalpy(n);
    for (std::size_t c = 0; c < n; ++c) enthalpy[c] = s.T[c] + L * s.phi[c];
    rep.advection_substeps = advect(s, enthalpy, dt, cfg);

    const double ax = co.diffusivity / (g.hx * g.hx);
    const double ay = co.diffusivity / (g.hy * g.hy);
    const double az = co.diffusivity / (g.hz * g.hz);
    const double top = co.surface_loss / g.hz;
    const double bottom = co.bottom_dirichlet ? 2.0 * co.diffusivity / (g.hz * g.hz) : 0.0;
    const int nx = g.nx, ny = g.ny, nz = g.nz;
    const std::size_t sx = 1, sy = std::size_t(nx), sz = std::size_t(nx) * ny;

    Field diag(n), inv_diag(n), rhs(n), phi_k(n);
    const LinearOperator apply = [&](std::span<const double> x, std::span<double> out) {
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const std::size_t c = g.idx(i, j, k);
                    const double xc = x[c];
                    double acc = diag[c] * xc;
                    if (i > 0) acc += ax * (xc - x[c - sx]);
                    if (i < nx - 1) acc += ax * (xc - x[c + sx]);
                    if (j > 0) acc += ay * (xc - x[c - sy]);
                    if (j < ny - 1) acc += ay * (xc - x[c + sy]);
                    if (k > 0) acc += az * (xc - x[c - sz]);
                    if (k < nz - 1) acc += az * (xc - x[c + sz]);
                    out[c] = acc;
                }
    };

    // Newton iteration in enthalpy: solve the linearised system for T, carry
    // the update over to H = T + L phi, then recover T from H per cell.
    Field T = s.T, slope(n);
    for (int it = 1; it <= cfg.latent_max_iterations; ++it) {
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const std::size_t c = g.idx(i, j, k);
                    slope[c] = L * co.phase.slope(T[c]);
                    phi_k[c] = co.phase.fraction(T[c]);
                    double d = (1.0 + slope[c]) / dt;
                    double b = (enthalpy[c] - L * phi_k[c] + slope[c] * T[c]) / dt + source[c];
                    if (k == 0) d += top;
                    if (k == nz - 1) {
                        d += bottom;
                        b += bottom * co.bottom_temp;
                    }
                    diag[c] = d;
                    rhs[c] = b;
                    const int neighbours_x = (i > 0) + (i < nx - 1);
                    const int neighbours_y = (j > 0) + (j < ny - 1);
                    const int neighbours_z = (k > 0) + (k < nz - 1);
                    inv_diag[c] = 1.0 / (d + neighbours_x * ax + neighbours_y * ay + neighbours_z * az);
                }

        Field lin_T = T;
        const auto lin = pcg(apply, inv_diag, rhs, lin_T, cfg.energy_tol, cfg.max_linear_iterations);
        rep.linear_iterations += lin.iterations;
        if (!lin.converged)
            throw SolverError(s.step, "energy solve did not converge (residual " + std::to_string(lin.residual_norm) +
                                          " after " + std::to_string(lin.iterations) + " iterations)");
        rep.latent_iterations = it;

        if (L == 0.0) {
            T = std::move(lin_T);
            break;
        }
        double change = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double h = T[c] + L * phi_k[c] + (1.0 + slope[c]) * (lin_T[c] - T[c]);
            T[c] = temperature_from_enthalpy(h, L, co.phase, T[c]);
            change = std::max(change, std::abs(co.phase.fraction(T[c]) - phi_k[c]));
        }
        if (change < cfg.latent_tol) break;
        if (it == cfg.latent_max_iterations) {
            rep.latent_converged = false;
            if (cfg.latent_failure_is_fatal)
                throw SolverError(s.step, "latent-heat iteration did not converge (|dphi| = " + std::to_string(change) + ")");
        }
    }

    s.T = std::move(T);
    for (std::size_t c = 0; c < n; ++c) s.phi[c] = co.phase.fraction(s.T[c]);
    return rep;
}

}  // namespace lpbf
