#include <algorithm>
#include <cmath>

#include "lpbf/error.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

void validate(const SolverConfig& c) {
    const auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ValidationError(field, what);
    };
    require(std::isfinite(c.grid_spacing) && c.grid_spacing > 0.0, "grid_spacing", "must be positive");
    require(std::isfinite(c.dt) && c.dt > 0.0, "dt", "must be positive");
    require(std::isfinite(c.t_end) && c.t_end >= c.dt, "t_end", "must be at least one time step");
    require(c.cfl > 0.0 && c.cfl <= 1.0, "cfl", "must lie in (0, 1]");
    require(c.max_substeps >= 1, "max_substeps", "must be at least 1");
    require(c.energy_tol > 0.0, "energy_tol", "must be positive");
    require(c.pressure_tol > 0.0, "pressure_tol", "must be positive");
    require(c.momentum_tol > 0.0, "momentum_tol", "must be positive");
    require(c.max_linear_iterations >= 1, "max_linear_iterations", "must be at least 1");
    require(c.latent_tol > 0.0, "latent_tol", "must be positive");
    require(c.latent_max_iterations >= 1, "latent_max_iterations", "must be at least 1");
    require(c.melt_threshold > 0.0 && c.melt_threshold < 1.0, "melt_threshold", "must lie in (0, 1)");
    require(c.solid_cut > 0.0 && c.solid_cut < 1.0, "solid_cut", "must lie in (0, 1)");
    require(c.div_tol > 0.0, "div_tol", "must be positive");
    require(std::isfinite(c.laser_x_start), "laser_x_start", "must be finite");
    require(c.snapshot_every >= 0, "snapshot_every", "must be non-negative");
}

SimState SimState::uniform(const Grid& grid, double temperature, const PhaseModel& phase) {
    SimState s;
    s.grid = grid;
    s.T.assign(grid.cells(), temperature);
    s.phi.assign(grid.cells(), phase.fraction(temperature));
    s.p.assign(grid.cells(), 0.0);
    s.u.assign(grid.u_size(), 0.0);
    s.v.assign(grid.v_size(), 0.0);
    s.w.assign(grid.w_size(), 0.0);
    return s;
}

Field SimState::speed() const {
    const Grid& g = grid;
    Field out(g.cells());
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double uc = 0.5 * (u[g.u_idx(i, j, k)] + u[g.u_idx(i + 1, j, k)]);
                const double vc = 0.5 * (v[g.v_idx(i, j, k)] + v[g.v_idx(i, j + 1, k)]);
                const double wc = 0.5 * (w[g.w_idx(i, j, k)] + w[g.w_idx(i, j, k + 1)]);
                out[g.idx(i, j, k)] = std::sqrt(uc * uc + vc * vc + wc * wc);
            }
    return out;
}

double SimState::max_speed() const {
    const Field s = speed();
    return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
}

Field SimState::divergence() const {
    const Grid& g = grid;
    Field out(g.cells());
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                out[g.idx(i, j, k)] = (u[g.u_idx(i + 1, j, k)] - u[g.u_idx(i, j, k)]) / g.hx +
                                      (v[g.v_idx(i, j + 1, k)] - v[g.v_idx(i, j, k)]) / g.hy +
                                      (w[g.w_idx(i, j, k + 1)] - w[g.w_idx(i, j, k)]) / g.hz;
    return out;
}

CaseModel make_model(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg) {
    validate(alloy);
    validate(pc, alloy, true);
    validate(cfg);
    CaseModel m;
    m.numbers = compute_numbers(alloy, pc);
    const auto& n = m.numbers;
    const double l = pc.layer_thickness;
    m.grid = Grid::from_extents(pc.domain_length / l, pc.domain_width / l, pc.domain_height / l, cfg.grid_spacing);
    m.preheat = nondim_temperature(pc.preheat_temp, alloy, pc);

    auto& e = m.energy;
    e.diffusivity = 1.0 / n.Pe;
    e.latent = n.Tc_over_Ste;
    e.surface_loss = cfg.boundary_losses ? n.Bi / n.Pe + n.rad_measure : 0.0;
    e.bottom_temp = m.preheat;
    e.bottom_dirichlet = !cfg.insulated_bottom;
    e.phase = PhaseModel::from(alloy, pc);

    auto& mo = m.momentum;
    const double pe2 = n.Pe * n.Pe;
    mo.viscosity = n.Pr / n.Pe;
    mo.buoyancy = n.Ra * n.Pr / pe2;
    mo.darcy = n.Pr / (n.Da * n.Pe);
    mo.marangoni = n.marangoni_sign * n.Ma * n.Pr / pe2;
    mo.solidus_temp = nondim_temperature(alloy.solidus, alloy, pc);
    mo.porosity_floor = pc.porosity_floor;

    m.laser = LaserModel::from(alloy, pc, cfg.laser_x_start);
    return m;
}

CaseRun run_model(const CaseModel& model, const SolverConfig& cfg, const StepObserver& observer) {
    validate(cfg);
    const Grid& g = model.grid;
    CaseRun run;
    run.state = SimState::uniform(g, model.preheat, model.energy.phase);
    SimState& s = run.state;

    const long steps = std::lround(cfg.t_end / cfg.dt);
    Field source(g.cells());
    bool latent_warned = false, divergence_warned = false;
    run.probes.reserve(std::size_t(steps));

    for (long n = 0; n < steps; ++n) {
        StepProbe probe;
        if (cfg.flow) {
            const auto mr = momentum_step(s, model.momentum, cfg);
            probe.max_divergence = mr.max_divergence;
            probe.momentum_substeps = mr.substeps;
            if (mr.max_divergence > cfg.div_tol && !divergence_warned) {
                run.warnings.push_back("step " + std::to_string(s.step) + ": divergence " +
                                       std::to_string(mr.max_divergence) + " above tolerance");
                divergence_warned = true;
            }
        }

        model.laser.cell_average(g, s.t + 0.5 * cfg.dt, source);
        double power = 0.0;
        for (double q : source) power += q;
        run.deposited += power * cfg.dt * g.cell_volume();

        const auto er = energy_step(s, model.energy, source, cfg);
        probe.latent_iterations = er.latent_iterations;
        if (!er.latent_converged && !latent_warned) {
            run.warnings.push_back("step " + std::to_string(s.step) + ": latent-heat iteration hit its limit");
            latent_warned = true;
        }

        s.t = (n + 1) * cfg.dt;
        ++s.step;

        probe.step = s.step;
        probe.t = s.t;
        probe.Tmax = *std::max_element(s.T.begin(), s.T.end());
        probe.vmax = cfg.flow ? s.max_speed() : 0.0;
        probe.melt_cells = std::size_t(
            std::count_if(s.phi.begin(), s.phi.end(), [&](double f) { return f >= cfg.melt_threshold; }));
        run.Tmax_probe = std::max(run.Tmax_probe, probe.Tmax);
        run.vmax_probe = std::max(run.vmax_probe, probe.vmax);
        run.max_divergence = std::max(run.max_divergence, probe.max_divergence);
        run.probes.push_back(probe);
        if (observer) observer(s, probe);
    }
    return run;
}

CaseRun run_case(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg,
                 const StepObserver& observer) {
    return run_model(make_model(alloy, pc, cfg), cfg, observer);
}

}  // namespace lpbf
