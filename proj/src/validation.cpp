#include "lpbf/validation.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "lpbf/correlations.hpp"
#include "lpbf/config.hpp"
#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"

namespace lpbf {

namespace {

constexpr double pi = std::numbers::pi;

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const auto fit = fit_line(lx, ly);
    return fit ? fit->slope : std::nan("");
}

}  // namespace

ConvergenceStudy manufactured_convergence(int dims, const std::vector<int>& resolutions, double diffusivity_error) {
    if (dims != 1 && dims != 3) throw ValidationError("dims", "must be 1 or 3");
    constexpr double D = 1.0;
    SolverConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    cfg.energy_tol = 1e-12;

    EnergyCoefficients co;
    co.diffusivity = D * diffusivity_error;
    co.latent = 0.0;
    co.surface_loss = 0.0;
    co.bottom_dirichlet = false;

    ConvergenceStudy study;
    for (int n : resolutions) {
        Grid g;
        const double h = 1.0 / n;
        g.nx = n;
        g.ny = dims == 3 ? n : 1;
        g.nz = dims == 3 ? n : 1;
        g.hx = g.hy = g.hz = h;

        Field shape(g.cells());
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    double s = std::cos(pi * g.x_center(i));
                    if (dims == 3) s *= std::cos(pi * (j + 0.5) * h) * std::cos(pi * g.z_center(k));
                    shape[g.idx(i, j, k)] = s;
                }

        SimState s = SimState::uniform(g, 0.0, co.phase);
        s.T = shape;
        Field source(g.cells());
        const long steps = std::lround(cfg.t_end / cfg.dt);
        for (long step = 1; step <= steps; ++step) {
            const double t = step * cfg.dt;
            for (std::size_t c = 0; c < source.size(); ++c) source[c] = shape[c] * (1.0 + D * dims * pi * pi * (1.0 + t));
            energy_step(s, co, source, cfg);
        }
        double err = 0.0;
        for (std::size_t c = 0; c < shape.size(); ++c)
            err = std::max(err, std::abs(s.T[c] - (1.0 + cfg.t_end) * shape[c]));
        study.spacings.push_back(h);
        study.errors.push_back(err);
    }
    study.order = log_slope(study.spacings, study.errors);
    return study;
}

double half_space_flux_error() {
    constexpr double D = 1.0, q = 1.0, t_end = 1.0;
    SolverConfig cfg;
    cfg.dt = 0.005;
    cfg.t_end = t_end;
    cfg.energy_tol = 1e-12;

    EnergyCoefficients co;
    co.diffusivity = D;
    co.latent = 0.0;
    co.surface_loss = 0.0;
    co.bottom_dirichlet = false;

    Grid g;
    g.nx = g.ny = 1;
    g.nz = 500;
    g.hx = g.hy = 1.0;
    g.hz = 0.02;
    SimState s = SimState::uniform(g, 0.0, co.phase);
    Field source(g.cells(), 0.0);
    source[0] = q / g.hz;  // surface flux entering the top cell
    const long steps = std::lround(t_end / cfg.dt);
    for (long n = 0; n < steps; ++n) energy_step(s, co, source, cfg);

    const double len = std::sqrt(D * t_end);
    const auto exact = [&](double z) {
        const double x = z / (2.0 * len);
        const double ierfc = std::exp(-x * x) / std::sqrt(pi) - x * std::erfc(x);
        return 2.0 * q * len / D * ierfc;
    };
    const auto numeric = [&](double z) {
        const double pos = z / g.hz - 0.5;
        const int k = int(std::floor(pos));
        const double w = pos - k;
        return (1.0 - w) * s.T[std::size_t(k)] + w * s.T[std::size_t(k + 1)];
    };
    double worst = 0.0;
    for (double depth : {0.25, 0.5, 1.0}) {
        const double z = depth * len;
        worst = std::max(worst, std::abs(numeric(z) - exact(z)) / exact(z));
    }
    return worst;
}

BalanceResult insulated_balance(const AlloyProperties& alloy, const ProcessCase& pc, SolverConfig cfg) {
    cfg.boundary_losses = false;
    cfg.insulated_bottom = true;
    const CaseModel model = make_model(alloy, pc, cfg);
    const double L = model.energy.latent;
    const double vol = model.grid.cell_volume();
    const auto enthalpy = [&](const SimState& s) {
        double sum = 0.0;
        for (std::size_t c = 0; c < s.T.size(); ++c) sum += (s.T[c] + L * s.phi[c]) * vol;
        return sum;
    };
    const SimState start = SimState::uniform(model.grid, model.preheat, model.energy.phase);
    const CaseRun run = run_model(model, cfg);
    BalanceResult r;
    r.deposited = run.deposited;
    r.enthalpy_change = enthalpy(run.state) - enthalpy(start);
    r.relative_error = std::abs(r.enthalpy_change - r.deposited) / r.deposited;
    return r;
}

DivergenceResult divergence_history(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg) {
    DivergenceResult r;
    run_case(alloy, pc, cfg, [&](const SimState&, const StepProbe& p) {
        ++r.steps;
        r.worst = std::max(r.worst, p.max_divergence);
        r.vmax = std::max(r.vmax, p.vmax);
        if (p.max_divergence > cfg.div_tol) ++r.violations;
    });
    return r;
}

LinearityResult marangoni_linearity(const std::vector<double>& stresses) {
    Grid g;
    g.nx = 16;
    g.ny = 8;
    g.nz = 8;
    SolverConfig cfg;
    cfg.dt = 1.0;
    cfg.pressure_tol = 1e-11;
    cfg.momentum_tol = 1e-11;

    LinearityResult r;
    r.stresses = stresses;
    for (double stress : stresses) {
        PhaseModel liquid;
        SimState s = SimState::uniform(g, 0.0, liquid);
        std::fill(s.phi.begin(), s.phi.end(), 1.0);
        for (int k = 0; k < g.nz; ++k)
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) s.T[g.idx(i, j, k)] = g.x_center(i);  // unit surface gradient

        MomentumCoefficients co;
        co.viscosity = 1.0;
        co.marangoni = stress;
        double previous = 0.0, speed = 0.0;
        for (int step = 0; step < 2000; ++step) {
            momentum_step(s, co, cfg);
            speed = s.max_speed();
            if (step > 0 && std::abs(speed - previous) <= 1e-12 * speed) break;
            previous = speed;
        }
        r.speeds.push_back(speed);
    }
    r.slope = log_slope(r.stresses, r.speeds);
    return r;
}

std::vector<ValidationCheck> run_validation(const ValidationOptions& options) {
    std::vector<ValidationCheck> checks;
    const auto timed = [&](const std::string& name, const std::string& criterion, auto&& body) {
        const auto start = std::chrono::steady_clock::now();
        ValidationCheck c;
        c.name = name;
        c.criterion = criterion;
        body(c);
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        checks.push_back(c);
    };

    const std::vector<int> res1 = {16, 32, 64};
    const std::vector<int> res3 = options.quick ? std::vector<int>{8, 12, 16} : std::vector<int>{8, 16, 32};
    timed("mms_order_1d", "|order - 2| <= 0.3", [&](ValidationCheck& c) {
        c.value = manufactured_convergence(1, res1, options.diffusivity_error).order;
        c.passed = std::abs(c.value - 2.0) <= 0.3;
    });
    timed("mms_order_3d", "|order - 2| <= 0.3", [&](ValidationCheck& c) {
        c.value = manufactured_convergence(3, res3, options.diffusivity_error).order;
        c.passed = std::abs(c.value - 2.0) <= 0.3;
    });
    timed("half_space_flux", "relative error <= 0.05", [&](ValidationCheck& c) {
        c.value = half_space_flux_error();
        c.passed = c.value <= 0.05;
    });

    const Catalog catalog = builtin_catalog();
    const auto& ss316 = catalog.alloy("SS316");
    const ProcessCase pc = make_case("SS316", 90.0, 0.5);
    SolverConfig cfg;
    if (options.quick) cfg = coarse(cfg);
    timed("enthalpy_balance", "relative error <= 0.01", [&](ValidationCheck& c) {
        c.value = insulated_balance(ss316, pc, cfg).relative_error;
        c.passed = c.value <= 0.01;
    });
    timed("projection_divergence", "max per-step divergence <= div_tol", [&](ValidationCheck& c) {
        const auto d = divergence_history(ss316, pc, cfg);
        c.value = d.worst;
        c.passed = d.violations == 0 && d.steps > 0;
    });
    timed("marangoni_linearity", "|log-log slope - 1| <= 0.1", [&](ValidationCheck& c) {
        c.value = marangoni_linearity({1e-3, 2e-3, 4e-3}).slope;
        c.passed = std::abs(c.value - 1.0) <= 0.1;
    });
    return checks;
}

std::string format_checks(const std::vector<ValidationCheck>& checks) {
    std::string out;
    for (const auto& c : checks) {
        std::string name = c.name;
        name.resize(std::max<std::size_t>(name.size(), 24), ' ');
        out += std::string(c.passed ? "PASS  " : "FAIL  ") + name + csv::fmt_g(c.value, 6) + "  (" + c.criterion +
               ", " + csv::fmt_g(c.seconds, 3) + " s)\n";
    }
    return out;
}

}  // namespace lpbf
