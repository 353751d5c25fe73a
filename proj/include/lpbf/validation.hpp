#pragma once

#include <string>
#include <vector>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

struct ConvergenceStudy {
    std::vector<double> spacings;
    std::vector<double> errors;  // max-norm error at the final time
    double order = 0.0;          // least-squares slope of log error against log spacing
};

/// Manufactured solution T = (1 + t) prod cos(pi x_d) on the unit interval,
/// square or cube (dims = 1 or 3) with adiabatic walls, driven by the matching
/// source through energy_step. The solution is linear in time, so backward
/// Euler adds no temporal error and the study isolates the spatial order.
/// `diffusivity_error` scales the solver's diffusivity away from the one the
/// source was built for (fault injection; 1 means none).
ConvergenceStudy manufactured_convergence(int dims, const std::vector<int>& resolutions, double diffusivity_error = 1.0);

/// Constant flux into a half-space from t = 0, compared with the similarity
/// solution (2 q / D) sqrt(D t) ierfc(z / (2 sqrt(D t))). Returns the largest relative
/// error over probes at depths 0.25, 0.5 and 1 diffusion lengths.
double half_space_flux_error();

struct BalanceResult {
    double deposited = 0.0;         // integrated source
    double enthalpy_change = 0.0;   // sum of (T + L phi) volume, end minus start
    double relative_error = 0.0;    // |change - deposited| / deposited
};

/// Runs the case in an insulated box without surface losses and compares the
/// enthalpy gain with the deposited laser energy.
BalanceResult insulated_balance(const AlloyProperties& alloy, const ProcessCase& pc, SolverConfig cfg);

struct DivergenceResult {
    double worst = 0.0;       // largest per-step divergence measure
    std::size_t steps = 0;
    std::size_t violations = 0;  // steps above div_tol
    double vmax = 0.0;
};

DivergenceResult divergence_history(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg);

struct LinearityResult {
    std::vector<double> stresses;
    std::vector<double> speeds;  // steady max speed per stress
    double slope = 0.0;          // log-log
};

/// Fully liquid box driven by a uniform surface shear at low Reynolds number.
LinearityResult marangoni_linearity(const std::vector<double>& stresses);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string criterion;
    double seconds = 0.0;
};

struct ValidationOptions {
    bool quick = false;
    double diffusivity_error = 1.0;  // fault injection for the negative control
};

std::vector<ValidationCheck> run_validation(const ValidationOptions& options);
std::string format_checks(const std::vector<ValidationCheck>& checks);

}  // namespace lpbf
