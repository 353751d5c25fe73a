#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/dimensionless.hpp"
#include "lpbf/grid.hpp"
#include "lpbf/physics.hpp"

namespace lpbf {

struct SolverConfig {
    double grid_spacing = 1.0;     // dx = dy = dz in l_p units
    double dt = 1.0;
    double t_end = 100.0;
    double cfl = 0.5;              // advective CFL for sub-stepping
    int max_substeps = 400;        // per time step, momentum and energy advection
    double energy_tol = 1e-9;      // relative residual of each energy solve
    double pressure_tol = 1e-9;    // max |div u| h / max |u| accepted from the Poisson solve
    double momentum_tol = 1e-9;    // relative residual of each viscous solve
    int max_linear_iterations = 5000;
    double latent_tol = 1e-6;      // ||delta phi||_inf
    int latent_max_iterations = 50;
    bool latent_failure_is_fatal = false;
    double melt_threshold = 0.5;
    double solid_cut = 1e-3;       // cells with phi below this carry no flow
    double div_tol = 1e-8;
    double laser_x_start = 10.0;
    bool flow = true;
    bool boundary_losses = true;
    bool insulated_bottom = false;
    int snapshot_every = 0;        // 0 disables periodic snapshots

    bool operator==(const SolverConfig&) const = default;
};

void validate(const SolverConfig& cfg);

/// Fields of one running case. Velocities live on cell faces.
struct SimState {
    Grid grid;
    Field T;    // scaled temperature
    Field phi;  // liquid fraction
    Field p;    // scaled pressure
    Field u, v, w;
    double t = 0.0;
    std::size_t step = 0;

    static SimState uniform(const Grid& grid, double temperature, const PhaseModel& phase);

    /// Cell-centred speed |v| from face averages.
    Field speed() const;
    double max_speed() const;
    /// Discrete divergence per cell.
    Field divergence() const;
};

struct EnergyCoefficients {
    double diffusivity = 1.0;   // 1 / Pe
    double latent = 0.0;        // Tc / Ste
    double surface_loss = 0.0;  // Bi / Pe + t_s / Bo on the top surface
    double bottom_temp = 0.0;   // Dirichlet value on the bottom face
    bool bottom_dirichlet = true;
    PhaseModel phase;
};

struct MomentumCoefficients {
    double viscosity = 0.0;   // Pr / Pe
    double buoyancy = 0.0;    // Ra Pr / Pe^2, acting upward on T - T_s > 0
    double darcy = 0.0;       // Pr / (Da Pe), times (1 - phi)^2 / (phi^3 + delta)
    double marangoni = 0.0;   // signed Ma Pr / Pe^2 surface shear coefficient
    double solidus_temp = 0.0;
    double porosity_floor = 1e-5;
};

/// Everything a case needs to time-step, built from the dimensionless groups.
struct CaseModel {
    DimensionlessSet numbers;
    EnergyCoefficients energy;
    MomentumCoefficients momentum;
    LaserModel laser;
    double preheat = 0.0;  // scaled preheat temperature
    Grid grid;
};

CaseModel make_model(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg);

struct EnergyStepReport {
    int latent_iterations = 0;
    bool latent_converged = true;
    int linear_iterations = 0;
    int advection_substeps = 0;
};

/// Advances T and phi by cfg.dt with the face velocities already in `state`.
/// `source` is the volumetric heating per cell for this step (scaled units).
/// Diffusion, latent heat, surface losses and the bottom Dirichlet condition
/// are implicit; advection of enthalpy is explicit upwind with CFL sub-steps.
EnergyStepReport energy_step(SimState& state, const EnergyCoefficients& coeffs, std::span<const double> source,
                             const SolverConfig& cfg);

struct MomentumStepReport {
    int substeps = 0;
    int linear_iterations = 0;
    double max_divergence = 0.0;  // max |div u| h / max |u|, with a quiescent floor
    std::size_t active_cells = 0;
};

/// Advances the face velocities and pressure by cfg.dt with a projection
/// scheme on the cells whose liquid fraction reaches cfg.solid_cut. Other
/// faces carry zero velocity.
MomentumStepReport momentum_step(SimState& state, const MomentumCoefficients& coeffs, const SolverConfig& cfg);

/// Darcy damping factor (1 - phi)^2 / (phi^3 + delta).
double kozeny_carman(double phi, double delta);

struct StepProbe {
    std::size_t step = 0;
    double t = 0.0;
    double Tmax = 0.0;
    double vmax = 0.0;
    std::size_t melt_cells = 0;
    double max_divergence = 0.0;
    int momentum_substeps = 0;
    int latent_iterations = 0;
};

struct CaseRun {
    SimState state;
    std::vector<StepProbe> probes;
    double Tmax_probe = 0.0;
    double vmax_probe = 0.0;
    double max_divergence = 0.0;
    double deposited = 0.0;  // sum of source * dt * cell volume
    std::vector<std::string> warnings;
};

using StepObserver = std::function<void(const SimState&, const StepProbe&)>;

/// Runs one case from the uniform preheat state to cfg.t_end. Deterministic:
/// identical inputs give bit-identical probes. Step failures throw SolverError.
CaseRun run_case(const AlloyProperties& alloy, const ProcessCase& pc, const SolverConfig& cfg,
                 const StepObserver& observer = {});

/// Same, starting from an explicit model (used by verification runs).
CaseRun run_model(const CaseModel& model, const SolverConfig& cfg, const StepObserver& observer = {});

}  // namespace lpbf
