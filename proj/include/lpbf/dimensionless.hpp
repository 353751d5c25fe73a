#pragma once

#include "lpbf/alloy_catalog.hpp"

namespace lpbf {

/// The dimensionless groups of the scaled energy and momentum equations for
/// one (alloy, case) pair, plus the scales used to build them.
///
/// Length is scaled by the layer thickness l_p, velocity by the scan speed
/// v_p, time by t_p = l_p / v_p and temperature by (T - T_inf) / (T_l - T_inf).
struct DimensionlessSet {
    double Pr = 0.0;           // (mu/rho) / alpha_th
    double Gr = 0.0;           // g l_p^3 beta dT_ref / (mu/rho)^2
    double Ra = 0.0;           // Gr * Pr
    double Da = 0.0;           // kappa / d_phi^2
    double Ma = 0.0;           // |dgamma/dT| l_p dT_ref / (mu alpha_th), stored as a magnitude
    double Pe = 0.0;           // l_p v_p / alpha_th
    double Ste = 0.0;          // c (T_l - T_s) / L
    double Q = 0.0;            // P / (rho c dT_ref v_p l_p^2)
    double E = 0.0;            // P / (k dT_ref l_p) == Pe * Q
    double Bi = 0.0;           // h l_p / k
    double rad_measure = 0.0;  // sigma dT_ref^3 / (rho c v_p)
    double Tc = 0.0;           // (T_l - T_s) / dT_ref
    double Tc_over_Ste = 0.0;  // L / (c dT_ref)

    double thermal_diffusivity = 0.0;  // m^2/s
    double dT_ref = 0.0;               // K
    double char_time = 0.0;            // s
    double marangoni_sign = -1.0;      // sign of dgamma/dT (+1 when zero)

    bool operator==(const DimensionlessSet&) const = default;
};

struct UhatCoefficients {
    double a0 = 0.8146;
    double a1 = 0.0082;
    double a2 = -0.1654;
};

struct CompositeMeasures {
    double MaUhat = 0.0;
    double SteUhat_over_Tc = 0.0;
};

DimensionlessSet compute_numbers(const AlloyProperties& alloy, const ProcessCase& pc);

double nondim_temperature(double kelvin, const AlloyProperties& alloy, const ProcessCase& pc);
double redim_temperature(double scaled, const AlloyProperties& alloy, const ProcessCase& pc);

/// a0 + a1 E + a2 Pe.
double u_hat(const DimensionlessSet& n, const UhatCoefficients& coeffs);

CompositeMeasures composite_measures(const DimensionlessSet& n, double uhat);

}  // namespace lpbf
