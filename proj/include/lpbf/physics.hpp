#pragma once

#include <span>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/grid.hpp"

namespace lpbf {

/// Hyperbolic liquid fraction in scaled temperature.
///
/// phi = e^xi / (e^xi + e^-xi) with xi = lambda (T - T_m) / (T_l - T_s) and
/// T_m the solidus/liquidus midpoint, so phi(T_m) = 1/2.
struct PhaseModel {
    double midpoint = 0.0;  // scaled T_m
    double interval = 1.0;  // scaled (T_l - T_s), i.e. Tc
    double lambda = 1.0;

    static PhaseModel from(const AlloyProperties& alloy, const ProcessCase& pc);

    double fraction(double t) const;
    /// d phi / d T (scaled).
    double slope(double t) const;
};

double liquid_fraction(double scaled_temp, const AlloyProperties& alloy, const ProcessCase& pc);

/// Moving Gaussian volumetric source in scaled units. The beam centre sits on
/// the top surface at (x_start + t, 0, 0) and travels at unit speed.
struct LaserModel {
    double peak = 0.0;       // a_abs f Q / (pi r^2 l)
    double f = 2.0;          // distribution factor
    double radius = 5.0;     // r_p / l_p
    double thickness = 1.0;  // l_p / l_p
    double x_start = 0.0;

    static LaserModel from(const AlloyProperties& alloy, const ProcessCase& pc, double x_start);

    double operator()(double x, double y, double depth, double t) const;

    /// Integral over the half-space depth >= 0 (scaled power per unit time).
    double total_power() const;

    /// Exact average of the source over every cell of `grid` at time `t`.
    void cell_average(const Grid& grid, double t, std::span<double> out) const;
};

double laser_source(double x, double y, double depth, double t, const AlloyProperties& alloy,
                    const ProcessCase& pc, double x_start = 0.0);

/// Fraction of the absorbed power a_abs P deposited in the half-space for a
/// distribution factor f: (1/2) sqrt(pi/f).
double gaussian_half_space_factor(double f);

}  // namespace lpbf
