#include "lpbf/dimensionless.hpp"

#include <cmath>

#include "lpbf/error.hpp"

namespace lpbf {

DimensionlessSet compute_numbers(const AlloyProperties& a, const ProcessCase& pc) {
    validate(a);
    validate(pc, a, true);

    DimensionlessSet n;
    const double l = pc.layer_thickness;
    const double v = pc.scan_speed;
    const double dT = a.liquidus - pc.ambient_temp;
    const double alpha = a.conductivity / (a.density * a.specific_heat);
    const double nu = a.viscosity / a.density;

    n.thermal_diffusivity = alpha;
    n.dT_ref = dT;
    n.char_time = l / v;

    n.Pr = nu / alpha;
    n.Gr = pc.gravity * l * l * l * a.expansion_coefficient * dT / (nu * nu);
    n.Ra = n.Gr * n.Pr;
    n.Da = a.permeability / (pc.mushy_length * pc.mushy_length);
    n.Ma = std::abs(a.surface_tension_gradient) * l * dT / (a.viscosity * alpha);
    n.marangoni_sign = a.surface_tension_gradient < 0.0 ? -1.0 : 1.0;
    n.Pe = l * v / alpha;
    n.Ste = a.specific_heat * (a.liquidus - a.solidus) / a.latent_heat;
    n.Q = pc.power / (a.density * a.specific_heat * dT * v * l * l);
    n.E = pc.power / (a.conductivity * dT * l);
    n.Bi = pc.heat_transfer_coeff * l / a.conductivity;
    n.rad_measure = pc.stefan_boltzmann * dT * dT * dT / (a.density * a.specific_heat * v);
    n.Tc = (a.liquidus - a.solidus) / dT;
    n.Tc_over_Ste = n.Tc / n.Ste;
    return n;
}

double nondim_temperature(double kelvin, const AlloyProperties& a, const ProcessCase& pc) {
    return (kelvin - pc.ambient_temp) / (a.liquidus - pc.ambient_temp);
}

double redim_temperature(double scaled, const AlloyProperties& a, const ProcessCase& pc) {
    return pc.ambient_temp + scaled * (a.liquidus - pc.ambient_temp);
}

double u_hat(const DimensionlessSet& n, const UhatCoefficients& c) { return c.a0 + c.a1 * n.E + c.a2 * n.Pe; }

CompositeMeasures composite_measures(const DimensionlessSet& n, double uhat) {
    if (!(n.Tc > 0.0)) throw DomainError("Tc must be positive");
    return {n.Ma * uhat, n.Ste * uhat / n.Tc};
}

}  // namespace lpbf
