#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lpbf {

/// Constant thermophysical properties of one alloy, SI units.
struct AlloyProperties {
    std::string name;
    double density = 0.0;                    // kg/m^3
    double specific_heat = 0.0;              // J/(kg K)
    double conductivity = 0.0;               // W/(m K)
    double viscosity = 0.0;                  // kg/(m s)
    double surface_tension_gradient = 0.0;   // N/(m K), negative for all built-in alloys
    double expansion_coefficient = 0.0;      // 1/K
    double permeability = 0.0;               // m^2
    double latent_heat = 0.0;                // J/kg
    double solidus = 0.0;                    // K
    double liquidus = 0.0;                   // K

    bool operator==(const AlloyProperties&) const = default;
};

/// One laser scan: process variables plus the environment and mushy-zone
/// parameters that enter the dimensionless groups. Defaults are the shared
/// settings of the built-in campaign.
struct ProcessCase {
    std::string id;
    std::string alloy;
    double power = 0.0;                      // W
    double scan_speed = 0.0;                 // m/s
    double layer_thickness = 2.0e-5;         // m
    double spot_radius = 1.0e-4;             // m
    double distribution_factor = 2.0;
    double absorptivity = 1.0;
    double preheat_temp = 353.0;             // K
    double ambient_temp = 301.15;            // K
    double heat_transfer_coeff = 10.0;       // W/(m^2 K)
    double stefan_boltzmann = 5.67e-8;       // W/(m^2 K^4)
    double gravity = 9.81;                   // m/s^2
    double mushy_length = 2.0e-5;            // m, defaults to the layer thickness
    double interface_param = 1.0;
    double porosity_floor = 1.0e-5;
    double domain_length = 3.0e-3;           // m, along the scan
    double domain_width = 5.0e-4;            // m
    double domain_height = 5.0e-4;           // m

    bool operator==(const ProcessCase&) const = default;
};

/// Alloys plus the process matrix for each alloy (file order preserved).
struct Catalog {
    std::vector<AlloyProperties> alloys;
    std::map<std::string, std::vector<ProcessCase>> cases;

    /// Throws ValidationError("alloy", ...) for an unknown name.
    const AlloyProperties& alloy(std::string_view name) const;
    bool contains(std::string_view name) const;
    /// All cases, alloys in catalog order.
    std::vector<ProcessCase> all_cases() const;
};

void validate(const AlloyProperties& alloy);
/// Case invariants. `allow_zero_power` admits P = 0 for unheated control runs.
void validate(const ProcessCase& pc, const AlloyProperties& alloy, bool allow_zero_power = false);

/// Parses `alloys.csv` text. Header `name,rho,c,k,mu,dgamma_dT,beta,kappa,L,T_s,T_l`;
/// blank and `#` lines are ignored.
std::vector<AlloyProperties> load_alloys(std::string_view text);
std::string serialize_alloys(const std::vector<AlloyProperties>& alloys);

/// Five alloys, twelve (power, speed) pairs each.
Catalog builtin_catalog();

/// A case with the shared defaults for the given alloy, power and speed.
ProcessCase make_case(std::string alloy, double power, double scan_speed);

/// Parses `cases.csv` text: `alloy,P_W,v_p_m_s` followed by any of the optional
/// columns `l_p_m,r_p_m,f,a_abs,T_b_K,T_inf_K,h,d_phi_m,lambda`. Missing or empty
/// optional cells take the defaults; d_phi defaults to the row's l_p.
std::vector<ProcessCase> load_cases(std::string_view text, const Catalog& catalog);
std::string serialize_cases(const std::vector<ProcessCase>& cases);

}  // namespace lpbf
