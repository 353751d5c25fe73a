#include "lpbf/alloy_catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"

namespace lpbf {

namespace {

constexpr std::array<const char*, 11> kAlloyHeader = {"name", "rho",   "c",     "k",   "mu", "dgamma_dT",
                                                      "beta", "kappa", "L",     "T_s", "T_l"};

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be a positive finite number");
}

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

}  // namespace

const AlloyProperties& Catalog::alloy(std::string_view name) const {
    for (const auto& a : alloys)
        if (a.name == name) return a;
    throw ValidationError("alloy", "unknown alloy '" + std::string(name) + "'");
}

bool Catalog::contains(std::string_view name) const {
    return std::any_of(alloys.begin(), alloys.end(), [&](const auto& a) { return a.name == name; });
}

std::vector<ProcessCase> Catalog::all_cases() const {
    std::vector<ProcessCase> out;
    for (const auto& a : alloys) {
        const auto it = cases.find(a.name);
        if (it != cases.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
}

void validate(const AlloyProperties& a) {
    if (a.name.empty()) throw ValidationError("name", "must not be empty");
    require_positive(a.density, "rho");
    require_positive(a.specific_heat, "c");
    require_positive(a.conductivity, "k");
    require_positive(a.viscosity, "mu");
    require_finite(a.surface_tension_gradient, "dgamma_dT");
    require_finite(a.expansion_coefficient, "beta");
    require_positive(a.permeability, "kappa");
    require_positive(a.latent_heat, "L");
    require_positive(a.solidus, "T_s");
    if (!(a.liquidus > a.solidus) || !std::isfinite(a.liquidus))
        throw ValidationError("T_l", "liquidus must exceed solidus");
}

void validate(const ProcessCase& pc, const AlloyProperties& a, bool allow_zero_power) {
    if (pc.alloy != a.name) throw ValidationError("alloy", "case refers to '" + pc.alloy + "', not '" + a.name + "'");
    if (!(allow_zero_power && pc.power == 0.0)) require_positive(pc.power, "P_W");
    require_positive(pc.scan_speed, "v_p_m_s");
    require_positive(pc.layer_thickness, "l_p_m");
    require_positive(pc.spot_radius, "r_p_m");
    require_positive(pc.distribution_factor, "f");
    if (!(pc.absorptivity > 0.0 && pc.absorptivity <= 1.0)) throw ValidationError("a_abs", "must lie in (0, 1]");
    require_positive(pc.ambient_temp, "T_inf_K");
    if (!(pc.preheat_temp > pc.ambient_temp)) throw ValidationError("T_b_K", "preheat must exceed ambient");
    if (!(pc.preheat_temp < a.solidus)) throw ValidationError("T_b_K", "preheat must be below solidus");
    if (!(pc.heat_transfer_coeff >= 0.0)) throw ValidationError("h", "must be non-negative");
    if (!(pc.stefan_boltzmann >= 0.0)) throw ValidationError("sigma_SB", "must be non-negative");
    if (!(pc.gravity >= 0.0)) throw ValidationError("g", "must be non-negative");
    require_positive(pc.mushy_length, "d_phi_m");
    require_positive(pc.interface_param, "lambda");
    require_positive(pc.porosity_floor, "delta");
    require_positive(pc.domain_length, "L_x");
    require_positive(pc.domain_width, "W_y");
    require_positive(pc.domain_height, "H_z");
}

std::vector<AlloyProperties> load_alloys(std::string_view text) {
    const auto lines = csv::content_lines(text);
    std::vector<AlloyProperties> out;
    if (lines.empty()) return out;

    const auto header = csv::split(lines.front().second);
    if (header.size() != kAlloyHeader.size() || !std::equal(header.begin(), header.end(), kAlloyHeader.begin()))
        throw ParseError(0, "alloy table header must be name,rho,c,k,mu,dgamma_dT,beta,kappa,L,T_s,T_l");

    std::set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = csv::split(lines[r].second);
        if (cells.size() != kAlloyHeader.size())
            throw ParseError(r, "expected " + std::to_string(kAlloyHeader.size()) + " columns, got " +
                                    std::to_string(cells.size()));
        std::array<double, 10> v{};
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto d = csv::to_double(cells[c]);
            if (!d) throw ParseError(r, std::string("column ") + kAlloyHeader[c] + " is not a number: '" + cells[c] + "'");
            v[c - 1] = *d;
        }
        AlloyProperties a{cells[0], v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
        try {
            validate(a);
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), "row " + std::to_string(r) + ": " + e.what());
        }
        if (!seen.insert(a.name).second) throw ValidationError("name", "duplicate alloy '" + a.name + "'");
        out.push_back(std::move(a));
    }
    return out;
}

std::string serialize_alloys(const std::vector<AlloyProperties>& alloys) {
    std::ostringstream os;
    os << "name,rho,c,k,mu,dgamma_dT,beta,kappa,L,T_s,T_l\n";
    for (const auto& a : alloys) {
        os << a.name;
        for (double v : {a.density, a.specific_heat, a.conductivity, a.viscosity, a.surface_tension_gradient,
                         a.expansion_coefficient, a.permeability, a.latent_heat, a.solidus, a.liquidus})
            os << ',' << csv::fmt(v);
        os << '\n';
    }
    return os.str();
}

ProcessCase make_case(std::string alloy, double power, double scan_speed) {
    ProcessCase pc;
    pc.alloy = std::move(alloy);
    pc.power = power;
    pc.scan_speed = scan_speed;
    return pc;
}

Catalog builtin_catalog() {
    Catalog cat;
    // Averaged solid/liquid properties.
    cat.alloys = {
        {"SS316", 7800, 490, 36.5, 7.0e-3, -4.00e-4, 5.85e-5, 5.56e-13, 2.72e5, 1693, 1733},
        {"Ti6Al4V", 4000, 570, 7.3, 4.0e-3, -2.63e-3, 2.50e-5, 5.56e-13, 2.84e5, 1878, 1928},
        {"IN718", 8100, 435, 11.4, 5.0e-3, -3.70e-3, 4.8e-5, 5.56e-13, 2.09e5, 1533, 1609},
        {"AlSi10Mg", 2670, 890, 173.0, 1.3e-3, -3.5e-4, 2.4e-5, 5.56e-13, 4.23e5, 831, 867},
        {"AZ91D", 1675, 1122, 77.5, 3.0e-3, -2.13e-4, 9.54e-5, 5.56e-13, 3.73e5, 743, 868},
    };

    using Pairs = std::vector<std::pair<double, double>>;
    const std::map<std::string, Pairs> matrix = {
        {"SS316",
         {{70, 0.3}, {80, 0.4}, {90, 0.5}, {100, 0.6}, {110, 0.7}, {110, 0.8}, {110, 0.9}, {110, 1.0},
          {65, 0.5}, {75, 0.5}, {85, 0.5}, {95, 0.5}}},
        {"Ti6Al4V",
         {{15, 0.2}, {25, 0.5}, {35, 0.7}, {45, 0.9}, {40, 0.6}, {40, 0.7}, {40, 0.8}, {40, 1.0},
          {35, 0.9}, {40, 0.9}, {45, 0.9}, {50, 0.9}}},
        {"IN718",
         {{20, 0.15}, {30, 0.25}, {40, 0.45}, {50, 0.75}, {45, 0.80}, {45, 0.90}, {45, 1.0}, {45, 1.1},
          {53, 0.95}, {55, 0.95}, {58, 0.95}, {60, 0.95}}},
        {"AlSi10Mg",
         {{75, 0.35}, {85, 0.45}, {95, 0.55}, {105, 0.65}, {100, 0.6}, {100, 0.7}, {100, 0.8}, {100, 0.9},
          {90, 1.1}, {95, 1.1}, {100, 1.1}, {110, 1.1}}},
        {"AZ91D",
         {{35, 0.25}, {40, 0.30}, {45, 0.35}, {50, 0.45}, {40, 0.30}, {40, 0.40}, {40, 0.50}, {40, 0.60},
          {40, 0.60}, {50, 0.60}, {60, 0.60}, {70, 0.60}}},
    };
    for (const auto& a : cat.alloys) {
        auto& list = cat.cases[a.name];
        int n = 0;
        for (const auto& [p, v] : matrix.at(a.name)) {
            auto pc = make_case(a.name, p, v);
            char id[64];
            std::snprintf(id, sizeof(id), "%s-%02d", a.name.c_str(), ++n);
            pc.id = id;
            list.push_back(std::move(pc));
        }
    }
    return cat;
}

namespace {

enum class CaseColumn { alloy, power, speed, l_p, r_p, f, a_abs, T_b, T_inf, h, d_phi, lambda };

const std::map<std::string, CaseColumn, std::less<>> kCaseColumns = {
    {"alloy", CaseColumn::alloy}, {"P_W", CaseColumn::power},   {"v_p_m_s", CaseColumn::speed},
    {"l_p_m", CaseColumn::l_p},   {"r_p_m", CaseColumn::r_p},   {"f", CaseColumn::f},
    {"a_abs", CaseColumn::a_abs}, {"T_b_K", CaseColumn::T_b},   {"T_inf_K", CaseColumn::T_inf},
    {"h", CaseColumn::h},         {"d_phi_m", CaseColumn::d_phi}, {"lambda", CaseColumn::lambda},
};

}  // namespace

std::vector<ProcessCase> load_cases(std::string_view text, const Catalog& catalog) {
    const auto lines = csv::content_lines(text);
    std::vector<ProcessCase> out;
    if (lines.empty()) return out;

    std::vector<CaseColumn> columns;
    for (const auto& name : csv::split(lines.front().second)) {
        const auto it = kCaseColumns.find(name);
        if (it == kCaseColumns.end()) throw ParseError(0, "unknown case column '" + name + "'");
        columns.push_back(it->second);
    }
    if (columns.size() < 3 || columns[0] != CaseColumn::alloy || columns[1] != CaseColumn::power ||
        columns[2] != CaseColumn::speed)
        throw ParseError(0, "case table header must start with alloy,P_W,v_p_m_s");

    std::map<std::string, int> counters;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = csv::split(lines[r].second);
        if (cells.size() != columns.size())
            throw ParseError(r, "expected " + std::to_string(columns.size()) + " columns, got " +
                                    std::to_string(cells.size()));
        const auto& alloy = catalog.alloy(cells[0]);
        auto pc = make_case(alloy.name, 0.0, 0.0);
        bool explicit_dphi = false;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (cells[c].empty()) {
                if (c <= 2) throw ParseError(r, "power and speed are required");
                continue;
            }
            const auto d = csv::to_double(cells[c]);
            if (!d) throw ParseError(r, "not a number: '" + cells[c] + "'");
            switch (columns[c]) {
                case CaseColumn::alloy: throw ParseError(r, "alloy column repeated");
                case CaseColumn::power: pc.power = *d; break;
                case CaseColumn::speed: pc.scan_speed = *d; break;
                case CaseColumn::l_p: pc.layer_thickness = *d; break;
                case CaseColumn::r_p: pc.spot_radius = *d; break;
                case CaseColumn::f: pc.distribution_factor = *d; break;
                case CaseColumn::a_abs: pc.absorptivity = *d; break;
                case CaseColumn::T_b: pc.preheat_temp = *d; break;
                case CaseColumn::T_inf: pc.ambient_temp = *d; break;
                case CaseColumn::h: pc.heat_transfer_coeff = *d; break;
                case CaseColumn::d_phi: pc.mushy_length = *d; explicit_dphi = true; break;
                case CaseColumn::lambda: pc.interface_param = *d; break;
            }
        }
        if (!explicit_dphi) pc.mushy_length = pc.layer_thickness;
        try {
            validate(pc, alloy);
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), "row " + std::to_string(r) + ": " + e.what());
        }
        char id[96];
        std::snprintf(id, sizeof(id), "%s-%02d", alloy.name.c_str(), ++counters[alloy.name]);
        pc.id = id;
        out.push_back(std::move(pc));
    }
    return out;
}

std::string serialize_cases(const std::vector<ProcessCase>& cases) {
    std::ostringstream os;
    os << "alloy,P_W,v_p_m_s,l_p_m,r_p_m,f,a_abs,T_b_K,T_inf_K,h,d_phi_m,lambda\n";
    for (const auto& c : cases) {
        os << c.alloy;
        for (double v : {c.power, c.scan_speed, c.layer_thickness, c.spot_radius, c.distribution_factor,
                         c.absorptivity, c.preheat_temp, c.ambient_temp, c.heat_transfer_coeff, c.mushy_length,
                         c.interface_param})
            os << ',' << csv::fmt(v);
        os << '\n';
    }
    return os.str();
}

}  // namespace lpbf
