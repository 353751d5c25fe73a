#include "lpbf/config.hpp"

#include <cstdio>
#include <functional>
#include <map>

#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"

namespace lpbf {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
    Setter set;
    Getter get;
    bool affects_results = true;
};

double number(std::string_view v) {
    const auto d = csv::to_double(v);
    if (!d) throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
    return *d;
}

int integer(std::string_view v) {
    const double d = number(v);
    if (d != double(int(d))) throw std::invalid_argument("expected an integer, got '" + std::string(v) + "'");
    return int(d);
}

bool boolean(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("expected true/false, got '" + std::string(v) + "'");
}

template <class T>
Key solver_key(T SolverConfig::*member) {
    Key k;
    k.set = [member](RunConfig& c, std::string_view v) {
        if constexpr (std::is_same_v<T, double>) c.solver.*member = number(v);
        else if constexpr (std::is_same_v<T, int>) c.solver.*member = integer(v);
        else c.solver.*member = boolean(v);
    };
    k.get = [member](const RunConfig& c) {
        if constexpr (std::is_same_v<T, double>) return csv::fmt(c.solver.*member);
        else if constexpr (std::is_same_v<T, int>) return std::to_string(c.solver.*member);
        else return std::string(c.solver.*member ? "true" : "false");
    };
    return k;
}

const std::map<std::string, Key>& keys() {
    static const std::map<std::string, Key> table = [] {
        std::map<std::string, Key> t;
        t["grid_spacing"] = solver_key(&SolverConfig::grid_spacing);
        t["dt"] = solver_key(&SolverConfig::dt);
        t["t_end"] = solver_key(&SolverConfig::t_end);
        t["cfl"] = solver_key(&SolverConfig::cfl);
        t["max_substeps"] = solver_key(&SolverConfig::max_substeps);
        t["energy_tol"] = solver_key(&SolverConfig::energy_tol);
        t["pressure_tol"] = solver_key(&SolverConfig::pressure_tol);
        t["momentum_tol"] = solver_key(&SolverConfig::momentum_tol);
        t["max_linear_iterations"] = solver_key(&SolverConfig::max_linear_iterations);
        t["latent_tol"] = solver_key(&SolverConfig::latent_tol);
        t["latent_max_iterations"] = solver_key(&SolverConfig::latent_max_iterations);
        t["latent_failure_is_fatal"] = solver_key(&SolverConfig::latent_failure_is_fatal);
        t["melt_threshold"] = solver_key(&SolverConfig::melt_threshold);
        t["solid_cut"] = solver_key(&SolverConfig::solid_cut);
        t["div_tol"] = solver_key(&SolverConfig::div_tol);
        t["laser_x_start"] = solver_key(&SolverConfig::laser_x_start);
        t["flow"] = solver_key(&SolverConfig::flow);
        t["boundary_losses"] = solver_key(&SolverConfig::boundary_losses);
        t["insulated_bottom"] = solver_key(&SolverConfig::insulated_bottom);
        t["snapshot_every"] = solver_key(&SolverConfig::snapshot_every);
        t["snapshot_every"].affects_results = false;
        t["jobs"] = {[](RunConfig& c, std::string_view v) { c.jobs = integer(v); },
                     [](const RunConfig& c) { return std::to_string(c.jobs); }, false};
        t["response"] = {[](RunConfig& c, std::string_view v) { c.response = parse_response(v); },
                         [](const RunConfig& c) { return response_name(c.response); }, false};
        t["confidence"] = {[](RunConfig& c, std::string_view v) { c.confidence = number(v); },
                           [](const RunConfig& c) { return csv::fmt(c.confidence); }, false};
        return t;
    }();
    return table;
}

}  // namespace

std::string response_name(ResponseMode m) { return m == ResponseMode::probe ? "probe" : "snapshot"; }

ResponseMode parse_response(std::string_view name) {
    if (name == "probe") return ResponseMode::probe;
    if (name == "snapshot") return ResponseMode::snapshot;
    throw std::invalid_argument("response must be 'probe' or 'snapshot', got '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text, const RunConfig& base) {
    RunConfig cfg = base;
    for (const auto& [lineno, raw] : csv::content_lines(text)) {
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = csv::trim(line.substr(0, hash));
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
        const std::string key(csv::trim(line.substr(0, eq)));
        const auto value = csv::trim(line.substr(eq + 1));
        const auto it = keys().find(key);
        if (it == keys().end()) throw ParseError(lineno, "unknown key '" + key + "'");
        try {
            it->second.set(cfg, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(lineno, key + ": " + e.what());
        }
    }
    validate(cfg.solver);
    if (cfg.jobs < 1) throw ValidationError("jobs", "must be at least 1");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) throw ValidationError("confidence", "must lie in (0, 1)");
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out;
    for (const auto& [name, key] : keys()) out += name + " = " + key.get(cfg) + "\n";
    return out;
}

SolverConfig coarse(SolverConfig cfg) {
    cfg.grid_spacing = 2.0;
    return cfg;
}

std::uint64_t config_hash(const SolverConfig& solver, const ProcessCase& pc) {
    RunConfig rc;
    rc.solver = solver;
    std::string text;
    for (const auto& [name, key] : keys())
        if (key.affects_results) text += name + "=" + key.get(rc) + "\n";
    text += serialize_cases({pc});
    for (double v : {pc.stefan_boltzmann, pc.gravity, pc.porosity_floor, pc.domain_length, pc.domain_width,
                     pc.domain_height})
        text += csv::fmt(v) + ",";

    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lpbf
