#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

enum class ResponseMode { probe, snapshot };

/// Everything a config file can set: solver settings plus sweep and
/// regression options.
struct RunConfig {
    SolverConfig solver;
    int jobs = 1;
    ResponseMode response = ResponseMode::probe;  // which Tmax feeds the fits
    double confidence = 0.95;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and bad
/// values throw ParseError naming the line. Keys not given keep `base`.
RunConfig parse_config(std::string_view text, const RunConfig& base = {});

/// Canonical `key = value` text of every setting.
std::string serialize_config(const RunConfig& cfg);

/// Applies the coarse CI resolution (grid spacing 2).
SolverConfig coarse(SolverConfig cfg);

/// FNV-1a over the canonical text of every setting that changes results
/// (the snapshot cadence does not). Includes the case inputs.
std::uint64_t config_hash(const SolverConfig& cfg, const ProcessCase& pc);
std::string hash_hex(std::uint64_t h);

std::string response_name(ResponseMode m);
ResponseMode parse_response(std::string_view name);

}  // namespace lpbf
