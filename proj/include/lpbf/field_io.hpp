#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lpbf/solver.hpp"

namespace lpbf {

/// Snapshot layout, version 1: `<base>.bin` holds raw little-endian float64
/// arrays back to back (T, phi, p on cells; u, v, w on faces); `<base>.json`
/// describes dimensions, spacings, time and the byte offset of each array.
inline constexpr int kSnapshotVersion = 1;

void write_snapshot(const SimState& state, const std::filesystem::path& base);
SimState read_snapshot(const std::filesystem::path& base);

/// `step,t_tilde,Tmax_tilde,vmax_tilde,melt_cells`
std::string probes_csv(const std::vector<StepProbe>& probes);

/// Top-surface plane: `x,y,T_tilde,phi,speed` per cell of the k = 0 layer.
std::string top_plane_csv(const SimState& state);

/// Scan centreline on the surface: `x,T_tilde,phi,speed` for the row of cells
/// nearest y = 0 in the k = 0 layer.
std::string centerline_csv(const SimState& state);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file and rename.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lpbf
