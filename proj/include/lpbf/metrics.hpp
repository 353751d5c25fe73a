#pragma once

#include <span>
#include <string>

#include "lpbf/alloy_catalog.hpp"
#include "lpbf/grid.hpp"
#include "lpbf/solver.hpp"

namespace lpbf {

struct MeltpoolExtent {
    double length = 0.0;  // along the scan, l_p units
    double width = 0.0;
    double depth = 0.0;
    double melt_volume = 0.0;  // summed volume of cells with phi >= threshold

    bool operator==(const MeltpoolExtent&) const = default;
};

/// Axis-aligned extents of the region phi >= threshold. Each bound is placed
/// where phi crosses the threshold, interpolated linearly between the cell
/// centres on either side; at the domain boundary the bound is the outer face.
MeltpoolExtent meltpool_extent(std::span<const double> phi, const Grid& grid, double threshold = 0.5);

/// Maximum over cells of |grad T|, central differences inside and one-sided
/// differences on the boundary layer of cells.
double gradient_max(std::span<const double> T, const Grid& grid);

/// Dimensional gradient in K/m from the scaled maximum.
double gradient_dimensional(double scaled_gradient, const AlloyProperties& alloy, const ProcessCase& pc);

/// G * v_p in K/s.
double cooling_rate(double gradient, double scan_speed);

/// Secondary dendrite arm spacing in micrometres, 25 (G v)^-0.28 with G v in
/// K/s. Throws DomainError for a non-positive rate.
double sdas(double rate);

struct MeltpoolMetrics {
    double Tmax_tilde = 0.0;  // final field
    double vmax_tilde = 0.0;
    double Tmax_probe = 0.0;  // maxima over every step
    double vmax_probe = 0.0;
    double Gmax_tilde = 0.0;
    double length = 0.0, width = 0.0, depth = 0.0;
    double aspect_ratio = 0.0;  // NaN when width is zero
    double volume = 0.0;        // length * width * depth
    double melt_volume = 0.0;
    double G_dim = 0.0;         // K/m
    double cooling_rate = 0.0;  // K/s
    double sdas_um = 0.0;       // NaN when the cooling rate is zero

    bool aspect_defined() const;
    bool operator==(const MeltpoolMetrics&) const;
};

MeltpoolMetrics extract(const SimState& state, const AlloyProperties& alloy, const ProcessCase& pc,
                        double threshold = 0.5);

/// Same, with the per-step probe maxima taken from the run.
MeltpoolMetrics extract(const CaseRun& run, const AlloyProperties& alloy, const ProcessCase& pc,
                        double threshold = 0.5);

/// Header of the metrics CSV row.
std::string metrics_csv_header();
std::string metrics_csv_row(const ProcessCase& pc, const MeltpoolMetrics& m);

}  // namespace lpbf
