#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpbf/dimensionless.hpp"
#include "lpbf/regression.hpp"

namespace lpbf {

enum class Transform { log_log, linear };

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line y = slope x + intercept; nullopt when x is constant or
/// fewer than two points are given.
std::optional<LineFit> fit_line(std::span<const double> x, std::span<const double> y);

/// Pearson correlation; nullopt when either series is constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationSeries {
    std::string pair;    // e.g. "PeVmax_vs_MaUhat"
    std::string alloy;
    std::string x_name, y_name;
    Transform transform = Transform::log_log;
    std::vector<std::string> case_ids;
    std::vector<double> x, y;  // untransformed values of the kept points
    std::optional<LineFit> trend;  // in transformed coordinates
    std::optional<double> r;       // Pearson r of the transformed values
    std::vector<std::string> notes;
};

struct CorrelationTables {
    UhatCoefficients coeffs;
    std::vector<CorrelationSeries> series;
    std::vector<std::string> warnings;  // skipped series, dropped points
};

/// The five pair names, in output order.
const std::vector<std::string>& correlation_pairs();

/// Per-alloy series for every pair. Points whose values cannot be transformed
/// (non-positive under a log, undefined aspect ratio) are dropped with a note;
/// series left with fewer than three points are skipped with a warning.
CorrelationTables correlation_tables(const std::vector<DatasetRow>& rows, const UhatCoefficients& coeffs);

/// Plot-ready two-column series followed by the trend parameters as comments.
std::string series_csv(const CorrelationSeries& s);

/// One line per series: pair, alloy, points, slope, intercept, r.
std::string correlation_summary_csv(const CorrelationTables& t);

}  // namespace lpbf
