#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpbf/dimensionless.hpp"
#include "lpbf/metrics.hpp"

namespace lpbf {

/// Features (intercept column included) and response for one fit.
struct DesignMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd X;  // n x p
    Eigen::VectorXd y;  // n

    /// Prepends a column of ones named "const".
    static DesignMatrix with_intercept(const std::vector<std::string>& feature_names,
                                       const std::vector<std::vector<double>>& rows, const std::vector<double>& y);
};

/// Throws ValidationError unless n > p, sizes agree and every entry is finite.
void validate(const DesignMatrix& d);

struct RegressionReport {
    std::string label;
    std::vector<std::string> names;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;     // two-sided
    std::vector<bool> significant;    // p < 1 - confidence
    double confidence = 0.95;
    std::size_t observations = 0;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double f_stat = 0.0;
    double f_p_value = 0.0;
    double condition_number = 0.0;   // of X, intercept included, unscaled
    double residual_ss = 0.0;
    double total_ss = 0.0;
};

/// The design has linearly dependent columns. `columns()` names every column
/// that takes part in a dependency.
class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(std::vector<std::string> columns, const std::string& what)
        : std::runtime_error(what), columns_(std::move(columns)) {}
    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// Ordinary least squares via column-pivoted Householder QR. Rows are put in
/// a canonical order first, so any permutation of the rows gives bit-identical
/// results.
RegressionReport ols_fit(const DesignMatrix& design, double confidence = 0.95);

/// One regression dataset row: inputs, groups, metrics and the response used
/// as the heat-absorbed proxy.
struct DatasetRow {
    std::string case_id;
    std::string alloy;
    double power = 0.0;
    double scan_speed = 0.0;
    DimensionlessSet numbers;
    MeltpoolMetrics metrics;
    double response = 0.0;  // Tmax, probe or snapshot per the dataset setting
    double vmax = 0.0;      // matching velocity maximum
};

/// Feature sets of the three attempts:
///   1: Q, 1/Pe, Tc/Ste, Bi/Pe, t_s/Bo
///   2: E, Pe, Tc/Ste
///   3: E, Pe
std::vector<std::string> attempt_features(int attempt);
DesignMatrix attempt_design(int attempt, const std::vector<DatasetRow>& rows);
RegressionReport run_attempt(int attempt, const std::vector<DatasetRow>& rows, double confidence = 0.95);

/// Coefficients a0, a1, a2 from an attempt-3 report.
UhatCoefficients uhat_coefficients(const RegressionReport& attempt3);

std::string format_report(const RegressionReport& r);
std::string report_csv_header();
/// One line per coefficient plus the fit-level statistics repeated per line.
std::string report_csv_rows(const RegressionReport& r);

}  // namespace lpbf
