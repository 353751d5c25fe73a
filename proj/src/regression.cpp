#include "lpbf/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lpbf/csv.hpp"
#include "lpbf/error.hpp"
#include "lpbf/stats.hpp"

namespace lpbf {

DesignMatrix DesignMatrix::with_intercept(const std::vector<std::string>& feature_names,
                                          const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    DesignMatrix d;
    d.names.push_back("const");
    d.names.insert(d.names.end(), feature_names.begin(), feature_names.end());
    const auto n = Eigen::Index(rows.size());
    const auto p = Eigen::Index(d.names.size());
    d.X.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        if (rows[r].size() + 1 != std::size_t(p)) throw ValidationError("design", "row width does not match features");
        d.X(r, 0) = 1.0;
        for (Eigen::Index c = 1; c < p; ++c) d.X(r, c) = rows[r][c - 1];
        d.y(r) = y.at(r);
    }
    return d;
}

void validate(const DesignMatrix& d) {
    if (d.X.cols() != Eigen::Index(d.names.size())) throw ValidationError("names", "one name per column required");
    if (d.X.rows() != d.y.size()) throw ValidationError("y", "response length differs from row count");
    if (d.X.rows() <= d.X.cols()) throw ValidationError("rows", "need more observations than columns");
    if (!d.X.allFinite()) throw ValidationError("X", "non-finite entry");
    if (!d.y.allFinite()) throw ValidationError("y", "non-finite entry");
}

namespace {

// Row order by (y, x_0, x_1, ...), so results do not depend on input order.
std::vector<Eigen::Index> canonical_order(const DesignMatrix& d) {
    std::vector<Eigen::Index> order(std::size_t(d.X.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (d.y(a) != d.y(b)) return d.y(a) < d.y(b);
        for (Eigen::Index c = 0; c < d.X.cols(); ++c)
            if (d.X(a, c) != d.X(b, c)) return d.X(a, c) < d.X(b, c);
        return false;
    });
    return order;
}

[[noreturn]] void report_rank_deficiency(const DesignMatrix& d, const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr) {
    const auto rank = qr.rank();
    const auto& perm = qr.colsPermutation().indices();
    std::vector<Eigen::Index> kept(perm.data(), perm.data() + rank);
    std::vector<bool> involved(d.names.size(), false);
    std::string detail;

    Eigen::MatrixXd basis(d.X.rows(), rank);
    for (Eigen::Index c = 0; c < rank; ++c) basis.col(c) = d.X.col(kept[std::size_t(c)]);
    for (Eigen::Index q = rank; q < perm.size(); ++q) {
        const Eigen::Index col = perm[q];
        involved[std::size_t(col)] = true;
        const Eigen::VectorXd target = d.X.col(col);
        const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(target);
        detail += (detail.empty() ? "" : "; ") + d.names[std::size_t(col)] + " ~";
        for (Eigen::Index c = 0; c < rank; ++c) {
            const double share = std::abs(coef(c)) * basis.col(c).norm();
            if (share > 1e-8 * std::max(target.norm(), 1e-300)) {
                involved[std::size_t(kept[std::size_t(c)])] = true;
                detail += " " + d.names[std::size_t(kept[std::size_t(c)])];
            }
        }
    }
    std::vector<std::string> names;
    for (std::size_t c = 0; c < involved.size(); ++c)
        if (involved[c]) names.push_back(d.names[c]);
    throw RankDeficientError(names, "rank-deficient design (rank " + std::to_string(rank) + " of " +
                                        std::to_string(d.names.size()) + "): " + detail);
}

}  // namespace

RegressionReport ols_fit(const DesignMatrix& design, double confidence) {
    validate(design);
    if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("confidence", "must lie in (0, 1)");

    const auto order = canonical_order(design);
    const Eigen::Index n = design.X.rows(), p = design.X.cols();
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        X.row(r) = design.X.row(order[std::size_t(r)]);
        y(r) = design.y(order[std::size_t(r)]);
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) report_rank_deficiency(design, qr);

    RegressionReport rep;
    rep.names = design.names;
    rep.confidence = confidence;
    rep.observations = std::size_t(n);

    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * beta;
    const double mean = y.mean();
    rep.residual_ss = resid.squaredNorm();
    rep.total_ss = (y.array() - mean).matrix().squaredNorm();
    const double dof = double(n - p);
    rep.r_squared = rep.total_ss > 0.0 ? 1.0 - rep.residual_ss / rep.total_ss : 1.0;
    rep.adj_r_squared = 1.0 - (1.0 - rep.r_squared) * double(n - 1) / dof;

    // (X^T X)^-1 = P R^-1 R^-T P^T from the factorization.
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::MatrixXd inner = Rinv * Rinv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * inner * perm.transpose();

    const double sigma2 = rep.residual_ss / dof;
    for (Eigen::Index c = 0; c < p; ++c) {
        const double se = std::sqrt(sigma2 * xtx_inv(c, c));
        const double t = beta(c) / se;
        const double pv = se > 0.0 ? stats::student_t_two_sided(t, dof) : 0.0;
        rep.coefficients.push_back(beta(c));
        rep.std_errors.push_back(se);
        rep.t_stats.push_back(se > 0.0 ? t : std::copysign(std::numeric_limits<double>::infinity(), beta(c)));
        rep.p_values.push_back(pv);
        rep.significant.push_back(pv < 1.0 - confidence);
    }

    const double d1 = double(p - 1);
    if (d1 > 0.0) {
        const double explained = (rep.total_ss - rep.residual_ss) / d1;
        rep.f_stat = rep.residual_ss > 0.0 ? explained / sigma2 : std::numeric_limits<double>::infinity();
        rep.f_p_value = stats::f_upper_tail(rep.f_stat, d1, dof);
    } else {
        rep.f_stat = std::numeric_limits<double>::quiet_NaN();
        rep.f_p_value = std::numeric_limits<double>::quiet_NaN();
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& sv = svd.singularValues();
    rep.condition_number = sv(0) / sv(sv.size() - 1);
    return rep;
}

std::vector<std::string> attempt_features(int attempt) {
    switch (attempt) {
        case 1: return {"Q", "1/Pe", "Tc/Ste", "Bi/Pe", "ts/Bo"};
        case 2: return {"E", "Pe", "Tc/Ste"};
        case 3: return {"E", "Pe"};
        default: throw ValidationError("attempt", "must be 1, 2 or 3");
    }
}

DesignMatrix attempt_design(int attempt, const std::vector<DatasetRow>& rows) {
    const auto names = attempt_features(attempt);
    std::vector<std::vector<double>> features;
    std::vector<double> y;
    for (const auto& r : rows) {
        const auto& n = r.numbers;
        switch (attempt) {
            case 1: features.push_back({n.Q, 1.0 / n.Pe, n.Tc_over_Ste, n.Bi / n.Pe, n.rad_measure}); break;
            case 2: features.push_back({n.E, n.Pe, n.Tc_over_Ste}); break;
            default: features.push_back({n.E, n.Pe}); break;
        }
        y.push_back(r.response);
    }
    return DesignMatrix::with_intercept(names, features, y);
}

RegressionReport run_attempt(int attempt, const std::vector<DatasetRow>& rows, double confidence) {
    auto rep = ols_fit(attempt_design(attempt, rows), confidence);
    rep.label = "attempt" + std::to_string(attempt);
    return rep;
}

UhatCoefficients uhat_coefficients(const RegressionReport& r) {
    if (r.names != std::vector<std::string>{"const", "E", "Pe"})
        throw ValidationError("report", "coefficients need an attempt-3 fit (const, E, Pe)");
    return {r.coefficients[0], r.coefficients[1], r.coefficients[2]};
}

std::string format_report(const RegressionReport& r) {
    using csv::fmt_g;
    std::ostringstream os;
    os << "== " << (r.label.empty() ? "fit" : r.label) << " (n = " << r.observations << ") ==\n";
    os << "term        coef          std_err       t             p-value\n";
    for (std::size_t c = 0; c < r.names.size(); ++c) {
        std::string name = r.names[c] + (r.significant[c] ? "*" : "");
        name.resize(std::max<std::size_t>(name.size(), 10), ' ');
        os << name << "  ";
        for (double v : {r.coefficients[c], r.std_errors[c], r.t_stats[c], r.p_values[c]}) {
            std::string cell = fmt_g(v, 6);
            cell.resize(std::max<std::size_t>(cell.size(), 12), ' ');
            os << cell << "  ";
        }
        os << "\n";
    }
    os << "R^2 = " << fmt_g(r.r_squared) << "  adj R^2 = " << fmt_g(r.adj_r_squared) << "  F = " << fmt_g(r.f_stat)
       << "  p(F) = " << fmt_g(r.f_p_value) << "  condition number = " << fmt_g(r.condition_number) << "\n";
    os << "* significant at " << fmt_g(100.0 * r.confidence, 3) << "% (two-sided t-test)\n";
    return os.str();
}

std::string report_csv_header() {
    return "attempt,term,coef,std_err,t,p_value,significant,n,r2,adj_r2,F,p_F,condition_number";
}

std::string report_csv_rows(const RegressionReport& r) {
    using csv::fmt;
    std::string out;
    for (std::size_t c = 0; c < r.names.size(); ++c) {
        out += r.label + "," + r.names[c] + "," + fmt(r.coefficients[c]) + "," + fmt(r.std_errors[c]) + "," +
               fmt(r.t_stats[c]) + "," + fmt(r.p_values[c]) + "," + (r.significant[c] ? "1" : "0") + "," +
               std::to_string(r.observations) + "," + fmt(r.r_squared) + "," + fmt(r.adj_r_squared) + "," +
               fmt(r.f_stat) + "," + fmt(r.f_p_value) + "," + fmt(r.condition_number) + "\n";
    }
    return out;
}

}  // namespace lpbf
