#pragma once

// Reference least squares from the normal equations in extended precision,
// with distribution tails from boost.

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <random>
#include <string>
#include <vector>

#include "lpbf/regression.hpp"

namespace lpbf::test {

struct OlsReference {
    std::vector<double> beta, se, t, p;
    double r2 = 0.0, adj_r2 = 0.0, f = 0.0, pf = 0.0, condition = 0.0;
};

inline OlsReference normal_equations(const DesignMatrix& d) {
    using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const LMatrix X = d.X.cast<long double>();
    const LVector y = d.y.cast<long double>();
    const LMatrix xtx = X.transpose() * X;
    const LMatrix inv = xtx.inverse();
    const LVector b = inv * (X.transpose() * y);
    const LVector r = y - X * b;
    const long double rss = r.squaredNorm();
    const long double tss = (y.array() - y.mean()).matrix().squaredNorm();
    const double n = double(X.rows()), p = double(X.cols());
    const double dof = n - p;
    const boost::math::students_t tdist(dof);
    OlsReference out;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        out.beta.push_back(double(b(c)));
        out.se.push_back(double(std::sqrt(rss / dof * inv(c, c))));
        out.t.push_back(out.beta.back() / out.se.back());
        out.p.push_back(2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(out.t.back()))));
    }
    out.r2 = double(1.0L - rss / tss);
    out.adj_r2 = double(1.0L - (rss / tss) * (n - 1) / dof);
    if (p > 1) {
        out.f = double((tss - rss) / (p - 1) / (rss / dof));
        out.pf = boost::math::cdf(boost::math::complement(boost::math::fisher_f(p - 1, dof), out.f));
    }
    const Eigen::SelfAdjointEigenSolver<LMatrix> eig(xtx);
    const auto& ev = eig.eigenvalues();
    out.condition = double(std::sqrt(ev(ev.size() - 1) / ev(0)));
    return out;
}

/// Well-conditioned random system with 1 to 5 features plus an intercept.
inline DesignMatrix random_system(std::mt19937& rng) {
    std::normal_distribution<double> n01;
    const int p = std::uniform_int_distribution<int>(1, 5)(rng);
    const int n = std::uniform_int_distribution<int>(p + 4, 60)(rng);
    std::vector<std::string> names;
    for (int c = 0; c < p; ++c) names.push_back("x" + std::to_string(c));
    std::vector<double> truth(std::size_t(p) + 1);
    for (auto& b : truth) b = 2.0 * n01(rng);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int r = 0; r < n; ++r) {
        std::vector<double> row;
        double v = truth[0];
        for (int c = 0; c < p; ++c) {
            row.push_back(n01(rng) * (1.0 + c));
            v += truth[std::size_t(c) + 1] * row.back();
        }
        rows.push_back(row);
        y.push_back(v + 0.5 * n01(rng));
    }
    return DesignMatrix::with_intercept(names, rows, y);
}

/// Largest relative disagreement between a fit and the reference, over every
/// reported statistic.
inline double ols_disagreement(const RegressionReport& rep, const OlsReference& ref) {
    double worst = 0.0;
    const auto cmp = [&](double got, double want) {
        worst = std::max(worst, got == want ? 0.0 : std::abs(got - want) / std::abs(want));
    };
    for (std::size_t c = 0; c < ref.beta.size(); ++c) {
        cmp(rep.coefficients[c], ref.beta[c]);
        cmp(rep.std_errors[c], ref.se[c]);
        cmp(rep.t_stats[c], ref.t[c]);
        cmp(rep.p_values[c], ref.p[c]);
    }
    cmp(rep.r_squared, ref.r2);
    cmp(rep.adj_r_squared, ref.adj_r2);
    if (ref.beta.size() > 1) {
        cmp(rep.f_stat, ref.f);
        cmp(rep.f_p_value, ref.pf);
    }
    cmp(rep.condition_number, ref.condition);
    return worst;
}

}  // namespace lpbf::test
