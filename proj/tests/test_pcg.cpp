#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "lpbf/pcg.hpp"

using namespace lpbf;

TEST(Pcg, MatchesDenseSolve) {
    std::mt19937 rng(7);
    std::normal_distribution<double> n01;
    const int n = 40;
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = n01(rng);
    const Eigen::MatrixXd A = B * B.transpose() + n * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = n01(rng);

    std::vector<double> inv_diag(n), rhs(b.data(), b.data() + n), x(n, 0.0);
    for (int i = 0; i < n; ++i) inv_diag[i] = 1.0 / A(i, i);
    const auto apply = [&](std::span<const double> in, std::span<double> out) {
        Eigen::Map<Eigen::VectorXd>(out.data(), n) = A * Eigen::Map<const Eigen::VectorXd>(in.data(), n);
    };
    const auto r = pcg(apply, inv_diag, rhs, x, 1e-12, 500);
    EXPECT_TRUE(r.converged);
    const Eigen::VectorXd ref = A.ldlt().solve(b);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref(i), 1e-9);
}

TEST(Pcg, ZeroRightHandSide) {
    std::vector<double> inv_diag(5, 1.0), b(5, 0.0), x(5, 0.0);
    const auto r = pcg([](std::span<const double> in, std::span<double> out) { std::copy(in.begin(), in.end(), out.begin()); },
                       inv_diag, b, x, 1e-10, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0);
}

TEST(Pcg, CustomStopTest) {
    const int n = 30;
    std::vector<double> inv_diag(n, 0.5), b(n, 1.0), x(n, 0.0);
    // 1D Laplacian with Dirichlet ends
    const auto apply = [&](std::span<const double> in, std::span<double> out) {
        for (int i = 0; i < n; ++i) out[i] = 2 * in[i] - (i > 0 ? in[i - 1] : 0.0) - (i + 1 < n ? in[i + 1] : 0.0);
    };
    int calls = 0;
    const auto r = pcg(apply, inv_diag, b, x, 1e-300, 1000, [&](std::span<const double> res) {
        ++calls;
        double m = 0.0;
        for (double v : res) m = std::max(m, std::abs(v));
        return m < 1e-6;
    });
    EXPECT_TRUE(r.converged);
    EXPECT_GT(calls, 0);
}

TEST(Pcg, ReportsNonConvergence) {
    const int n = 50;
    std::vector<double> inv_diag(n, 0.5), b(n, 1.0), x(n, 0.0);
    const auto apply = [&](std::span<const double> in, std::span<double> out) {
        for (int i = 0; i < n; ++i) out[i] = 2 * in[i] - (i > 0 ? in[i - 1] : 0.0) - (i + 1 < n ? in[i + 1] : 0.0);
    };
    const auto r = pcg(apply, inv_diag, b, x, 1e-14, 3);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3);
}
