#pragma once

#include <functional>
#include <span>

namespace lpbf {

using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

/// Stop test on the current residual vector; return true to stop.
using ResidualTest = std::function<bool(std::span<const double> residual)>;

struct PcgResult {
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive
/// (semi-)definite operators. `x` holds the initial guess on entry.
/// Converges when ||r||_2 <= rel_tol * ||b||_2 (or ||b|| == 0), or when
/// `stop` (if given) accepts the residual.
PcgResult pcg(const LinearOperator& apply, std::span<const double> inv_diag, std::span<const double> b,
              std::span<double> x, double rel_tol, int max_iter, const ResidualTest& stop = {});

}  // namespace lpbf
