#include "lpbf/pcg.hpp"

#include <cmath>
#include <vector>

namespace lpbf {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

PcgResult pcg(const LinearOperator& apply, std::span<const double> inv_diag, std::span<const double> b,
              std::span<double> x, double rel_tol, int max_iter, const ResidualTest& stop) {
    const std::size_t n = b.size();
    PcgResult res;
    if (n == 0) {
        res.converged = true;
        return res;
    }
    std::vector<double> r(n), z(n), p(n), q(n);

    apply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];

    const double bnorm = std::sqrt(dot(b, b));
    const double target = rel_tol * bnorm;
    double rnorm = std::sqrt(dot(r, r));
    const auto done = [&] { return rnorm <= target || rnorm == 0.0 || (stop && stop(r)); };
    if (done()) {
        res.residual_norm = rnorm;
        res.converged = true;
        return res;
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        apply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) break;  // breakdown: operator not positive on p
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rnorm = std::sqrt(dot(r, r));
        res.iterations = it;
        if (done()) {
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.residual_norm = rnorm;
    return res;
}

}  // namespace lpbf
