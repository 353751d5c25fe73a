#pragma once

namespace lpbf::stats {

/// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
/// separately keeps precision when x is close to 1.
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// P(|T| > |t|) for Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

/// P(F > f) for the F distribution with (d1, d2) degrees of freedom.
double f_upper_tail(double f, double d1, double d2);

}  // namespace lpbf::stats
