#pragma once

namespace driftbench {

// Distribution helpers for confidence intervals and the Friedman test.
// Everything is built on the regularized incomplete beta function, evaluated
// with the standard continued-fraction expansion.

/// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
double incomplete_beta(double a, double b, double x);

/// P(T <= x) for Student t with df degrees of freedom.
double student_t_cdf(double x, double df);

/// Inverse of student_t_cdf in p (two-sided quantiles come from p > 0.5).
double student_t_quantile(double p, double df);

/// P(F <= x) for the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, double d1, double d2);

/// Inverse of f_cdf in p.
double f_quantile(double p, double d1, double d2);

}  // namespace driftbench
