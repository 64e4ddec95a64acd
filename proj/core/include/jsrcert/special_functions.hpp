#pragma once

#include <cstdint>

namespace jsrcert {

// Regularized incomplete beta function I(x; a, b) for a, b > 0, x in [0, 1].
// Continued-fraction evaluation (modified Lentz) with the usual symmetry
// split at x = (a + 1) / (a + b + 2); at most 200 terms, term tolerance
// 1e-14. Absolute accuracy ~1e-12 over the tested grids.
double reg_inc_beta(double x, double a, double b);

// Inverse in x of I(x; a, b) for y in [0, 1]: bracketed bisection polished by
// Newton steps, stopping at |I(x) - y| <= 1e-13 (guaranteed <= 1e-10).
double reg_inc_beta_inv(double y, double a, double b);

// Spherical-cap function for dimension n >= 2:
//   delta(eps) = sqrt(1 - I^{-1}(2 eps; (n-1)/2, 1/2))   for eps in [0, 1/2)
//   delta(eps) = 0                                        for eps >= 1/2.
// delta(0) = 1 and delta is nonincreasing. For n = 2 it equals cos(pi eps).
double delta(double eps, int n);

// Scenario confidence phi(eps; d, N) = 1 - I(eps; d, N - d + 1), the chance
// that a binomial(N, eps) stays below d. Requires 1 <= d <= N. For N <= 500
// the binomial-tail form is evaluated too and both must agree to 1e-10.
double phi(double eps, std::int64_t d, std::int64_t N);

// Direct binomial tail sum_{i<d} C(N,i) eps^i (1-eps)^(N-i), in log space.
double phi_binomial_tail(double eps, std::int64_t d, std::int64_t N);

}  // namespace jsrcert
