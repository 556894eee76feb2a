#pragma once

#include <cstddef>

namespace edanet {

/// log(k!) via lgamma.
double log_factorial(double k);

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
/// Series for x < a+1, continued fraction otherwise; converges to ~1e-14.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_upper_tail(double x, std::size_t df);

}  // namespace edanet
