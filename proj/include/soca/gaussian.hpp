#pragma once

namespace soca {

/// Standard normal CDF. Built on erfc so both tails keep absolute accuracy
/// well below 1e-12.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Generalized inverse of the standard normal CDF on (0,1): minimax initial
/// guess refined by Newton steps against std_normal_cdf.
/// Throws Error(DomainError) outside (0,1).
double std_normal_quantile(double eps);

}  // namespace soca
