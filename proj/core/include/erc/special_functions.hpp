// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace erc::stats {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, n = 9). Reentrant, unlike
/// std::lgamma which may write the global signgam.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Student t with `df` degrees of freedom.
double t_cdf(double x, double df);
/// Two-sided tail probability P(|T| >= |t|).
double t_two_sided_p(double t, double df);
/// Inverse CDF, p in (0, 1).
double t_quantile(double p, double df);

double chi_square_cdf(double x, double df);
double chi_square_sf(double x, double df);

double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);

}  // namespace erc::stats
