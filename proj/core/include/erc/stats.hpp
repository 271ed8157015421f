// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erc/special_functions.hpp"

namespace erc::stats {

struct StatReport {
  std::string test;
  double statistic = 0.0;
  double df1 = 0.0;
  std::optional<double> df2;
  double p_value = 1.0;
  std::optional<double> effect_size;  // Cramer's V where applicable
  std::size_t correction_m = 1;       // Bonferroni factor applied to p_value; 1 = none
  std::size_t n = 0;
  /// Set when the statistic is undefined because the data has no spread
  /// (paired t with constant differences, ANOVA with zero within-group
  /// variance). p_value then follows the documented tie policy.
  bool degenerate = false;
};

/// t on the differences a - b, df = n - 1, two-sided p. Constant differences
/// set `degenerate` with p = 1 when the difference is zero, else p = 0.
StatReport paired_t_test(std::span<const double> a, std::span<const double> b);

/// Friedman chi-square on an n x k matrix (rows = subjects), midranks with
/// the standard tie correction. Requires n >= 2 and k >= 3 (ShapeError
/// otherwise; use paired_t_test for two treatments).
StatReport friedman_test(const std::vector<std::vector<double>>& matrix);

/// One-way ANOVA, F = MSB / MSW with df (g - 1, N - g).
StatReport anova_oneway(const std::vector<std::vector<double>>& groups);

/// Kruskal-Wallis H with midranks and tie correction, df = g - 1.
StatReport kruskal_wallis(const std::vector<std::vector<double>>& groups);

/// Pearson chi-square test of independence with Cramer's V.
StatReport chi_square_cramers_v(const std::vector<std::vector<double>>& table);

/// p' = min(1, p * m); m defaults to the list length.
std::vector<double> bonferroni(std::span<const double> p_values,
                               std::optional<std::size_t> m = std::nullopt);

/// Midranks (1-based) of `values`; ties share the average rank.
std::vector<double> midranks(std::span<const double> values);

}  // namespace erc::stats
