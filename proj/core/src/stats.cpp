// SPDX-License-Identifier: Apache-2.0
#include "erc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "erc/error.hpp"

namespace erc::stats {
namespace {

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

// Sum over tie groups of (t^3 - t).
double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = double(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

}  // namespace

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = 0.5 * double(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

StatReport paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatch("paired samples differ in length (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  if (a.size() < 2) throw DomainError("paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / double(n);
  double ss = 0.0;
  double spread = 0.0;
  for (double v : d) {
    ss += (v - mean) * (v - mean);
    spread = std::max(spread, std::abs(v - d[0]));
  }
  StatReport r;
  r.test = "paired_t";
  r.df1 = double(n - 1);
  r.n = n;
  const double scale = std::max({1.0, std::abs(mean)});
  if (spread <= 1e-12 * scale) {
    r.degenerate = true;
    if (std::abs(mean) <= 1e-12 * scale) {
      r.statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.statistic = std::copysign(std::numeric_limits<double>::infinity(), mean);
      r.p_value = 0.0;
    }
    return r;
  }
  const double sd = std::sqrt(ss / double(n - 1));
  r.statistic = mean / (sd / std::sqrt(double(n)));
  r.p_value = clamp_p(t_two_sided_p(r.statistic, r.df1));
  return r;
}

StatReport friedman_test(const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = matrix.size();
  if (n < 2) throw ShapeError("Friedman test needs at least two subjects");
  const std::size_t k = matrix.front().size();
  if (k < 3) throw ShapeError("Friedman test needs at least three treatments; use paired_t_test for two");
  for (const auto& row : matrix)
    if (row.size() != k) throw ShapeError("Friedman matrix rows differ in length");

  std::vector<double> rank_sums(k, 0.0);
  double ties = 0.0;
  for (const auto& row : matrix) {
    const auto ranks = midranks(row);
    for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    ties += tie_term(row);
  }
  StatReport r;
  r.test = "friedman";
  r.df1 = double(k - 1);
  r.n = n;
  const double nk = double(n) * double(k);
  const double correction = 1.0 - ties / (nk * (double(k) * double(k) - 1.0));
  if (correction <= 0.0) {
    // Every row fully tied: no evidence of any treatment effect.
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  const double center = double(n) * double(k + 1) / 2.0;
  double ss = 0.0;
  for (double R : rank_sums) ss += (R - center) * (R - center);
  r.statistic = 12.0 / (nk * double(k + 1)) * ss / correction;
  r.p_value = clamp_p(chi_square_sf(r.statistic, r.df1));
  return r;
}

StatReport anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DegenerateGroupError("ANOVA needs at least two groups");
  std::size_t total = 0;
  std::vector<double> means;
  for (const auto& g : groups) {
    if (g.size() < 2) throw DegenerateGroupError("every ANOVA group needs at least two values");
    means.push_back(std::accumulate(g.begin(), g.end(), 0.0) / double(g.size()));
    total += g.size();
  }
  // Pairwise form of the between-group sum of squares; exactly zero when all
  // group means coincide.
  double ssb = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      const double diff = means[i] - means[j];
      ssb += double(groups[i].size()) * double(groups[j].size()) * diff * diff;
    }
  ssb /= double(total);
  double ssw = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (double v : groups[i]) ssw += (v - means[i]) * (v - means[i]);

  StatReport r;
  r.test = "anova_oneway";
  r.df1 = double(groups.size() - 1);
  r.df2 = double(total - groups.size());
  r.n = total;
  if (ssw == 0.0) {
    r.degenerate = true;
    r.statistic = ssb == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = ssb == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = (ssb / r.df1) / (ssw / *r.df2);
  r.p_value = clamp_p(f_sf(r.statistic, r.df1, *r.df2));
  return r;
}

StatReport kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw DegenerateGroupError("Kruskal-Wallis needs at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw DegenerateGroupError("Kruskal-Wallis group is empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double N = double(pooled.size());
  const auto ranks = midranks(pooled);
  StatReport r;
  r.test = "kruskal_wallis";
  r.df1 = double(groups.size() - 1);
  r.n = pooled.size();
  const double correction = 1.0 - tie_term(pooled) / (N * N * N - N);
  if (correction <= 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  const double center = (N + 1.0) / 2.0;
  double acc = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += ranks[offset + i];
    const double mean_rank = sum / double(g.size());
    acc += double(g.size()) * (mean_rank - center) * (mean_rank - center);
    offset += g.size();
  }
  r.statistic = 12.0 / (N * (N + 1.0)) * acc / correction;
  r.p_value = clamp_p(chi_square_sf(r.statistic, r.df1));
  return r;
}

StatReport chi_square_cramers_v(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw ShapeError("contingency table needs at least two rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw ShapeError("contingency table needs at least two columns");
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double N = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw ShapeError("contingency table rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = table[i][j];
      if (!(v >= 0.0) || std::floor(v) != v) throw RangeError("contingency counts must be nonnegative integers");
      row_sum[i] += v;
      col_sum[j] += v;
      N += v;
    }
  }
  if (N <= 0.0) throw ZeroMarginError("contingency table is empty");
  for (std::size_t i = 0; i < rows; ++i)
    if (row_sum[i] == 0.0) throw ZeroMarginError("row " + std::to_string(i) + " has zero total");
  for (std::size_t j = 0; j < cols; ++j)
    if (col_sum[j] == 0.0) throw ZeroMarginError("column " + std::to_string(j) + " has zero total");

  double chi2 = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_sum[i] * col_sum[j] / N;
      const double diff = table[i][j] - expected;
      chi2 += diff * diff / expected;
    }
  StatReport r;
  r.test = "chi_square";
  r.statistic = chi2;
  r.df1 = double((rows - 1) * (cols - 1));
  r.n = static_cast<std::size_t>(N);
  r.p_value = clamp_p(chi_square_sf(chi2, r.df1));
  r.effect_size = std::sqrt(chi2 / (N * double(std::min(rows, cols) - 1)));
  return r;
}

std::vector<double> bonferroni(std::span<const double> p_values, std::optional<std::size_t> m) {
  const std::size_t factor = m.value_or(p_values.size());
  if (factor == 0 && !p_values.empty()) throw RangeError("Bonferroni factor must be positive");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw RangeError("p value " + std::to_string(p) + " outside [0, 1]");
    out.push_back(std::min(1.0, p * double(factor)));
  }
  return out;
}

}  // namespace erc::stats
