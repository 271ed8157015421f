// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "erc/error.hpp"
#include "erc/nn/rng.hpp"
#include "erc/stats.hpp"
#include "support.hpp"

namespace bm = boost::math;
using namespace erc;
using namespace erc::stats;

namespace oracle {

// Textbook formulas, written independently of the library code.

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

std::pair<double, double> paired_t(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double m = mean(d);
  double s2 = 0;
  for (double x : d) s2 += (x - m) * (x - m);
  s2 /= double(d.size() - 1);
  const double t = m / std::sqrt(s2 / double(d.size()));
  const bm::students_t dist(double(d.size() - 1));
  return {t, 2.0 * bm::cdf(bm::complement(dist, std::abs(t)))};
}

std::pair<double, double> anova(const std::vector<std::vector<double>>& groups) {
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double grand = mean(all);
  double ssb = 0, ssw = 0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += double(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  const double d1 = double(groups.size() - 1), d2 = double(all.size() - groups.size());
  const double f = (ssb / d1) / (ssw / d2);
  return {f, bm::cdf(bm::complement(bm::fisher_f(d1, d2), f))};
}

// Rank by counting: rank(x) = #less + (#equal + 1) / 2.
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double y : v) {
      less += y < v[i];
      equal += y == v[i];
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

double tie_sum(const std::vector<double>& v) {
  std::vector<double> s = v;
  std::sort(s.begin(), s.end());
  double acc = 0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double t = double(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

std::pair<double, double> kruskal(const std::vector<std::vector<double>>& groups) {
  std::vector<double> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const auto r = ranks(all);
  const double N = double(all.size());
  double acc = 0;
  std::size_t off = 0;
  for (const auto& g : groups) {
    double R = 0;
    for (std::size_t i = 0; i < g.size(); ++i) R += r[off + i];
    off += g.size();
    acc += R * R / double(g.size());
  }
  const double h = (12.0 / (N * (N + 1.0)) * acc - 3.0 * (N + 1.0)) / (1.0 - tie_sum(all) / (N * N * N - N));
  return {h, bm::cdf(bm::complement(bm::chi_squared(double(groups.size() - 1)), h))};
}

// Conover's form: T = (k - 1) sum_j (R_j - n(k+1)/2)^2 / (A - C).
std::pair<double, double> friedman(const std::vector<std::vector<double>>& m) {
  const double n = double(m.size()), k = double(m[0].size());
  std::vector<double> R(m[0].size(), 0.0);
  double A = 0;
  for (const auto& row : m) {
    const auto r = ranks(row);
    for (std::size_t j = 0; j < r.size(); ++j) {
      R[j] += r[j];
      A += r[j] * r[j];
    }
  }
  const double C = n * k * (k + 1) * (k + 1) / 4.0;
  double ss = 0;
  for (double Rj : R) ss += (Rj - n * (k + 1) / 2.0) * (Rj - n * (k + 1) / 2.0);
  const double t = (k - 1) * ss / (A - C);
  return {t, bm::cdf(bm::complement(bm::chi_squared(k - 1), t))};
}

std::tuple<double, double, double> chi_square(const std::vector<std::vector<double>>& t) {
  const std::size_t r = t.size(), c = t[0].size();
  std::vector<double> rs(r, 0), cs(c, 0);
  double N = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      rs[i] += t[i][j];
      cs[j] += t[i][j];
      N += t[i][j];
    }
  double chi = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = rs[i] * cs[j] / N;
      chi += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  const double df = double((r - 1) * (c - 1));
  const double v = std::sqrt(chi / (N * double(std::min(r, c) - 1)));
  return {chi, bm::cdf(bm::complement(bm::chi_squared(df), chi)), v};
}

}  // namespace oracle

TEST_CASE("paired t fixture") {
  const std::vector<double> a{2, 4, 6}, b{1, 2, 3};
  const auto r = paired_t_test(a, b);
  CHECK(r.statistic == doctest::Approx(3.464101615137755).epsilon(1e-12));
  CHECK(std::abs(r.p_value - 0.0742) < 1e-3);
  CHECK(r.p_value == doctest::Approx(0.07417990022744853).epsilon(1e-9));
  CHECK(r.df1 == 2.0);
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("paired t against the textbook oracle") {
  nn::Rng rng(3, "test/paired");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(20);
    const auto a = test::random_values(rng, n, 0.4, 0.9);
    const auto b = test::random_values(rng, n, 0.4, 0.9);
    const auto [t, p] = oracle::paired_t(a, b);
    const auto r = paired_t_test(a, b);
    CHECK(r.statistic == doctest::Approx(t).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-9));
    // Swapping the samples negates t and keeps p.
    const auto s = paired_t_test(b, a);
    CHECK(s.statistic == doctest::Approx(-r.statistic).epsilon(1e-12));
    CHECK(s.p_value == doctest::Approx(r.p_value).epsilon(1e-12));
  }
}

TEST_CASE("paired t degenerate and invalid input") {
  const std::vector<double> a{1, 2, 3};
  auto same = paired_t_test(a, a);
  CHECK(same.degenerate);
  CHECK(same.p_value == 1.0);
  const std::vector<double> shifted{2, 3, 4};
  auto constant = paired_t_test(shifted, a);
  CHECK(constant.degenerate);
  CHECK(constant.p_value == 0.0);
  CHECK(std::isinf(constant.statistic));
  CHECK_THROWS_AS(paired_t_test(a, std::vector<double>{1, 2}), LengthMismatch);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), DomainError);
}

TEST_CASE("anova fixture is exact") {
  const auto r = anova_oneway({{1, 2}, {3, 4}});
  CHECK(r.statistic == 8.0);
  CHECK(std::abs(r.p_value - 0.106) < 1e-3);
  CHECK(r.p_value == doctest::Approx(0.10557280900008414).epsilon(1e-9));
  CHECK(r.df1 == 1.0);
  CHECK(*r.df2 == 2.0);
}

TEST_CASE("anova against the textbook oracle") {
  nn::Rng rng(5, "test/anova");
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<double>> groups(2 + rng.below(4));
    for (auto& g : groups) g = test::random_values(rng, 2 + rng.below(8), 0.0, 10.0);
    const auto [f, p] = oracle::anova(groups);
    const auto r = anova_oneway(groups);
    CHECK(r.statistic == doctest::Approx(f).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-8));
    // Shifting every value leaves F unchanged; reordering groups too.
    auto shifted = groups;
    for (auto& g : shifted)
      for (auto& x : g) x += 100.0;
    CHECK(anova_oneway(shifted).statistic == doctest::Approx(r.statistic).epsilon(1e-7));
    std::reverse(groups.begin(), groups.end());
    CHECK(anova_oneway(groups).statistic == doctest::Approx(r.statistic).epsilon(1e-10));
  }
}

TEST_CASE("anova equal means and degenerate groups") {
  const auto r = anova_oneway({{1, 3}, {0, 4}, {2, 2}});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  const auto flat = anova_oneway({{1, 1}, {2, 2}});
  CHECK(flat.degenerate);
  CHECK(flat.p_value == 0.0);
  CHECK_THROWS_AS(anova_oneway({{1, 2}, {3}}), DegenerateGroupError);
  CHECK_THROWS_AS(anova_oneway({{1, 2}}), DegenerateGroupError);
}

TEST_CASE("kruskal-wallis fixture and oracle") {
  const auto r = kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
  CHECK(std::abs(r.statistic - 3.857) < 1e-3);
  CHECK(r.statistic == doctest::Approx(3.857142857142854).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.0495346).epsilon(1e-5));

  nn::Rng rng(9, "test/kw");
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<double>> groups(2 + rng.below(3));
    // Rounded values force ties.
    for (auto& g : groups) {
      g = test::random_values(rng, 1 + rng.below(7), 0.0, 6.0);
      for (auto& x : g) x = std::round(x);
    }
    std::vector<double> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    if (std::all_of(all.begin(), all.end(), [&](double x) { return x == all[0]; })) continue;
    const auto [h, p] = oracle::kruskal(groups);
    const auto got = kruskal_wallis(groups);
    CHECK(got.statistic == doctest::Approx(h).epsilon(1e-9));
    CHECK(got.p_value == doctest::Approx(p).epsilon(1e-8));
    // Rank statistic: invariant under a monotone transform.
    auto transformed = groups;
    for (auto& g : transformed)
      for (auto& x : g) x = std::exp(x);
    CHECK(kruskal_wallis(transformed).statistic == doctest::Approx(got.statistic).epsilon(1e-12));
  }
  CHECK(kruskal_wallis({{2, 2}, {2}}).degenerate);
  CHECK_THROWS_AS(kruskal_wallis({{1, 2}, {}}), DegenerateGroupError);
}

TEST_CASE("friedman fixture matches frozen reference and Conover oracle") {
  const std::vector<std::vector<double>> m{{.652, .641, .660}, {.648, .639, .661}, {.655, .650, .650},
                                           {.661, .645, .667}, {.640, .640, .652}, {.658, .642, .663}};
  const auto r = friedman_test(m);
  // Frozen with an external statistics package.
  CHECK(std::abs(r.statistic - 8.272727272727268) < 1e-6);
  CHECK(std::abs(r.p_value - 0.01598085818548343) < 1e-6);
  const auto [t, p] = oracle::friedman(m);
  CHECK(std::abs(r.statistic - t) < 1e-9);
  CHECK(std::abs(r.p_value - p) < 1e-9);
  CHECK(r.df1 == 2.0);
}

TEST_CASE("friedman against the Conover oracle on random matrices") {
  nn::Rng rng(11, "test/friedman");
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(10), k = 3 + rng.below(4);
    std::vector<std::vector<double>> m(n);
    for (auto& row : m) {
      row = test::random_values(rng, k, 0.0, 4.0);
      if (trial % 2) for (auto& x : row) x = std::round(x);
    }
    bool all_tied = true;
    for (const auto& row : m)
      for (double x : row) all_tied = all_tied && x == row[0];
    if (all_tied) continue;
    const auto [t, p] = oracle::friedman(m);
    const auto r = friedman_test(m);
    CHECK(r.statistic == doctest::Approx(t).epsilon(1e-9));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-8));
  }
}

TEST_CASE("friedman shape errors and all-tied policy") {
  CHECK_THROWS_AS(friedman_test({{1, 2, 3}}), ShapeError);
  CHECK_THROWS_AS(friedman_test({{1, 2}, {3, 4}}), ShapeError);
  CHECK_THROWS_AS(friedman_test({{1, 2, 3}, {3, 4}}), ShapeError);
  const auto tied = friedman_test({{1, 1, 1}, {2, 2, 2}});
  CHECK(tied.degenerate);
  CHECK(tied.statistic == 0.0);
  CHECK(tied.p_value == 1.0);
}

TEST_CASE("chi-square fixture is exact") {
  const auto r = chi_square_cramers_v({{10, 0}, {0, 10}});
  CHECK(r.statistic == 20.0);
  CHECK(*r.effect_size == 1.0);
  CHECK(r.df1 == 1.0);
  const auto none = chi_square_cramers_v({{5, 10, 15}, {10, 20, 30}});
  CHECK(none.statistic == 0.0);
  CHECK(*none.effect_size == 0.0);
  CHECK(none.p_value == 1.0);
}

TEST_CASE("chi-square against the oracle") {
  nn::Rng rng(13, "test/chi");
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 2 + rng.below(4), cols = 2 + rng.below(3);
    std::vector<std::vector<double>> t(rows, std::vector<double>(cols));
    for (auto& row : t)
      for (auto& x : row) x = double(1 + rng.below(40));
    const auto [chi, p, v] = oracle::chi_square(t);
    const auto r = chi_square_cramers_v(t);
    CHECK(r.statistic == doctest::Approx(chi).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-8));
    CHECK(*r.effect_size == doctest::Approx(v).epsilon(1e-10));
    CHECK(*r.effect_size >= 0.0);
    CHECK(*r.effect_size <= 1.0);
    // Transposing the table changes nothing.
    std::vector<std::vector<double>> tt(cols, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) tt[j][i] = t[i][j];
    CHECK(chi_square_cramers_v(tt).statistic == doctest::Approx(r.statistic).epsilon(1e-10));
  }
}

TEST_CASE("chi-square input validation") {
  CHECK_THROWS_AS(chi_square_cramers_v({{1.5, 2}, {3, 4}}), RangeError);
  CHECK_THROWS_AS(chi_square_cramers_v({{-1, 2}, {3, 4}}), RangeError);
  CHECK_THROWS_AS(chi_square_cramers_v({{0, 0}, {3, 4}}), ZeroMarginError);
  CHECK_THROWS_AS(chi_square_cramers_v({{1, 2}}), ShapeError);
}

TEST_CASE("bonferroni capping is exact") {
  const std::vector<double> p{0.01, 0.2, 0.5, 0.0};
  const auto adj = bonferroni(p);
  CHECK(adj == std::vector<double>{0.04, 0.8, 1.0, 0.0});
  CHECK(bonferroni(p, 10) == std::vector<double>{0.1, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(bonferroni(std::vector<double>{1.5}), RangeError);

  nn::Rng rng(17, "test/bonf");
  for (int trial = 0; trial < 100; ++trial) {
    auto ps = test::random_values(rng, 1 + rng.below(10), 0.0, 1.0);
    const auto a = bonferroni(ps);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      CHECK(a[i] >= ps[i]);
      CHECK(a[i] <= 1.0);
      CHECK(a[i] == std::min(1.0, ps[i] * double(ps.size())));
    }
  }
}

TEST_CASE("midranks") {
  CHECK(midranks(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 1, 2});
  CHECK(midranks(std::vector<double>{5, 5, 1, 5}) == std::vector<double>{3, 3, 1, 3});
  nn::Rng rng(19, "test/ranks");
  for (int trial = 0; trial < 50; ++trial) {
    auto v = test::random_values(rng, 1 + rng.below(30), 0.0, 5.0);
    for (auto& x : v) x = std::round(x);
    const auto r = midranks(v);
    const double n = double(v.size());
    CHECK(std::accumulate(r.begin(), r.end(), 0.0) == doctest::Approx(n * (n + 1) / 2));
    CHECK(r == oracle::ranks(v));
  }
}
