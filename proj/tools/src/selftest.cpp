// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>

#include "erc/cli.hpp"
#include "erc/special_functions.hpp"
#include "erc/stats.hpp"

namespace erc::cli {
namespace {

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

SelftestLine near(std::string name, double got, double want, double tol) {
  return {std::move(name), std::abs(got - want) <= tol, fmt("got %.10g want %.10g", got, want)};
}

SelftestLine exact(std::string name, double got, double want) {
  return {std::move(name), got == want, fmt("got %.17g want %.17g", got, want)};
}

}  // namespace

std::vector<SelftestLine> stats_selftest() {
  std::vector<SelftestLine> lines;
  {
    const std::vector<double> a{2, 4, 6}, b{1, 2, 3};
    const auto r = stats::paired_t_test(a, b);
    lines.push_back(near("paired_t statistic", r.statistic, std::sqrt(12.0), 1e-3));
    lines.push_back(near("paired_t p", r.p_value, 0.0742, 1e-3));
  }
  {
    const auto r = stats::anova_oneway({{1, 2}, {3, 4}});
    lines.push_back(exact("anova F", r.statistic, 8.0));
    lines.push_back(near("anova p", r.p_value, 0.106, 1e-3));
  }
  {
    const auto r = stats::chi_square_cramers_v({{10, 0}, {0, 10}});
    lines.push_back(exact("chi_square statistic", r.statistic, 20.0));
    lines.push_back(exact("cramers_v", r.effect_size.value_or(-1.0), 1.0));
  }
  {
    const auto r = stats::kruskal_wallis({{1, 2, 3}, {4, 5, 6}});
    lines.push_back(near("kruskal_wallis H", r.statistic, 3.857, 1e-3));
  }
  {
    // Reference values computed once with an independent statistics package.
    const auto r = stats::friedman_test({{0.652, 0.641, 0.660},
                                         {0.648, 0.639, 0.661},
                                         {0.655, 0.650, 0.650},
                                         {0.661, 0.645, 0.667},
                                         {0.640, 0.640, 0.652},
                                         {0.658, 0.642, 0.663}});
    lines.push_back(near("friedman statistic", r.statistic, 8.272727272727268, 1e-6));
    lines.push_back(near("friedman p", r.p_value, 0.01598085818548343, 1e-6));
  }
  {
    const std::vector<double> p{0.01, 0.02, 0.5};
    const auto adj = stats::bonferroni(p);
    bool ok = adj.size() == 3 && adj[2] == 1.0;
    for (std::size_t i = 0; ok && i < 2; ++i) ok = adj[i] == p[i] * 3.0;
    lines.push_back({"bonferroni capping", ok, ok ? "capped at 1" : "mismatch"});
  }
  {
    double worst = 0.0;
    for (double df : {1.0, 2.0, 5.0, 9.0, 30.0, 120.0})
      for (double t : {0.1, 0.5, 1.0, 2.0, 3.5, 8.0})
        worst = std::max(worst, std::abs(stats::t_two_sided_p(t, df) - stats::f_sf(t * t, 1.0, df)));
    lines.push_back({"t-F identity", worst <= 1e-9, fmt("max deviation %.3g (tolerance %.0e)", worst, 1e-9)});
  }
  return lines;
}

}  // namespace erc::cli
