// SPDX-License-Identifier: Apache-2.0
#include "erc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "erc/error.hpp"
#include "erc/special_functions.hpp"

namespace erc {

ClassificationMetrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion) {
  const std::size_t c = confusion.size();
  for (const auto& row : confusion)
    if (row.size() != c) throw ShapeError("confusion matrix must be square");
  ClassificationMetrics m;
  m.confusion = confusion;
  m.precision.assign(c, 0.0);
  m.recall.assign(c, 0.0);
  m.f1.assign(c, 0.0);
  m.support.assign(c, 0);
  std::vector<std::size_t> predicted(c, 0);
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t g = 0; g < c; ++g)
    for (std::size_t p = 0; p < c; ++p) {
      m.support[g] += confusion[g][p];
      predicted[p] += confusion[g][p];
      total += confusion[g][p];
      if (g == p) correct += confusion[g][p];
    }
  if (total == 0) throw EmptyEvalError("no predictions to evaluate");
  double weighted = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double tp = double(confusion[k][k]);
    m.precision[k] = predicted[k] == 0 ? 0.0 : tp / double(predicted[k]);
    m.recall[k] = m.support[k] == 0 ? 0.0 : tp / double(m.support[k]);
    const double denom = m.precision[k] + m.recall[k];
    m.f1[k] = denom == 0.0 ? 0.0 : 2.0 * m.precision[k] * m.recall[k] / denom;
    weighted += m.f1[k] * double(m.support[k]);
  }
  m.weighted_f1 = weighted / double(total);
  m.macro_f1 = c == 0 ? 0.0 : std::accumulate(m.f1.begin(), m.f1.end(), 0.0) / double(c);
  m.accuracy = double(correct) / double(total);
  return m;
}

ClassificationMetrics evaluate_metrics(std::span<const Prediction> predictions, std::size_t classes) {
  if (predictions.empty()) throw EmptyEvalError("no predictions to evaluate");
  std::vector<std::vector<std::size_t>> confusion(classes, std::vector<std::size_t>(classes, 0));
  for (const auto& p : predictions) {
    if (p.gold >= classes || p.predicted >= classes)
      throw IndexError("label index " + std::to_string(std::max(p.gold, p.predicted)) +
                       " outside [0, " + std::to_string(classes) + ")");
    ++confusion[p.gold][p.predicted];
  }
  return metrics_from_confusion(confusion);
}

SeedSummary summarize_seeds(std::span<const double> values) {
  if (values.size() < 2)
    throw InsufficientRunsError("seed summary needs at least two runs, got " +
                                std::to_string(values.size()));
  SeedSummary s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / double(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / double(s.n - 1));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  const double half = stats::t_quantile(0.975, double(s.n - 1)) * s.std / std::sqrt(double(s.n));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

}  // namespace erc
