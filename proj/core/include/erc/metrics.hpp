// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace erc {

struct Prediction {
  std::size_t gold = 0;
  std::size_t predicted = 0;
};

struct ClassificationMetrics {
  /// confusion[gold][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<std::size_t> support;
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

/// Per-class precision/recall/F1 (F1 = 0 when precision + recall = 0) and F1
/// weighted by gold support. Throws EmptyEvalError on empty input and
/// IndexError for labels outside [0, classes).
ClassificationMetrics evaluate_metrics(std::span<const Prediction> predictions,
                                       std::size_t classes);

/// Rebuilds the metrics from a confusion matrix alone.
ClassificationMetrics metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion);

struct SeedSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// mean +- t_{0.975, n-1} * std / sqrt(n). Throws InsufficientRunsError for
/// fewer than two values.
SeedSummary summarize_seeds(std::span<const double> values);

}  // namespace erc
