// SPDX-License-Identifier: Apache-2.0
#include "erc/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "erc/error.hpp"
#include "erc/nn/layers.hpp"
#include "erc/nn/loss.hpp"

namespace erc::nn {

GradCheckResult finite_difference_check(const std::function<double()>& loss,
                                        const std::vector<TensorRef<double>>& params,
                                        const std::vector<TensorRef<const double>>& analytic,
                                        double h, std::size_t max_coordinates, Rng* rng) {
  if (!(h > 0.0)) throw DomainError("finite difference step must be positive");
  if (params.size() != analytic.size()) throw ShapeError("parameter and gradient lists differ");

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].data.size() != analytic[k].data.size())
      throw ShapeError("gradient shape mismatch for " + std::string(params[k].name));
    for (std::size_t i = 0; i < params[k].data.size(); ++i) coords.emplace_back(k, i);
  }
  if (max_coordinates != 0) {
    const std::size_t want = std::max<std::size_t>(max_coordinates, 200);
    if (want < coords.size()) {
      if (!rng) throw DomainError("coordinate sampling needs an Rng");
      // Partial Fisher-Yates: the first `want` entries become the sample.
      for (std::size_t i = 0; i < want; ++i) {
        const auto j = i + static_cast<std::size_t>(rng->below(coords.size() - i));
        std::swap(coords[i], coords[j]);
      }
      coords.resize(want);
    }
  }

  GradCheckResult result;
  for (auto [k, i] : coords) {
    double& x = params[k].data[i];
    const double saved = x;
    x = saved + h;
    const double up = loss();
    x = saved - h;
    const double down = loss();
    x = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double exact = analytic[k].data[i];
    const double abs_err = std::abs(numeric - exact);
    const double denom = std::max({std::abs(numeric), std::abs(exact), kGradCheckFloor});
    result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
    result.max_relative_error = std::max(result.max_relative_error, abs_err / denom);
    ++result.coordinates;
  }
  return result;
}

namespace {

constexpr std::size_t kInput = 8;
constexpr std::size_t kHidden = 16;
constexpr std::size_t kClasses = 4;
constexpr std::size_t kBatch = 3;
constexpr std::size_t kSeqLen = 5;
constexpr double kStep = 1e-5;

Mat<double> normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat<double> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

std::vector<std::size_t> random_labels(Rng& rng) {
  std::vector<std::size_t> labels(kBatch);
  for (auto& l : labels) l = static_cast<std::size_t>(rng.below(kClasses));
  return labels;
}

}  // namespace

GradCheckResult check_mlp_gradients(std::uint64_t seed, bool train_mode) {
  Rng init(seed, "gradcheck/mlp/init");
  auto params = MlpParams<double>::init(kInput, kHidden, kClasses, train_mode ? 0.3 : 0.0, init);
  Rng data(seed, "gradcheck/mlp/data");
  const Mat<double> x = normal_matrix(kInput, kBatch, data);
  const auto labels = random_labels(data);

  // A fresh dropout stream per evaluation keeps the mask fixed.
  auto forward = [&] {
    Rng dropout(seed, "gradcheck/mlp/dropout");
    return mlp_forward<double>(params, x, train_mode, &dropout);
  };
  auto loss = [&] { return softmax_cross_entropy<double>(forward().logits, labels).loss; };

  const auto out = forward();
  const auto lg = softmax_cross_entropy<double>(out.logits, labels);
  const auto grads = mlp_backward<double>(params, out.cache, lg.dlogits);
  return finite_difference_check(loss, params.tensors(), grads.tensors(), kStep);
}

GradCheckResult check_lstm_gradients(std::uint64_t seed, bool train_mode, bool ragged) {
  Rng init(seed, "gradcheck/lstm/init");
  auto params = LstmParams<double>::init(kInput, kHidden, kClasses, train_mode ? 0.3 : 0.0, init);
  Rng data(seed, "gradcheck/lstm/data");
  std::vector<std::vector<Vec<double>>> sequences(kBatch);
  for (std::size_t b = 0; b < kBatch; ++b) {
    const std::size_t len = ragged ? kSeqLen - 2 * b : kSeqLen;
    for (std::size_t t = 0; t < len; ++t) sequences[b].push_back(normal_matrix(kInput, 1, data).col(0));
  }
  const auto batch = SequenceBatch<double>::pack(sequences);
  const auto labels = random_labels(data);

  auto forward = [&] {
    Rng dropout(seed, "gradcheck/lstm/dropout");
    return lstm_forward<double>(params, batch, train_mode, &dropout);
  };
  auto loss = [&] { return softmax_cross_entropy<double>(forward().logits, labels).loss; };

  const auto out = forward();
  const auto lg = softmax_cross_entropy<double>(out.logits, labels);
  const auto grads = lstm_backward<double>(params, out.cache, lg.dlogits);
  return finite_difference_check(loss, params.tensors(), grads.tensors(), kStep);
}

GradCheckReport run_gradcheck(std::uint64_t seed) {
  return {check_mlp_gradients(seed), check_lstm_gradients(seed)};
}

}  // namespace erc::nn
