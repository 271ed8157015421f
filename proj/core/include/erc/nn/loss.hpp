// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "erc/nn/tensor.hpp"

namespace erc::nn {

/// Max-shifted softmax of one logit vector.
template <typename Scalar>
Vec<Scalar> softmax(const Vec<Scalar>& logits);

/// -log softmax(logits)[label]. Throws IndexError for an invalid label.
template <typename Scalar>
double cross_entropy(const Vec<Scalar>& logits, std::size_t label);

template <typename Scalar>
struct LossAndGrad {
  double loss = 0.0;       // sum over the batch
  Mat<Scalar> dlogits;     // d(scale * sum)/dlogits
};

/// Batched cross-entropy; the gradient is multiplied by `scale` (1/B gives
/// the mean-loss gradient).
template <typename Scalar>
LossAndGrad<Scalar> softmax_cross_entropy(const Mat<Scalar>& logits,
                                          std::span<const std::size_t> labels,
                                          double scale = 1.0);

/// Column-wise argmax.
template <typename Scalar>
std::vector<std::size_t> argmax_columns(const Mat<Scalar>& logits);

}  // namespace erc::nn
