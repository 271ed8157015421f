// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "erc/error.hpp"
#include "erc/nn/tensor.hpp"

namespace erc::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename Scalar>
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<Scalar>> m;
  std::vector<std::vector<Scalar>> v;
  std::int64_t t = 0;
};

/// Bias-corrected Adam on flat tensor views. Moments are allocated on the
/// first call; later calls must present the same shapes (else ShapeError).
template <typename Scalar>
void adam_step(const std::vector<TensorRef<Scalar>>& params,
               const std::vector<TensorRef<const Scalar>>& grads, AdamState<Scalar>& state);

/// Convenience for parameter structs exposing tensors().
template <typename Params, typename Scalar>
void adam_step(Params& params, const Params& grads, AdamState<Scalar>& state) {
  adam_step<Scalar>(params.tensors(), grads.tensors(), state);
}

/// Scales gradients in place so their global L2 norm is at most max_norm.
/// Returns the norm before clipping.
template <typename Scalar>
double clip_global_norm(const std::vector<TensorRef<Scalar>>& grads, double max_norm);

}  // namespace erc::nn
