// SPDX-License-Identifier: Apache-2.0
#include "erc/nn/adam.hpp"

#include <cmath>

namespace erc::nn {

template <typename Scalar>
void adam_step(const std::vector<TensorRef<Scalar>>& params,
               const std::vector<TensorRef<const Scalar>>& grads, AdamState<Scalar>& state) {
  if (params.size() != grads.size()) throw ShapeError("parameter and gradient lists differ in length");
  for (std::size_t k = 0; k < params.size(); ++k)
    if (params[k].data.size() != grads[k].data.size())
      throw ShapeError("gradient shape mismatch for " + std::string(params[k].name));
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.data.size(), Scalar(0));
      state.v.emplace_back(p.data.size(), Scalar(0));
    }
  }
  if (state.m.size() != params.size()) throw ShapeError("Adam state does not match parameters");
  for (std::size_t k = 0; k < params.size(); ++k)
    if (state.m[k].size() != params[k].data.size())
      throw ShapeError("Adam moment shape mismatch for " + std::string(params[k].name));

  ++state.t;
  const auto& cfg = state.config;
  const double c1 = 1.0 - std::pow(cfg.beta1, double(state.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, double(state.t));
  const auto b1 = static_cast<Scalar>(cfg.beta1);
  const auto b2 = static_cast<Scalar>(cfg.beta2);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = state.m[k];
    auto& v = state.v[k];
    auto p = params[k].data;
    auto g = grads[k].data;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (Scalar(1) - b1) * g[i];
      v[i] = b2 * v[i] + (Scalar(1) - b2) * g[i] * g[i];
      const double m_hat = double(m[i]) / c1;
      const double v_hat = double(v[i]) / c2;
      p[i] -= static_cast<Scalar>(cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps));
    }
  }
}

template <typename Scalar>
double clip_global_norm(const std::vector<TensorRef<Scalar>>& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads)
    for (Scalar v : g.data) sq += double(v) * double(v);
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const auto s = static_cast<Scalar>(max_norm / norm);
    for (const auto& g : grads)
      for (auto& v : g.data) v *= s;
  }
  return norm;
}

template void adam_step<float>(const std::vector<TensorRef<float>>&,
                               const std::vector<TensorRef<const float>>&, AdamState<float>&);
template void adam_step<double>(const std::vector<TensorRef<double>>&,
                                const std::vector<TensorRef<const double>>&, AdamState<double>&);
template double clip_global_norm<float>(const std::vector<TensorRef<float>>&, double);
template double clip_global_norm<double>(const std::vector<TensorRef<double>>&, double);

}  // namespace erc::nn
