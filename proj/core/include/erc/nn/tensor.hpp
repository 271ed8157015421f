// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

namespace erc::nn {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Flat view of one parameter tensor (column-major storage).
template <typename Scalar>
struct TensorRef {
  std::string_view name;
  std::span<Scalar> data;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

template <typename Scalar, typename Derived>
TensorRef<Scalar> tensor_ref(std::string_view name, Eigen::PlainObjectBase<Derived>& m) {
  return {name, std::span<Scalar>(m.data(), static_cast<std::size_t>(m.size())), m.rows(), m.cols()};
}

template <typename Scalar, typename Derived>
TensorRef<const Scalar> tensor_ref(std::string_view name, const Eigen::PlainObjectBase<Derived>& m) {
  return {name, std::span<const Scalar>(m.data(), static_cast<std::size_t>(m.size())), m.rows(),
          m.cols()};
}

/// Sum of squared entries over a parameter set.
template <typename Scalar>
double squared_norm(const std::vector<TensorRef<const Scalar>>& tensors) {
  double acc = 0.0;
  for (const auto& t : tensors)
    for (Scalar v : t.data) acc += double(v) * double(v);
  return acc;
}

}  // namespace erc::nn
