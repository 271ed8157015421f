// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "erc/nn/rng.hpp"
#include "erc/nn/tensor.hpp"

namespace erc::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t coordinates = 0;
};

/// Relative error is |a - n| / max(|a|, |n|, floor). The floor keeps
/// coordinates whose true gradient is ~0 from reporting round-off noise as a
/// large relative error.
inline constexpr double kGradCheckFloor = 1e-6;

/// Central differences (f(x+h) - f(x-h)) / 2h on a coordinate subset,
/// compared with `analytic`. Parameters are perturbed in place and restored.
/// `max_coordinates` of 0 checks every coordinate; otherwise a uniform
/// sample of max(max_coordinates, 200) coordinates is drawn from `rng`.
GradCheckResult finite_difference_check(const std::function<double()>& loss,
                                        const std::vector<TensorRef<double>>& params,
                                        const std::vector<TensorRef<const double>>& analytic,
                                        double h, std::size_t max_coordinates = 0,
                                        Rng* rng = nullptr);

struct GradCheckReport {
  GradCheckResult mlp;
  GradCheckResult lstm;
};

/// MLP 8->16->4 and LSTM (d=8, h=16, c=4, sequences of length 5) in double
/// precision with h = 1e-5. `train_mode` checks the dropout path with the
/// masks held fixed between evaluations.
GradCheckResult check_mlp_gradients(std::uint64_t seed, bool train_mode = false);
GradCheckResult check_lstm_gradients(std::uint64_t seed, bool train_mode = false,
                                     bool ragged = false);
GradCheckReport run_gradcheck(std::uint64_t seed);

}  // namespace erc::nn
