// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace erc::nn {

/// xoshiro256** stream. The state is expanded from fnv1a(label) ^ seed with
/// splitmix64, so a (seed, label) pair gives the same sequence everywhere.
/// Only integer arithmetic feeds the raw stream; normal() uses libm.
class Rng {
public:
  Rng(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal();
  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Fisher-Yates with below(); independent of the standard library's
  /// distribution implementations.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  const std::array<std::uint64_t, 4>& state() const { return state_; }
  const std::string& label() const { return label_; }

  /// Child stream, e.g. one per epoch: Rng(seed, label + "/" + child).
  Rng derive(std::string_view child) const;

private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::string label_;
};

}  // namespace erc::nn
