// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "erc/nn/tensor.hpp"

namespace erc::nn {

/// Checkpoint layout (little-endian): "ERCK", u32 version, u8 scalar bytes
/// (4 or 8), u64 seed, u16+bytes config hash, u16+bytes model kind,
/// u32 tensor count, then per tensor u16+bytes name, u32 rows, u32 cols and
/// rows*cols column-major values.
struct CheckpointHeader {
  std::uint32_t version = 1;
  std::uint8_t scalar_bytes = 4;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string model_kind;
};

struct StoredTensor {
  std::string name;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> values;
};

struct Checkpoint {
  CheckpointHeader header;
  std::vector<StoredTensor> tensors;
};

template <typename Scalar>
void write_checkpoint(std::ostream& out, CheckpointHeader header,
                      const std::vector<TensorRef<const Scalar>>& tensors);

Checkpoint read_checkpoint(std::istream& in);

/// Copies stored values into `params`; names and shapes must match.
template <typename Scalar>
void restore_tensors(const Checkpoint& checkpoint, const std::vector<TensorRef<Scalar>>& params);

}  // namespace erc::nn
