// SPDX-License-Identifier: Apache-2.0
#include "erc/nn/checkpoint.hpp"

#include <istream>
#include <ostream>

#include "binary_io.hpp"
#include "erc/error.hpp"

namespace erc::nn {

template <typename Scalar>
void write_checkpoint(std::ostream& out, CheckpointHeader header,
                      const std::vector<TensorRef<const Scalar>>& tensors) {
  header.scalar_bytes = sizeof(Scalar);
  out.write("ERCK", 4);
  detail::put_le<std::uint32_t>(out, header.version);
  detail::put_le<std::uint8_t>(out, header.scalar_bytes);
  detail::put_le<std::uint64_t>(out, header.seed);
  detail::put_string16(out, header.config_hash);
  detail::put_string16(out, header.model_kind);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    detail::put_string16(out, std::string(t.name));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.rows));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.cols));
    for (Scalar v : t.data) {
      if constexpr (sizeof(Scalar) == 4) detail::put_f32(out, v);
      else detail::put_f64(out, v);
    }
  }
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string_view(magic, 4) != "ERCK") throw FormatError("bad checkpoint magic");
  Checkpoint ck;
  ck.header.version = detail::get_le<std::uint32_t>(in, "version");
  if (ck.header.version != 1) throw FormatError("unsupported checkpoint version");
  ck.header.scalar_bytes = detail::get_le<std::uint8_t>(in, "precision");
  if (ck.header.scalar_bytes != 4 && ck.header.scalar_bytes != 8)
    throw FormatError("checkpoint precision must be 4 or 8 bytes");
  ck.header.seed = detail::get_le<std::uint64_t>(in, "seed");
  ck.header.config_hash = detail::get_string16(in, "config hash");
  ck.header.model_kind = detail::get_string16(in, "model kind");
  const auto count = detail::get_le<std::uint32_t>(in, "tensor count");
  for (std::uint32_t k = 0; k < count; ++k) {
    StoredTensor t;
    t.name = detail::get_string16(in, "tensor name");
    t.rows = detail::get_le<std::uint32_t>(in, "rows");
    t.cols = detail::get_le<std::uint32_t>(in, "cols");
    const std::uint64_t n = std::uint64_t(t.rows) * t.cols;
    t.values.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
      t.values.push_back(ck.header.scalar_bytes == 4 ? double(detail::get_f32(in, "tensor values"))
                                                     : detail::get_f64(in, "tensor values"));
    ck.tensors.push_back(std::move(t));
  }
  return ck;
}

template <typename Scalar>
void restore_tensors(const Checkpoint& checkpoint, const std::vector<TensorRef<Scalar>>& params) {
  if (checkpoint.tensors.size() != params.size()) throw ShapeError("checkpoint tensor count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& src = checkpoint.tensors[k];
    const auto& dst = params[k];
    if (src.name != dst.name || src.rows != dst.rows || src.cols != dst.cols)
      throw ShapeError("checkpoint tensor '" + src.name + "' does not match '" + std::string(dst.name) + "'");
    for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] = static_cast<Scalar>(src.values[i]);
  }
}

template void write_checkpoint<float>(std::ostream&, CheckpointHeader,
                                      const std::vector<TensorRef<const float>>&);
template void write_checkpoint<double>(std::ostream&, CheckpointHeader,
                                       const std::vector<TensorRef<const double>>&);
template void restore_tensors<float>(const Checkpoint&, const std::vector<TensorRef<float>>&);
template void restore_tensors<double>(const Checkpoint&, const std::vector<TensorRef<double>>&);

}  // namespace erc::nn
