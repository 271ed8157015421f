// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "erc/corpus.hpp"

namespace erc {

using TokenMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class LayerMode : std::uint8_t { last = 0, avg_last4 = 1 };

enum class PoolingKind { mean, wmean_pos, wmean_pos_rev };

enum class WeightDirection { forward, reverse };

enum class EncodingMode { flat, hier };

struct EncodingSpec {
  EncodingMode mode = EncodingMode::flat;
  /// Sentence-vector aggregation; only consulted when mode == hier.
  PoolingKind hier_aggregation = PoolingKind::mean;
};

std::string_view to_string(LayerMode m);
std::string_view to_string(PoolingKind k);
std::string to_string(const EncodingSpec& e);
LayerMode parse_layer_mode(std::string_view s);
PoolingKind parse_pooling(std::string_view s);
/// "flat", "hier" (mean aggregation), "hier:mean" or "hier:wmean_pos".
EncodingSpec parse_encoding(std::string_view s);

/// Record key of sentence `index` (0-based) of an utterance.
std::string sentence_key(std::string_view utt_id, std::size_t index);

/// Per-unit token matrices (n_tokens x dim), keyed by utterance id or by
/// sentence_key(). Read-only after construction.
class EmbeddingStore {
public:
  EmbeddingStore(std::uint32_t dim, LayerMode layer_mode);

  std::uint32_t dim() const { return dim_; }
  LayerMode layer_mode() const { return layer_mode_; }
  std::size_t size() const { return order_.size(); }

  /// Throws DuplicateKeyError or ShapeError/DomainError on bad shapes.
  void insert(std::string key, TokenMatrix tokens);

  const TokenMatrix* find(std::string_view key) const;
  /// Throws MissingRecordError naming the key.
  const TokenMatrix& at(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }

  /// Keys in insertion order; also the on-disk record order.
  const std::vector<std::string>& keys() const { return order_; }

private:
  std::uint32_t dim_;
  LayerMode layer_mode_;
  std::unordered_map<std::string, TokenMatrix> records_;
  std::vector<std::string> order_;
};

/// EMB1 reader/writer. Little-endian: "EMB1", u32 version (1), u32 dim,
/// u8 layer mode, u64 record count, then per record u16 key length, key bytes,
/// u32 token count and n_tokens*dim float32 values row-major.
EmbeddingStore read_store(std::istream& in);
EmbeddingStore open_store(const std::filesystem::path& path);
void write_store(std::ostream& out, const EmbeddingStore& store);
void save_store(const std::filesystem::path& path, const EmbeddingStore& store);

/// Linear ramp w_i = (i+1) / (n(n+1)/2); reverse mirrors it.
std::vector<double> position_weights(std::size_t n, WeightDirection direction);

Eigen::VectorXd pool_tokens(const TokenMatrix& tokens, PoolingKind kind);
Eigen::VectorXd pool_rows(const Eigen::MatrixXd& rows, PoolingKind kind);

/// Flat: pool the utterance record. Hier: pool each sentence record, then
/// aggregate the sentence vectors with spec.hier_aggregation.
Eigen::VectorXd utterance_vector(const EmbeddingStore& store, const Utterance& utt,
                                 const EncodingSpec& encoding, PoolingKind pooling);

// Synthetic stores -----------------------------------------------------------

enum class SignalPlacement { all_tokens, final_token, initial_token };

/// Label -> direction mapping used to plant a class signal in synthetic
/// token matrices.
struct SignalMap {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::map<Emotion, Eigen::VectorXd> directions;
  SignalPlacement placement = SignalPlacement::all_tokens;
};

/// Per-utterance additive signal; nullopt leaves the tokens as pure noise.
using SignalFn = std::function<std::optional<Eigen::VectorXd>(const Utterance&)>;

/// Deterministic N(0,1) token matrices for every utterance and sentence unit
/// (token count = whitespace tokens of the unit text, at least one), with an
/// optional class-direction component added to labeled utterances.
/// Throws DomainError when dim < 4.
EmbeddingStore synth_store(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed,
                           const SignalMap* signal_map = nullptr);
EmbeddingStore synth_store(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed,
                           const SignalFn& signal, SignalPlacement placement);

}  // namespace erc
