// SPDX-License-Identifier: Apache-2.0
#include "erc/embedding.hpp"

#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "erc/error.hpp"
#include "erc/hash.hpp"
#include "erc/nn/rng.hpp"
#include "erc/text.hpp"

namespace erc {

std::string_view to_string(LayerMode m) { return m == LayerMode::last ? "last" : "avg_last4"; }

std::string_view to_string(PoolingKind k) {
  switch (k) {
    case PoolingKind::mean: return "mean";
    case PoolingKind::wmean_pos: return "wmean_pos";
    case PoolingKind::wmean_pos_rev: return "wmean_pos_rev";
  }
  return "?";
}

std::string to_string(const EncodingSpec& e) {
  if (e.mode == EncodingMode::flat) return "flat";
  return "hier:" + std::string(to_string(e.hier_aggregation));
}

LayerMode parse_layer_mode(std::string_view s) {
  if (s == "last") return LayerMode::last;
  if (s == "avg_last4") return LayerMode::avg_last4;
  throw SpecError("unknown layer mode '" + std::string(s) + "'");
}

PoolingKind parse_pooling(std::string_view s) {
  if (s == "mean") return PoolingKind::mean;
  if (s == "wmean_pos") return PoolingKind::wmean_pos;
  if (s == "wmean_pos_rev") return PoolingKind::wmean_pos_rev;
  throw SpecError("unknown pooling '" + std::string(s) + "'");
}

EncodingSpec parse_encoding(std::string_view s) {
  if (s == "flat") return {EncodingMode::flat, PoolingKind::mean};
  if (s == "hier" || s == "hier:mean") return {EncodingMode::hier, PoolingKind::mean};
  if (s == "hier:wmean_pos") return {EncodingMode::hier, PoolingKind::wmean_pos};
  throw SpecError("unknown encoding '" + std::string(s) + "' (flat, hier:mean, hier:wmean_pos)");
}

std::string sentence_key(std::string_view utt_id, std::size_t index) {
  return std::string(utt_id) + "#s" + std::to_string(index);
}

EmbeddingStore::EmbeddingStore(std::uint32_t dim, LayerMode layer_mode)
    : dim_(dim), layer_mode_(layer_mode) {
  if (dim == 0) throw DomainError("embedding dim must be positive");
}

void EmbeddingStore::insert(std::string key, TokenMatrix tokens) {
  if (tokens.rows() < 1) throw DomainError("record '" + key + "' has no tokens");
  if (tokens.cols() != static_cast<Eigen::Index>(dim_))
    throw ShapeError("record '" + key + "' has width " + std::to_string(tokens.cols()) +
                     ", store dim is " + std::to_string(dim_));
  if (!tokens.allFinite()) throw DomainError("record '" + key + "' has non-finite values");
  if (records_.count(key)) throw DuplicateKeyError(key);
  order_.push_back(key);
  records_.emplace(std::move(key), std::move(tokens));
}

const TokenMatrix* EmbeddingStore::find(std::string_view key) const {
  auto it = records_.find(std::string(key));
  return it == records_.end() ? nullptr : &it->second;
}

const TokenMatrix& EmbeddingStore::at(std::string_view key) const {
  if (const auto* m = find(key)) return *m;
  throw MissingRecordError(std::string(key));
}

EmbeddingStore read_store(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string_view(magic, 4) != "EMB1") throw FormatError("bad magic, expected EMB1");
  const auto version = detail::get_le<std::uint32_t>(in, "version");
  if (version != 1) throw FormatError("unsupported EMB1 version " + std::to_string(version));
  const auto dim = detail::get_le<std::uint32_t>(in, "dim");
  if (dim == 0) throw FormatError("dim must be positive");
  const auto mode = detail::get_le<std::uint8_t>(in, "layer mode");
  if (mode > 1) throw FormatError("unknown layer mode " + std::to_string(mode));
  const auto count = detail::get_le<std::uint64_t>(in, "record count");

  EmbeddingStore store(dim, static_cast<LayerMode>(mode));
  for (std::uint64_t r = 0; r < count; ++r) {
    auto key = detail::get_string16(in, "record key");
    const auto n_tokens = detail::get_le<std::uint32_t>(in, "token count");
    if (n_tokens == 0) throw FormatError("record '" + key + "' has zero tokens");
    TokenMatrix m(n_tokens, dim);
    for (std::uint32_t i = 0; i < n_tokens; ++i)
      for (std::uint32_t j = 0; j < dim; ++j) m(i, j) = detail::get_f32(in, "token values");
    if (!m.allFinite()) throw FormatError("record '" + key + "' has non-finite values");
    if (store.contains(key)) throw DuplicateKeyError(key);
    store.insert(std::move(key), std::move(m));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after last record");
  return store;
}

EmbeddingStore open_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding store " + path.string());
  return read_store(in);
}

void write_store(std::ostream& out, const EmbeddingStore& store) {
  out.write("EMB1", 4);
  detail::put_le<std::uint32_t>(out, 1);
  detail::put_le<std::uint32_t>(out, store.dim());
  detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(store.layer_mode()));
  detail::put_le<std::uint64_t>(out, store.size());
  for (const auto& key : store.keys()) {
    const auto& m = store.at(key);
    detail::put_string16(out, key);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) detail::put_f32(out, m(i, j));
  }
}

void save_store(const std::filesystem::path& path, const EmbeddingStore& store) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_store(out, store);
}

std::vector<double> position_weights(std::size_t n, WeightDirection direction) {
  if (n == 0) throw DomainError("position_weights needs n >= 1");
  const double total = double(n) * double(n + 1) / 2.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = double(i + 1) / total;
  if (direction == WeightDirection::reverse) std::reverse(w.begin(), w.end());
  return w;
}

Eigen::VectorXd pool_rows(const Eigen::MatrixXd& rows, PoolingKind kind) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (n == 0) throw DomainError("cannot pool an empty token matrix");
  if (kind == PoolingKind::mean) return rows.colwise().mean().transpose();
  const auto w = position_weights(
      n, kind == PoolingKind::wmean_pos ? WeightDirection::forward : WeightDirection::reverse);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows.cols());
  for (std::size_t i = 0; i < n; ++i) out += w[i] * rows.row(Eigen::Index(i)).transpose();
  return out;
}

Eigen::VectorXd pool_tokens(const TokenMatrix& tokens, PoolingKind kind) {
  if (tokens.rows() == 0) throw DomainError("cannot pool an empty token matrix");
  return pool_rows(tokens.cast<double>(), kind);
}

Eigen::VectorXd utterance_vector(const EmbeddingStore& store, const Utterance& utt,
                                 const EncodingSpec& encoding, PoolingKind pooling) {
  if (encoding.mode == EncodingMode::flat) return pool_tokens(store.at(utt.utt_id), pooling);
  if (encoding.hier_aggregation == PoolingKind::wmean_pos_rev)
    throw SpecError("hierarchical aggregation supports mean and wmean_pos only");
  Eigen::MatrixXd sentence_vectors(Eigen::Index(utt.sentences.size()), store.dim());
  for (std::size_t s = 0; s < utt.sentences.size(); ++s)
    sentence_vectors.row(Eigen::Index(s)) =
        pool_tokens(store.at(sentence_key(utt.utt_id, s)), pooling).transpose();
  return pool_rows(sentence_vectors, encoding.hier_aggregation);
}

namespace {

TokenMatrix noise_tokens(std::size_t n, std::uint32_t dim, std::uint64_t seed, const std::string& key) {
  nn::Rng rng(seed, "synth/" + key);
  TokenMatrix m(Eigen::Index(n), dim);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = static_cast<float>(rng.normal());
  return m;
}

void add_signal(TokenMatrix& m, const Eigen::VectorXd& direction, SignalPlacement placement) {
  const Eigen::RowVectorXf d = direction.cast<float>().transpose();
  switch (placement) {
    case SignalPlacement::all_tokens: m.rowwise() += d; break;
    case SignalPlacement::final_token: m.row(m.rows() - 1) += d; break;
    case SignalPlacement::initial_token: m.row(0) += d; break;
  }
}

}  // namespace

EmbeddingStore synth_store(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed,
                           const SignalFn& signal, SignalPlacement placement) {
  if (dim < 4) throw DomainError("synth_store needs dim >= 4");
  EmbeddingStore store(dim, LayerMode::last);
  for (const auto& d : corpus.dialogues()) {
    for (const auto& u : d.utterances) {
      std::optional<Eigen::VectorXd> direction;
      if (signal) direction = signal(u);
      if (direction && direction->size() != Eigen::Index(dim))
        throw ShapeError("signal direction for '" + u.utt_id + "' has wrong width");
      auto flat = noise_tokens(std::max<std::size_t>(1, whitespace_token_count(u.text)), dim, seed, u.utt_id);
      if (direction) add_signal(flat, *direction, placement);
      store.insert(u.utt_id, std::move(flat));
      for (std::size_t s = 0; s < u.sentences.size(); ++s) {
        auto key = sentence_key(u.utt_id, s);
        auto m = noise_tokens(std::max<std::size_t>(1, whitespace_token_count(u.sentences[s])), dim, seed, key);
        if (direction) {
          // Sentence units inherit the signal; with final/initial placement
          // only the last/first sentence carries it.
          const bool carries = placement == SignalPlacement::all_tokens ||
                               (placement == SignalPlacement::final_token && s + 1 == u.sentences.size()) ||
                               (placement == SignalPlacement::initial_token && s == 0);
          if (carries) add_signal(m, *direction, placement);
        }
        store.insert(std::move(key), std::move(m));
      }
    }
  }
  return store;
}

EmbeddingStore synth_store(const Corpus& corpus, std::uint32_t dim, std::uint64_t seed,
                           const SignalMap* signal_map) {
  if (!signal_map) return synth_store(corpus, dim, seed, SignalFn{}, SignalPlacement::all_tokens);
  SignalFn fn = [signal_map](const Utterance& u) -> std::optional<Eigen::VectorXd> {
    auto label = u.label(signal_map->taxonomy);
    if (!label) return std::nullopt;
    auto it = signal_map->directions.find(*label);
    if (it == signal_map->directions.end()) return std::nullopt;
    return it->second;
  };
  return synth_store(corpus, dim, seed, fn, signal_map->placement);
}

}  // namespace erc
