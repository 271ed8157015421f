// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "erc/embedding.hpp"
#include "erc/error.hpp"
#include "erc/nn/rng.hpp"
#include "support.hpp"

using namespace erc;

namespace {

TokenMatrix random_tokens(nn::Rng& rng, std::size_t n, std::size_t d) {
  TokenMatrix m(n, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = float(rng.normal());
  return m;
}

template <typename T>
T read_le(const std::string& bytes, std::size_t offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

}  // namespace

TEST_CASE("EMB1 byte layout") {
  EmbeddingStore store(2, LayerMode::avg_last4);
  TokenMatrix m(1, 2);
  m << 1.5f, -2.0f;
  store.insert("ab", m);
  std::ostringstream out;
  write_store(out, store);
  const std::string b = out.str();
  REQUIRE(b.size() == 4 + 4 + 4 + 1 + 8 + 2 + 2 + 4 + 8);
  CHECK(b.substr(0, 4) == "EMB1");
  CHECK(read_le<std::uint32_t>(b, 4) == 1);
  CHECK(read_le<std::uint32_t>(b, 8) == 2);
  CHECK(std::uint8_t(b[12]) == 1);
  CHECK(read_le<std::uint64_t>(b, 13) == 1);
  CHECK(read_le<std::uint16_t>(b, 21) == 2);
  CHECK(b.substr(23, 2) == "ab");
  CHECK(read_le<std::uint32_t>(b, 25) == 1);
  CHECK(read_le<float>(b, 29) == 1.5f);
  CHECK(read_le<float>(b, 33) == -2.0f);
}

TEST_CASE("EMB1 round trip preserves keys, order and values") {
  nn::Rng rng(1, "test/emb");
  EmbeddingStore store(5, LayerMode::last);
  for (int i = 0; i < 20; ++i) store.insert("k" + std::to_string(19 - i), random_tokens(rng, 1 + rng.below(7), 5));
  std::stringstream io;
  write_store(io, store);
  const auto back = read_store(io);
  CHECK(back.dim() == 5);
  CHECK(back.layer_mode() == LayerMode::last);
  CHECK(back.keys() == store.keys());
  for (const auto& k : store.keys()) CHECK(back.at(k) == store.at(k));

  const auto dir = test::scratch_dir("emb");
  save_store(dir / "s.emb", store);
  CHECK(open_store(dir / "s.emb").keys() == store.keys());
}

TEST_CASE("EMB1 rejects malformed input") {
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return read_store(in);
  };
  EmbeddingStore store(2, LayerMode::last);
  store.insert("a", TokenMatrix::Ones(2, 2));
  std::ostringstream out;
  write_store(out, store);
  const std::string good = out.str();
  CHECK_NOTHROW(read(good));
  CHECK_THROWS_AS(read("EMB2" + good.substr(4)), FormatError);
  CHECK_THROWS_AS(read(good.substr(0, good.size() - 3)), FormatError);
  CHECK_THROWS_AS(read(good + "x"), FormatError);
  std::string bad_mode = good;
  bad_mode[12] = 7;
  CHECK_THROWS_AS(read(bad_mode), FormatError);
  std::string nan = good;
  const float q = std::nanf("");
  std::memcpy(nan.data() + good.size() - 4, &q, 4);
  CHECK_THROWS_AS(read(nan), FormatError);

  CHECK_THROWS_AS(store.insert("a", TokenMatrix::Ones(1, 2)), DuplicateKeyError);
  CHECK_THROWS_AS(store.insert("b", TokenMatrix::Ones(1, 3)), ShapeError);
  CHECK_THROWS_AS(store.at("zzz"), MissingRecordError);
}

TEST_CASE("position weights are a normalized linear ramp") {
  for (std::size_t n : {1u, 2u, 3u, 7u, 50u, 999u}) {
    const auto w = position_weights(n, WeightDirection::forward);
    const auto r = position_weights(n, WeightDirection::reverse);
    double sw = 0, sr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sw += w[i];
      sr += r[i];
      CHECK(w[i] == doctest::Approx(double(i + 1) / (double(n) * double(n + 1) / 2.0)).epsilon(1e-14));
      CHECK(r[i] == w[n - 1 - i]);
    }
    CHECK(std::abs(sw - 1.0) < 1e-12);
    CHECK(std::abs(sr - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(position_weights(0, WeightDirection::forward), DomainError);
}

TEST_CASE("pooling a matrix of identical rows returns the row") {
  nn::Rng rng(2, "test/pool");
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng.below(12), n = 1 + rng.below(40);
    Eigen::VectorXd row(d);
    for (auto& x : row) x = rng.uniform(-3, 3);
    Eigen::MatrixXd rows = row.transpose().replicate(Eigen::Index(n), 1);
    for (auto kind : {PoolingKind::mean, PoolingKind::wmean_pos, PoolingKind::wmean_pos_rev})
      CHECK((pool_rows(rows, kind) - row).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pooling matches explicit weighted sums") {
  nn::Rng rng(3, "test/pool2");
  const auto t = random_tokens(rng, 6, 4);
  const auto w = position_weights(6, WeightDirection::forward);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4), fwd = mean, rev = mean;
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd row = t.row(i).cast<double>().transpose();
    mean += row / 6.0;
    fwd += w[std::size_t(i)] * row;
    rev += w[std::size_t(5 - i)] * row;
  }
  CHECK((pool_tokens(t, PoolingKind::mean) - mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((pool_tokens(t, PoolingKind::wmean_pos) - fwd).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((pool_tokens(t, PoolingKind::wmean_pos_rev) - rev).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("flat and hierarchical utterance vectors") {
  EmbeddingStore store(2, LayerMode::last);
  TokenMatrix flat(2, 2), s0(1, 2), s1(3, 2);
  flat << 1, 1, 3, 3;
  s0 << 2, 0;
  s1 << 0, 4, 0, 4, 0, 4;
  store.insert("u", flat);
  store.insert(sentence_key("u", 0), s0);
  store.insert(sentence_key("u", 1), s1);
  Utterance u;
  u.utt_id = "u";
  u.sentences = {"one", "two three four"};
  CHECK(sentence_key("u", 1) == "u#s1");
  const auto f = utterance_vector(store, u, parse_encoding("flat"), PoolingKind::mean);
  CHECK(f[0] == 2.0);
  const auto h = utterance_vector(store, u, parse_encoding("hier:mean"), PoolingKind::mean);
  CHECK(h[0] == 1.0);
  CHECK(h[1] == 2.0);
  // wmean_pos over two sentences weights them 1/3 and 2/3.
  const auto hw = utterance_vector(store, u, parse_encoding("hier:wmean_pos"), PoolingKind::mean);
  CHECK(hw[0] == doctest::Approx(2.0 / 3.0));
  CHECK(hw[1] == doctest::Approx(8.0 / 3.0));
  u.sentences.push_back("missing");
  CHECK_THROWS_AS(utterance_vector(store, u, parse_encoding("hier"), PoolingKind::mean), MissingRecordError);
  CHECK_THROWS_AS(parse_encoding("hier:max"), SpecError);
  CHECK_THROWS_AS(parse_pooling("max"), SpecError);
}

TEST_CASE("synthetic stores are deterministic") {
  std::vector<Dialogue> ds{test::make_dialogue("d", 1, {{"a b c", Emotion::sad}, {"d", Emotion::happy}})};
  const Corpus c(std::move(ds));
  const auto a = synth_store(c, 8, 5);
  const auto b = synth_store(c, 8, 5);
  const auto other = synth_store(c, 8, 6);
  REQUIRE(a.keys() == b.keys());
  for (const auto& k : a.keys()) {
    CHECK(a.at(k) == b.at(k));
    CHECK(a.at(k) != other.at(k));
  }
  CHECK(a.at("d_0").rows() == 3);
  CHECK(a.contains(sentence_key("d_1", 0)));
  CHECK_THROWS_AS(synth_store(c, 3, 5), DomainError);
}
