// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "erc/discourse.hpp"
#include "erc/embedding.hpp"
#include "erc/nn/layers.hpp"
#include "erc/special_functions.hpp"
#include "erc/text.hpp"

namespace {

erc::TokenMatrix random_tokens(Eigen::Index n, Eigen::Index dim) {
  erc::nn::Rng rng(1, "bench/tokens");
  erc::TokenMatrix m(n, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = float(rng.normal());
  return m;
}

void BM_PoolTokens(benchmark::State& state, erc::PoolingKind kind) {
  const auto tokens = random_tokens(state.range(0), 768);
  for (auto _ : state) benchmark::DoNotOptimize(erc::pool_tokens(tokens, kind));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_PoolTokens, mean, erc::PoolingKind::mean)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(BM_PoolTokens, wmean_pos, erc::PoolingKind::wmean_pos)->Arg(16)->Arg(64);

void BM_MlpForward(benchmark::State& state) {
  erc::nn::Rng rng(2, "bench/mlp");
  const auto p = erc::nn::MlpParams<float>::init(768, 128, 4, 0.0, rng);
  erc::nn::Mat<float> x(768, state.range(0));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = float(rng.normal());
  for (auto _ : state) benchmark::DoNotOptimize(erc::nn::mlp_forward(p, x, false, nullptr));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64);

void BM_LstmForward(benchmark::State& state) {
  erc::nn::Rng rng(3, "bench/lstm");
  const auto p = erc::nn::LstmParams<float>::init(768, 128, 4, 0.0, rng);
  std::vector<std::vector<erc::nn::Vec<float>>> seqs(32);
  for (std::size_t b = 0; b < seqs.size(); ++b)
    for (std::int64_t t = 0; t <= std::int64_t(b) % state.range(0); ++t) {
      erc::nn::Vec<float> v(768);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = float(rng.normal());
      seqs[b].push_back(v);
    }
  const auto batch = erc::nn::SequenceBatch<float>::pack(seqs);
  for (auto _ : state) benchmark::DoNotOptimize(erc::nn::lstm_forward(p, batch, false, nullptr));
  state.SetItemsProcessed(state.iterations() * std::int64_t(seqs.size()));
}
BENCHMARK(BM_LstmForward)->Arg(2)->Arg(11);

void BM_TTwoSided(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erc::stats::t_two_sided_p(t, 4.0));
    t = t > 8.0 ? 0.0 : t + 0.37;
  }
}
BENCHMARK(BM_TTwoSided);

void BM_ChiSquareSf(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(erc::stats::chi_square_sf(x, 6.0));
    x = x > 40.0 ? 0.0 : x + 1.3;
  }
}
BENCHMARK(BM_ChiSquareSf);

void BM_MatchMarkers(benchmark::State& state) {
  const auto inventory = erc::MarkerInventory::standard();
  const auto tokens = erc::tokenize(
      "well you know I mean it was fine but then again so what, like, I just don't know anyway");
  for (auto _ : state) benchmark::DoNotOptimize(erc::match_markers(tokens, inventory));
  state.SetItemsProcessed(state.iterations() * std::int64_t(tokens.size()));
}
BENCHMARK(BM_MatchMarkers);

}  // namespace
BENCHMARK_MAIN();
