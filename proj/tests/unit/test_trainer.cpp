// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "erc/error.hpp"
#include "erc/synth.hpp"
#include "erc/trainer.hpp"

using namespace erc;

namespace {

TrainConfig small_config() {
  TrainConfig c;
  c.hidden = 16;
  c.lr = 5e-3;
  c.patience = 5;
  c.max_epochs = 40;
  c.batch = 32;
  c.seed = 1;
  return c;
}

const synth::SyntheticData& separable() {
  static const auto data = [] {
    synth::SeparableCorpusSpec spec;
    spec.dialogues = 25;
    spec.turns = 8;
    return synth::make_separable_corpus(spec);
  }();
  return data;
}

}  // namespace

TEST_CASE("train config JSON round trip and hashing") {
  auto c = small_config();
  c.fusion = FusionSpec::parse("blend:0.1");
  c.encoding = parse_encoding("hier:wmean_pos");
  c.k = 3;
  const auto back = TrainConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  auto other = c;
  other.lr = 1e-3;
  CHECK(other.hash() != c.hash());
  // Unset patience hashes like its resolved value.
  auto unset = c;
  unset.patience.reset();
  auto resolved = c;
  resolved.patience = 20;
  CHECK(unset.hash() == resolved.hash());
  CHECK(TrainConfig{}.effective_patience() == 60);

  auto j = c.to_json();
  j["learning_rate"] = 1.0;
  CHECK_THROWS_AS(TrainConfig::from_json(j), SpecError);
}

TEST_CASE("training on separable data reaches high weighted F1") {
  const auto& d = separable();
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  const auto r = train_run(small_config(), splits, d.store);
  CHECK(r.weighted_f1 > 0.95);
  CHECK(r.best_epoch >= 1);
  CHECK(r.best_epoch <= r.epochs_run);
  CHECK(r.train_loss.size() == r.epochs_run);
  CHECK(r.test_windows == splits.test.labeled_count(Taxonomy::four_way));
  CHECK(r.per_class_f1.size() == 4);
  const auto back = RunResult::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto& d = separable();
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  auto c = small_config();
  c.k = 2;
  c.max_epochs = 6;
  const auto a = train_run(c, splits, d.store);
  const auto b = train_run(c, splits, d.store);
  CHECK(a.to_json().dump() == b.to_json().dump());
  c.seed = 2;
  CHECK(train_run(c, splits, d.store).train_loss != a.train_loss);
}

TEST_CASE("zero patience stops after one epoch") {
  const auto& d = separable();
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  auto c = small_config();
  c.patience = 0;
  const auto r = train_run(c, splits, d.store);
  CHECK(r.epochs_run == 1);
  CHECK(r.best_epoch == 1);
}

TEST_CASE("training input errors") {
  const auto& d = separable();
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  auto c = small_config();
  c.fusion = FusionSpec::parse("concat");
  CHECK_THROWS_AS(train_run(c, splits, d.store), SpecError);

  Splits no_val{splits.train, Corpus{}, splits.test};
  CHECK_THROWS_AS(train_run(small_config(), no_val, d.store), SpecError);

  EmbeddingStore empty(d.store.dim(), LayerMode::last);
  CHECK_THROWS_AS(train_run(small_config(), splits, empty), MissingRecordError);

  auto diverge = small_config();
  diverge.lr = 1e30;
  diverge.max_epochs = 5;
  CHECK_THROWS_AS(train_run(diverge, splits, d.store), DivergenceError);
}

TEST_CASE("lexicon fusion trains and records coverage") {
  const auto& d = separable();
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  SenticLexicon lex;
  lex.insert("w1", {0.5, 0.1, 0.0, -0.2});
  lex.insert("w2", {-0.3, 0.0, 0.4, 0.1});
  for (const char* f : {"concat", "blend:0.5"}) {
    auto c = small_config();
    c.fusion = FusionSpec::parse(f);
    c.max_epochs = 5;
    const auto r = train_run(c, splits, d.store, &lex);
    CHECK(r.lexicon_coverage > 0.0);
    CHECK(r.weighted_f1 > 0.5);
  }
}

TEST_CASE("end-weighted pooling recovers a final-token signal") {
  synth::PositionalCorpusSpec spec;
  spec.dialogues = 30;
  const auto d = synth::make_positional_corpus(spec);
  const auto splits = make_splits(d.corpus, SplitSpec::standard());
  auto c = small_config();
  c.pooling = PoolingKind::wmean_pos;
  const double fwd = train_run(c, splits, d.store).weighted_f1;
  c.pooling = PoolingKind::wmean_pos_rev;
  const double rev = train_run(c, splits, d.store).weighted_f1;
  CHECK(fwd > rev);
}

TEST_CASE("seed aggregation") {
  std::vector<RunResult> runs(3);
  runs[0].weighted_f1 = 0.7;
  runs[1].weighted_f1 = 0.5;
  runs[2].weighted_f1 = 0.6;
  const auto s = aggregate_seeds(runs);
  CHECK(s.mean == doctest::Approx(0.6));
  CHECK(s.std == doctest::Approx(0.1));
  CHECK_THROWS_AS(aggregate_seeds(std::span<const RunResult>(runs.data(), 1)), InsufficientRunsError);
}
