// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "erc/corpus.hpp"
#include "erc/embedding.hpp"
#include "erc/lexicon.hpp"
#include "erc/metrics.hpp"
#include "erc/model.hpp"

namespace erc {

struct TrainConfig {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::size_t k = 0;
  EncodingSpec encoding;
  PoolingKind pooling = PoolingKind::mean;
  FusionSpec fusion;
  double lr = 1e-3;
  std::size_t hidden = 256;
  double dropout = 0.3;
  std::size_t batch = 64;
  /// Unset: 60 epochs when k == 0, 20 otherwise.
  std::optional<std::size_t> patience;
  std::size_t max_epochs = 500;
  std::uint64_t seed = 42;
  /// Global gradient-norm clipping threshold; 0 disables clipping.
  double clip_norm = 0.0;
  /// L2-normalize utterance vectors before the classifier.
  bool normalize_vectors = false;
  bool multiword_lexicon = false;

  std::size_t effective_patience() const { return patience.value_or(k == 0 ? 60 : 20); }

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
  /// FNV-1a of the canonical JSON form (sorted keys, resolved patience).
  std::string hash() const;
};

struct RunResult {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::pair<Emotion, double>> per_class_f1;
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t best_epoch = 0;  // 1-based
  std::size_t epochs_run = 0;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  double val_weighted_f1 = 0.0;  // at best_epoch, diagnostics and K selection
  std::size_t train_windows = 0;
  std::size_t val_windows = 0;
  std::size_t test_windows = 0;
  double lexicon_coverage = 0.0;  // mean over featurized utterances; 0 without lexicon

  double class_f1(Emotion e) const;

  nlohmann::json to_json() const;
  static RunResult from_json(const nlohmann::json& j);
};

struct TrainOutcome {
  RunResult result;
  ModelParams<float> model;
};

/// One seed, one configuration: trains with early stopping on validation
/// loss, restores the best epoch and evaluates on the test split.
/// Throws MissingRecordError, DivergenceError, SpecError (empty splits).
TrainOutcome train_model(const TrainConfig& config, const Splits& splits,
                         const EmbeddingStore& store, const SenticLexicon* lexicon = nullptr);

RunResult train_run(const TrainConfig& config, const Splits& splits, const EmbeddingStore& store,
                    const SenticLexicon* lexicon = nullptr);

/// Summary of weighted F1 across runs.
SeedSummary aggregate_seeds(std::span<const RunResult> results);

void save_checkpoint(const std::filesystem::path& path, const TrainOutcome& outcome,
                     const TrainConfig& config);

}  // namespace erc
