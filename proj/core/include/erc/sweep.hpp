// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "erc/stats.hpp"
#include "erc/trainer.hpp"

namespace erc {

struct SweepOptions {
  std::size_t jobs = 1;
  /// (config hash, K, seed) result cache; disabled when unset.
  std::optional<std::filesystem::path> cache_dir;
  /// Identifies the corpus/store pair so cached cells never cross datasets.
  std::string data_fingerprint;
  /// Called from worker threads after each finished cell.
  std::function<void(std::size_t k, std::uint64_t seed, const RunResult&)> on_cell;
};

struct SweepResult {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::string config_hash;  // base configuration, K and seed excluded
  std::vector<std::size_t> grid;
  std::vector<std::uint64_t> seeds;
  /// runs[k index][seed index]
  std::vector<std::vector<RunResult>> runs;

  const RunResult& at(std::size_t k, std::uint64_t seed) const;
  std::vector<double> weighted_f1(std::size_t k_index) const;
  std::vector<double> class_f1(std::size_t k_index, std::size_t class_index) const;
  /// Mean weighted F1 per K.
  std::map<std::size_t, double> mean_curve() const;
  std::map<std::size_t, double> class_mean_curve(std::size_t class_index) const;
  std::vector<SeedSummary> summaries() const;
};

/// {0,1,2,3,5,10,20,30,40,60,90,100,110,130,140,200} u {k_max}, clipped to k_max.
std::vector<std::size_t> default_grid(std::size_t k_max);
std::vector<std::size_t> full_grid(std::size_t k_max);
/// "default", "full" or a comma list. The list must be strictly increasing,
/// start at 0 and stay within k_max (SpecError otherwise).
std::vector<std::size_t> parse_grid(std::string_view text, std::size_t k_max);
void validate_grid(std::span<const std::size_t> grid, std::size_t k_max);

/// 42..51
std::vector<std::uint64_t> default_seeds();
/// "42..51" or "1,2,3".
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Runs every (K, seed) cell, `options.jobs` at a time.
SweepResult k_sweep(const TrainConfig& base, std::span<const std::size_t> grid,
                    std::span<const std::uint64_t> seeds, const Splits& splits,
                    const EmbeddingStore& store, const SenticLexicon* lexicon,
                    const SweepOptions& options = {});

struct SaturationEntry {
  std::size_t k_star = 0;
  double f1_at_zero = 0.0;
  double f1_at_k_star = 0.0;
  double delta = 0.0;
  double target = 0.0;
  std::size_t saturation_k = 0;
  bool flat = false;
};

/// K* = smallest K attaining the maximum, delta = F(K*) - F(0), saturation
/// K = smallest K with F(K) >= F(0) + 0.9 delta. A curve with delta <= 0 is
/// flagged flat with saturation K = 0. Throws MissingBaselineError without
/// K = 0 and DomainError with fewer than two points.
SaturationEntry saturation_point(const std::map<std::size_t, double>& curve);

struct EmotionProfile {
  Emotion emotion = Emotion::neutral;
  SaturationEntry mean_curve;  // headline values
  std::vector<double> seed_saturation_k;
  std::vector<double> seed_delta;
};

struct EmotionProfiles {
  std::vector<EmotionProfile> rows;  // taxonomy class order
  SaturationEntry overall;           // weighted-F1 curve
  std::optional<stats::StatReport> saturation_kruskal;
  std::optional<stats::StatReport> delta_anova;
};

EmotionProfiles emotion_profiles(const SweepResult& sweep);

struct HeadlineK {
  std::size_t k = 0;
  double val_weighted_f1 = 0.0;
  SeedSummary test;
};

/// K with the best mean validation WF1; the test summary is reported there.
HeadlineK select_headline_k(const SweepResult& sweep);

enum class AblationDimension { pooling, layer_mode, fusion, encoding };

std::string_view to_string(AblationDimension d);
AblationDimension parse_ablation_dimension(std::string_view s);

struct AblationVariant {
  std::string name;
  TrainConfig config;
  const EmbeddingStore* store = nullptr;
};

/// pooling: mean / wmean_pos / wmean_pos_rev. layer_mode: the `last` and
/// `avg_last4` stores. fusion: none, blend at 0.05 0.1 0.2 0.5 1.0, concat.
/// encoding: flat, hier:mean, hier:wmean_pos.
std::vector<AblationVariant> default_variants(AblationDimension dimension, const TrainConfig& base,
                                              const EmbeddingStore& store,
                                              const EmbeddingStore* avg_last4_store = nullptr);

struct PairwiseComparison {
  std::string variant;
  double delta = 0.0;  // mean(variant) - mean(baseline)
  stats::StatReport test;  // paired t, Bonferroni over the comparisons
};

struct AblationReport {
  AblationDimension dimension = AblationDimension::pooling;
  std::vector<std::string> variants;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> scores;  // [variant][seed]
  std::vector<SeedSummary> summaries;
  /// Paired t for two variants, Friedman for three or more.
  stats::StatReport omnibus;
  /// Each non-baseline variant against variants[0].
  std::vector<PairwiseComparison> vs_baseline;
};

/// Statistics over per-seed scores, pairing by seed.
AblationReport compare_variants(AblationDimension dimension, std::vector<std::string> names,
                                std::vector<std::uint64_t> seeds,
                                std::vector<std::vector<double>> scores);

AblationReport ablation_grid(AblationDimension dimension, const std::vector<AblationVariant>& variants,
                             std::span<const std::uint64_t> seeds, const Splits& splits,
                             const SenticLexicon* lexicon, const SweepOptions& options = {});

}  // namespace erc
