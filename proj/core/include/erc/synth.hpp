// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "erc/corpus.hpp"
#include "erc/embedding.hpp"

namespace erc::synth {

// Generators for synthetic corpora with known structure. They back the
// end-to-end tests and the `synth` CLI command; none of them touch real data.

struct SyntheticData {
  Corpus corpus;
  EmbeddingStore store{4, LayerMode::last};
};

/// 4-way corpus where angry and happy are visible in the target embedding,
/// while neutral-looking targets are sad exactly when at least `threshold`
/// of the previous `window` turns carry a latent cue. Cues are planted in
/// the embeddings of the turns that carry them.
struct ContextCorpusSpec {
  std::size_t dialogues = 200;
  std::size_t min_turns = 16;
  std::size_t max_turns = 24;
  std::size_t window = 5;
  std::size_t threshold = 1;
  double cue_probability = 0.13;
  /// Share of turns labeled angry or happy from their own vector.
  double visible_share = 0.3;
  std::uint32_t dim = 16;
  double class_strength = 3.0;
  double cue_strength = 5.0;
  std::uint64_t seed = 7;
};

SyntheticData make_context_corpus(const ContextCorpusSpec& spec);

/// Labels drawn uniformly from the taxonomy; every class direction is
/// orthogonal and `strength` times the per-token noise level.
struct SeparableCorpusSpec {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::size_t dialogues = 40;
  std::size_t turns = 12;
  std::uint32_t dim = 16;
  double strength = 4.0;
  std::uint64_t seed = 11;
};

SyntheticData make_separable_corpus(const SeparableCorpusSpec& spec);

/// Class signal planted on one token only (the last by default) of long
/// utterances, so pooling that emphasizes the right end recovers it best.
struct PositionalCorpusSpec {
  std::size_t dialogues = 40;
  std::size_t turns = 12;
  std::size_t min_tokens = 8;
  std::size_t max_tokens = 16;
  std::uint32_t dim = 16;
  double strength = 2.5;
  SignalPlacement placement = SignalPlacement::final_token;
  std::uint64_t seed = 13;
};

SyntheticData make_positional_corpus(const PositionalCorpusSpec& spec);

/// Corpus for the discourse-marker analysis. Every utterance holds exactly
/// one marker; positions cycle through the same LP/medial/RP schedule for
/// every emotion unless `medial_emotion` is set, whose markers are all
/// placed medially.
struct MarkerCorpusSpec {
  std::size_t occurrences_per_emotion = 125;
  std::optional<Emotion> medial_emotion;
  std::size_t tokens = 11;
  std::uint64_t seed = 17;
};

Corpus make_marker_corpus(const MarkerCorpusSpec& spec);

/// Fixed, pairwise-orthogonal unit directions for synth signals.
Eigen::VectorXd basis_direction(std::uint32_t dim, std::size_t axis);

}  // namespace erc::synth
