// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "erc/taxonomy.hpp"

namespace erc {

struct Utterance {
  std::string utt_id;
  std::size_t turn_index = 0;
  std::string speaker;
  std::string text;
  std::vector<std::string> sentences;
  std::optional<Emotion> label4;
  std::optional<Emotion> label6;

  std::optional<Emotion> label(Taxonomy t) const {
    return t == Taxonomy::four_way ? label4 : label6;
  }
};

struct Dialogue {
  std::string dialogue_id;
  int session = 0;
  std::vector<Utterance> utterances;
};

/// Validated, immutable collection of dialogues.
class Corpus {
public:
  Corpus() = default;
  /// Validates every invariant; throws ValidationError naming the dialogue.
  explicit Corpus(std::vector<Dialogue> dialogues);

  std::span<const Dialogue> dialogues() const { return dialogues_; }
  std::size_t size() const { return dialogues_.size(); }
  bool empty() const { return dialogues_.empty(); }
  std::size_t utterance_count() const;
  std::size_t labeled_count(Taxonomy t) const;

  /// Longest dialogue in turns; the upper end of a K sweep.
  std::size_t k_max() const { return k_max_; }

  std::set<int> sessions() const;

private:
  std::vector<Dialogue> dialogues_;
  std::size_t k_max_ = 0;
};

/// Parses the JSONL corpus format (one dialogue object per line).
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct SplitSpec {
  std::set<int> train_sessions;
  std::set<int> val_sessions;
  std::set<int> test_sessions;

  /// Sessions 2-4 train, 1 validation, 5 test.
  static SplitSpec standard();
  /// Parses "2,3,4/1/5".
  static SplitSpec parse(std::string_view text);
  std::string to_string() const;
};

struct Splits {
  Corpus train;
  Corpus val;
  Corpus test;
};

/// Partitions dialogues by session. Overlapping session sets throw SpecError;
/// sessions absent from the corpus only produce a warning.
Splits make_splits(const Corpus& corpus, const SplitSpec& spec);

/// A target utterance together with up to K preceding turns of the same
/// dialogue. Views into the corpus; the corpus must outlive the window.
class ContextWindow {
public:
  ContextWindow(const Dialogue& dialogue, std::size_t target, std::size_t k_requested);

  /// Oldest first; the target is the last element.
  std::span<const Utterance> turns() const;
  const Utterance& target() const { return dialogue_->utterances[target_]; }
  const Dialogue& dialogue() const { return *dialogue_; }
  std::size_t k_requested() const { return k_requested_; }
  std::size_t size() const { return target_ - first_ + 1; }

private:
  const Dialogue* dialogue_;
  std::size_t target_;
  std::size_t first_;
  std::size_t k_requested_;
};

/// One window per utterance labeled in `taxonomy`. Context turns may be
/// unlabeled.
std::vector<ContextWindow> build_context_windows(const Corpus& corpus, std::size_t k,
                                                 Taxonomy taxonomy);

struct Distribution {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
  /// value -> number of items with that value, ascending by value.
  std::vector<std::pair<std::size_t, std::size_t>> histogram;
};

struct CorpusStats {
  std::size_t dialogues = 0;
  std::size_t utterances = 0;
  std::size_t labeled4 = 0;
  std::size_t labeled6 = 0;
  Distribution dialogue_lengths;
  Distribution sentences_per_utterance;
  std::vector<std::pair<Emotion, std::size_t>> label4_counts;
  std::vector<std::pair<Emotion, std::size_t>> label6_counts;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace erc
