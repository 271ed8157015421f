// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erc/corpus.hpp"
#include "erc/stats.hpp"
#include "erc/text.hpp"

namespace erc {

struct MarkerEntry {
  std::string marker;
  std::string category;
  std::size_t words = 1;
};

/// Lowercase, unique markers of one or two words. Defaults to the 20 markers
/// observed in IEMOCAP.
class MarkerInventory {
public:
  MarkerInventory() = default;
  /// Throws ValidationError on duplicates, empty markers or markers longer
  /// than two words.
  explicit MarkerInventory(std::vector<std::pair<std::string, std::string>> entries);

  static MarkerInventory standard();

  std::span<const MarkerEntry> entries() const { return entries_; }
  const MarkerEntry* find(std::string_view phrase) const;
  std::size_t max_words() const { return max_words_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Restriction to the named markers (unknown names throw ValidationError).
  MarkerInventory subset(const std::set<std::string>& markers) const;

private:
  std::vector<MarkerEntry> entries_;
  std::size_t max_words_ = 0;
};

/// `marker<TAB>category` per line; blank lines and '#' comments skipped.
MarkerInventory parse_inventory(std::istream& in);
MarkerInventory load_inventory(const std::filesystem::path& path);

struct MarkerMatch {
  std::string marker;
  std::size_t start = 0;
  std::size_t length = 1;

  bool operator==(const MarkerMatch&) const = default;
};

/// Greedy left-to-right longest match. Spans never overlap.
std::vector<MarkerMatch> match_markers(std::span<const std::string> tokens,
                                       const MarkerInventory& inventory);

enum class Periphery { lp, medial, rp };
std::string_view to_string(Periphery p);

inline constexpr double kLeftPeripheryBound = 0.15;
inline constexpr double kRightPeripheryBound = 0.85;

/// LP below 0.15, RP above 0.85, medial otherwise.
Periphery classify_position(double position);

struct PositionInfo {
  double position = 0.0;
  Periphery periphery = Periphery::lp;
};

/// position = start / (n_tokens - 1); a single-token utterance is 0.0 / LP.
/// Throws IndexError unless start < n_tokens.
PositionInfo position_and_periphery(std::size_t start, std::size_t n_tokens);

struct MarkerOccurrence {
  std::string marker;
  std::string category;
  std::string dialogue_id;
  std::string utt_id;
  std::size_t turn_index = 0;
  std::optional<Emotion> emotion;
  std::size_t start = 0;
  std::size_t n_tokens = 0;
  double position = 0.0;
  Periphery periphery = Periphery::lp;
};

struct MarkerFrequency {
  std::string marker;
  std::string category;
  std::size_t count = 0;
};

struct PeripheryRow {
  Emotion emotion = Emotion::neutral;
  std::array<std::size_t, 3> counts{};  // LP, medial, RP
  std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
  double share(Periphery p) const;
};

struct PairwisePeriphery {
  Emotion a = Emotion::neutral;
  Emotion b = Emotion::neutral;
  double raw_p = 1.0;
  /// 2 x 3 emotion-pair x periphery chi-square (all-zero periphery columns
  /// dropped); p_value is Bonferroni-adjusted over all pairs.
  stats::StatReport test;
};

struct DmOptions {
  /// Restrict the analysis set to these markers (frequency table unaffected).
  std::optional<std::set<std::string>> marker_subset;
  /// Leave single-token utterances out of the analysis set.
  bool exclude_single_token = false;
};

struct DmReport {
  Taxonomy taxonomy = Taxonomy::four_way;
  std::vector<MarkerFrequency> frequencies;  // whole corpus, inventory order
  std::size_t frequency_total = 0;
  std::size_t utterances_scanned = 0;
  std::size_t labeled_utterances = 0;
  std::vector<MarkerOccurrence> occurrences;  // analysis set
  std::size_t single_token_occurrences = 0;
  std::vector<PeripheryRow> periphery;  // emotions with >= 1 occurrence
  std::optional<stats::StatReport> association;
  std::optional<stats::StatReport> position_anova;
  std::vector<PairwisePeriphery> pairwise;
  std::vector<std::string> notices;
};

/// Frequency table over all utterances, then the emotion/periphery analysis
/// over occurrences in utterances labeled in `taxonomy`.
DmReport dm_report(const Corpus& corpus, Taxonomy taxonomy, const MarkerInventory& inventory,
                   const DmOptions& options = {});

}  // namespace erc
