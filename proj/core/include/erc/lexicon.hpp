// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "erc/corpus.hpp"

namespace erc {

/// pleasantness, attention, sensitivity, aptitude
using AffectVector = std::array<double, 4>;

class SenticLexicon {
public:
  /// Keys are normalized (trimmed, lowercased); values must lie in [-1, 1].
  void insert(std::string concept_name, const AffectVector& values);
  const AffectVector* find(std::string_view concept_name) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t max_words() const { return max_words_; }
  const std::map<std::string, AffectVector, std::less<>>& entries() const { return entries_; }

private:
  std::map<std::string, AffectVector, std::less<>> entries_;
  std::size_t max_words_ = 0;
};

/// `concept<TAB>p<TAB>a<TAB>s<TAB>ap` per line; blank lines and '#' comments
/// skipped. Duplicate concepts: last wins, with a warning.
SenticLexicon parse_lexicon(std::istream& in);
SenticLexicon load_lexicon(const std::filesystem::path& path);

struct AffectFeatures {
  AffectVector values{0.0, 0.0, 0.0, 0.0};
  std::size_t matched = 0;
  std::size_t tokens = 0;
  /// matched / tokens, 0 for an empty utterance.
  double coverage() const { return tokens == 0 ? 0.0 : double(matched) / double(tokens); }
};

/// Mean of the lexicon vectors of matched words; zero vector when nothing
/// matches. With `multiword`, longer concepts are tried first, greedily.
AffectFeatures utterance_affect(const Utterance& utt, const SenticLexicon& lex,
                                bool multiword = false);

enum class FusionKind { none, concat, blend };

struct FusionSpec {
  FusionKind kind = FusionKind::none;
  std::optional<double> alpha;

  /// "none", "concat" or "blend:<alpha>".
  static FusionSpec parse(std::string_view text);
  std::string to_string() const;
  /// Width of the fused vector for encoder width d.
  std::size_t output_dim(std::size_t d) const;
};

/// none: e_ctx. concat: [e_ctx | e_sentic]. blend: (1-a) e_ctx + a P e_sentic,
/// where P (d x 4) is required and owned by the model.
Eigen::VectorXd fuse(const Eigen::VectorXd& e_ctx, const AffectVector& e_sentic,
                     const FusionSpec& spec, const Eigen::MatrixXd* projection = nullptr);

}  // namespace erc
