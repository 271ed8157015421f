// SPDX-License-Identifier: Apache-2.0
#include "erc/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "erc/error.hpp"
#include "erc/log.hpp"
#include "erc/text.hpp"

namespace erc {
namespace {

std::string normalize_concept(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char ch : raw) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '_') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

std::size_t word_count(std::string_view s) {
  if (s.empty()) return 0;
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), ' ')) + 1;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void SenticLexicon::insert(std::string concept_name, const AffectVector& values) {
  std::string key = normalize_concept(concept_name);
  if (key.empty()) throw ValidationError("empty concept", "lexicon");
  for (double v : values)
    if (!std::isfinite(v) || v < -1.0 || v > 1.0)
      throw RangeError("affect value " + std::to_string(v) + " for '" + key + "' outside [-1, 1]");
  max_words_ = std::max(max_words_, word_count(key));
  entries_[std::move(key)] = values;
}

const AffectVector* SenticLexicon::find(std::string_view concept_name) const {
  auto it = entries_.find(concept_name);
  if (it == entries_.end()) it = entries_.find(normalize_concept(concept_name));
  return it == entries_.end() ? nullptr : &it->second;
}

SenticLexicon parse_lexicon(std::istream& in) {
  SenticLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw ParseError("expected 5 tab-separated fields, got " + std::to_string(fields.size()), line_no);
    AffectVector values{};
    for (std::size_t i = 0; i < 4; ++i) {
      std::string_view f = fields[i + 1];
      while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
      while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ParseError("malformed number '" + std::string(f) + "'", line_no);
    }
    const std::string key = normalize_concept(fields[0]);
    if (key.empty()) throw ParseError("empty concept", line_no);
    if (lex.find(key) != nullptr)
      log::warn("lexicon line " + std::to_string(line_no) + ": duplicate concept '" + key +
                "', keeping the later entry");
    try {
      lex.insert(key, values);
    } catch (const RangeError& e) {
      throw RangeError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lex;
}

SenticLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path.string() + "'");
  return parse_lexicon(in);
}

AffectFeatures utterance_affect(const Utterance& utt, const SenticLexicon& lex, bool multiword) {
  const auto tokens = tokenize(utt.text);
  AffectFeatures out;
  out.tokens = tokens.size();
  const std::size_t longest = multiword ? std::max<std::size_t>(1, lex.max_words()) : 1;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t consumed = 0;
    for (std::size_t len = std::min(longest, tokens.size() - i); len >= 1; --len) {
      std::string phrase = tokens[i];
      for (std::size_t j = 1; j < len; ++j) phrase += ' ' + tokens[i + j];
      if (const auto* v = lex.find(phrase)) {
        for (std::size_t d = 0; d < 4; ++d) out.values[d] += (*v)[d];
        ++hits;
        consumed = len;
        break;
      }
    }
    if (consumed == 0) {
      ++i;
    } else {
      out.matched += consumed;
      i += consumed;
    }
  }
  if (hits > 0)
    for (double& v : out.values) v /= double(hits);
  return out;
}

FusionSpec FusionSpec::parse(std::string_view text) {
  FusionSpec spec;
  if (text == "none") return spec;
  if (text == "concat") {
    spec.kind = FusionKind::concat;
    return spec;
  }
  constexpr std::string_view prefix = "blend:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view num = text.substr(prefix.size());
    double alpha = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), alpha);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
      throw SpecError("malformed blend weight '" + std::string(num) + "'");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw SpecError("blend weight must lie in [0, 1]");
    spec.kind = FusionKind::blend;
    spec.alpha = alpha;
    return spec;
  }
  throw SpecError("unknown fusion '" + std::string(text) + "' (none, concat, blend:<alpha>)");
}

std::string FusionSpec::to_string() const {
  switch (kind) {
    case FusionKind::none: return "none";
    case FusionKind::concat: return "concat";
    case FusionKind::blend: {
      std::ostringstream os;
      os << "blend:" << alpha.value_or(0.0);
      return os.str();
    }
  }
  return "none";
}

std::size_t FusionSpec::output_dim(std::size_t d) const {
  return kind == FusionKind::concat ? d + 4 : d;
}

Eigen::VectorXd fuse(const Eigen::VectorXd& e_ctx, const AffectVector& e_sentic, const FusionSpec& spec,
                     const Eigen::MatrixXd* projection) {
  switch (spec.kind) {
    case FusionKind::none: return e_ctx;
    case FusionKind::concat: {
      Eigen::VectorXd out(e_ctx.size() + 4);
      out.head(e_ctx.size()) = e_ctx;
      for (int i = 0; i < 4; ++i) out[e_ctx.size() + i] = e_sentic[std::size_t(i)];
      return out;
    }
    case FusionKind::blend: {
      if (!spec.alpha) throw SpecError("blend fusion requires alpha");
      if (projection == nullptr || projection->rows() != e_ctx.size() || projection->cols() != 4)
        throw ShapeError("blend projection must be " + std::to_string(e_ctx.size()) + " x 4");
      const double a = *spec.alpha;
      const Eigen::Vector4d s(e_sentic[0], e_sentic[1], e_sentic[2], e_sentic[3]);
      if (a == 0.0) return e_ctx;
      return (1.0 - a) * e_ctx + a * (*projection * s);
    }
  }
  return e_ctx;
}

}  // namespace erc
