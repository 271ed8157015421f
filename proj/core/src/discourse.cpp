// SPDX-License-Identifier: Apache-2.0
#include "erc/discourse.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <tuple>

#include "erc/error.hpp"

namespace erc {
namespace {

std::string normalize_marker(std::string_view raw) {
  std::string out;
  for (const auto& tok : tokenize(raw)) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

std::size_t periphery_index(Periphery p) { return static_cast<std::size_t>(p); }

/// Drops all-zero columns; nullopt when fewer than two rows or columns remain.
std::optional<std::vector<std::vector<double>>> compact_table(
    const std::vector<std::array<std::size_t, 3>>& rows) {
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < 3; ++c) {
    std::size_t total = 0;
    for (const auto& r : rows) total += r[c];
    if (total > 0) keep.push_back(c);
  }
  if (rows.size() < 2 || keep.size() < 2) return std::nullopt;
  std::vector<std::vector<double>> table;
  for (const auto& r : rows) {
    std::vector<double> row;
    for (std::size_t c : keep) row.push_back(double(r[c]));
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace

MarkerInventory::MarkerInventory(std::vector<std::pair<std::string, std::string>> entries) {
  for (auto& [marker, category] : entries) {
    const std::string key = normalize_marker(marker);
    if (key.empty()) throw ValidationError("empty marker", "inventory");
    const auto words = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
    if (words > 2) throw ValidationError("marker '" + key + "' is longer than two words", "inventory");
    if (find(key) != nullptr) throw ValidationError("duplicate marker '" + key + "'", "inventory");
    entries_.push_back({key, category, words});
    max_words_ = std::max(max_words_, words);
  }
}

MarkerInventory MarkerInventory::standard() {
  return MarkerInventory({{"and", "Elaborative"},
                          {"so", "Inferential"},
                          {"like", "Pragmatic particle"},
                          {"but", "Contrastive"},
                          {"well", "Turn-management"},
                          {"oh", "Turn-management"},
                          {"you know", "Intersubjective"},
                          {"i mean", "Intersubjective"},
                          {"maybe", "Epistemic (doubt)"},
                          {"though", "Contrastive"},
                          {"i think", "Epistemic (stance)"},
                          {"probably", "Epistemic (doubt)"},
                          {"i guess", "Epistemic (stance)"},
                          {"yet", "Contrastive"},
                          {"also", "Elaborative"},
                          {"i believe", "Epistemic (stance)"},
                          {"however", "Contrastive"},
                          {"although", "Contrastive"},
                          {"unfortunately", "Attitudinal"},
                          {"therefore", "Inferential"}});
}

const MarkerEntry* MarkerInventory::find(std::string_view phrase) const {
  for (const auto& e : entries_)
    if (e.marker == phrase) return &e;
  return nullptr;
}

MarkerInventory MarkerInventory::subset(const std::set<std::string>& markers) const {
  std::vector<std::pair<std::string, std::string>> kept;
  for (const auto& name : markers)
    if (find(normalize_marker(name)) == nullptr)
      throw ValidationError("unknown marker '" + name + "'", "inventory");
  for (const auto& e : entries_)
    for (const auto& name : markers)
      if (normalize_marker(name) == e.marker) kept.emplace_back(e.marker, e.category);
  return MarkerInventory(std::move(kept));
}

MarkerInventory parse_inventory(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected marker<TAB>category", line_no);
    std::string category = line.substr(tab + 1);
    while (!category.empty() && (category.back() == ' ' || category.back() == '\t')) category.pop_back();
    entries.emplace_back(line.substr(0, tab), category);
  }
  return MarkerInventory(std::move(entries));
}

MarkerInventory load_inventory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open inventory '" + path.string() + "'");
  return parse_inventory(in);
}

std::vector<MarkerMatch> match_markers(std::span<const std::string> tokens, const MarkerInventory& inventory) {
  std::vector<MarkerMatch> out;
  const std::size_t longest = inventory.max_words();
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(longest, tokens.size() - i); len >= 1; --len) {
      std::string phrase = tokens[i];
      for (std::size_t j = 1; j < len; ++j) phrase += ' ' + tokens[i + j];
      if (const auto* e = inventory.find(phrase)) {
        out.push_back({e->marker, i, len});
        matched = len;
        break;
      }
    }
    i += matched == 0 ? 1 : matched;
  }
  return out;
}

std::string_view to_string(Periphery p) {
  switch (p) {
    case Periphery::lp: return "LP";
    case Periphery::medial: return "medial";
    case Periphery::rp: return "RP";
  }
  return "LP";
}

Periphery classify_position(double position) {
  if (position < kLeftPeripheryBound) return Periphery::lp;
  if (position > kRightPeripheryBound) return Periphery::rp;
  return Periphery::medial;
}

PositionInfo position_and_periphery(std::size_t start, std::size_t n_tokens) {
  if (start >= n_tokens)
    throw IndexError("marker start " + std::to_string(start) + " outside an utterance of " +
                     std::to_string(n_tokens) + " tokens");
  PositionInfo info;
  info.position = n_tokens == 1 ? 0.0 : double(start) / double(n_tokens - 1);
  info.periphery = classify_position(info.position);
  return info;
}

double PeripheryRow::share(Periphery p) const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : double(counts[periphery_index(p)]) / double(n);
}

DmReport dm_report(const Corpus& corpus, Taxonomy taxonomy, const MarkerInventory& inventory,
                   const DmOptions& options) {
  DmReport report;
  report.taxonomy = taxonomy;
  std::map<std::string, std::size_t> counts;
  std::optional<MarkerInventory> analysis_inventory;
  if (options.marker_subset) analysis_inventory = inventory.subset(*options.marker_subset);

  for (const auto& d : corpus.dialogues())
    for (const auto& u : d.utterances) {
      ++report.utterances_scanned;
      const auto tokens = tokenize(u.text);
      for (const auto& m : match_markers(tokens, inventory)) ++counts[m.marker];
      const auto label = u.label(taxonomy);
      if (!label) continue;
      ++report.labeled_utterances;
      const auto& inv = analysis_inventory ? *analysis_inventory : inventory;
      for (const auto& m : match_markers(tokens, inv)) {
        if (tokens.size() == 1) {
          ++report.single_token_occurrences;
          if (options.exclude_single_token) continue;
        }
        const auto info = position_and_periphery(m.start, tokens.size());
        MarkerOccurrence occ;
        occ.marker = m.marker;
        occ.category = inv.find(m.marker)->category;
        occ.dialogue_id = d.dialogue_id;
        occ.utt_id = u.utt_id;
        occ.turn_index = u.turn_index;
        occ.emotion = label;
        occ.start = m.start;
        occ.n_tokens = tokens.size();
        occ.position = info.position;
        occ.periphery = info.periphery;
        report.occurrences.push_back(std::move(occ));
      }
    }
  std::stable_sort(report.occurrences.begin(), report.occurrences.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dialogue_id, a.turn_index, a.start) < std::tie(b.dialogue_id, b.turn_index, b.start);
  });

  for (const auto& e : inventory.entries()) {
    const auto it = counts.find(e.marker);
    const std::size_t n = it == counts.end() ? 0 : it->second;
    report.frequencies.push_back({e.marker, e.category, n});
    report.frequency_total += n;
  }

  if (report.occurrences.empty()) {
    report.notices.push_back("no marker occurrences in the analysis set; no tests run");
    return report;
  }

  std::vector<std::vector<double>> positions;
  for (Emotion e : classes(taxonomy)) {
    PeripheryRow row;
    row.emotion = e;
    std::vector<double> pos;
    for (const auto& o : report.occurrences)
      if (o.emotion == e) {
        ++row.counts[periphery_index(o.periphery)];
        pos.push_back(o.position);
      }
    if (row.total() == 0) continue;
    report.periphery.push_back(row);
    positions.push_back(std::move(pos));
  }

  std::vector<std::array<std::size_t, 3>> all_rows;
  for (const auto& r : report.periphery) all_rows.push_back(r.counts);
  if (const auto table = compact_table(all_rows))
    report.association = stats::chi_square_cramers_v(*table);
  else
    report.notices.push_back("association test skipped: fewer than two emotions or periphery classes");

  try {
    report.position_anova = stats::anova_oneway(positions);
  } catch (const DegenerateGroupError& e) {
    report.notices.push_back(std::string("position ANOVA skipped: ") + e.what());
  }

  std::vector<PairwisePeriphery> pairs;
  for (std::size_t i = 0; i < report.periphery.size(); ++i)
    for (std::size_t j = i + 1; j < report.periphery.size(); ++j) {
      const auto table = compact_table({report.periphery[i].counts, report.periphery[j].counts});
      if (!table) continue;
      PairwisePeriphery p;
      p.a = report.periphery[i].emotion;
      p.b = report.periphery[j].emotion;
      p.test = stats::chi_square_cramers_v(*table);
      p.test.test = "chi_square_pairwise_2x3";
      p.raw_p = p.test.p_value;
      pairs.push_back(std::move(p));
    }
  std::vector<double> raw;
  for (const auto& p : pairs) raw.push_back(p.raw_p);
  const auto adjusted = stats::bonferroni(raw);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    pairs[i].test.p_value = adjusted[i];
    pairs[i].test.correction_m = pairs.size();
  }
  report.pairwise = std::move(pairs);
  return report;
}

}  // namespace erc
