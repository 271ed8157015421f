// SPDX-License-Identifier: Apache-2.0
#include "erc/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "erc/error.hpp"
#include "erc/log.hpp"

namespace erc {
namespace {

using nlohmann::json;

std::optional<Emotion> read_label(const json& u, const char* field, Taxonomy taxonomy,
                                  const std::string& dialogue_id) {
  auto it = u.find(field);
  if (it == u.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ValidationError(std::string(field) + " must be a string or null", dialogue_id);
  auto e = parse_emotion(it->get<std::string>());
  if (!e || !class_index(taxonomy, *e))
    throw ValidationError(std::string(field) + " value '" + it->get<std::string>() +
                              "' is not in the " + std::string(to_string(taxonomy)) + " label set",
                          dialogue_id);
  return e;
}

Dialogue dialogue_from_json(const json& j) {
  Dialogue d;
  d.dialogue_id = j.at("dialogue_id").get<std::string>();
  d.session = j.at("session").get<int>();
  for (const auto& u : j.at("utterances")) {
    Utterance utt;
    utt.utt_id = u.at("utt_id").get<std::string>();
    const auto turn = u.at("turn_index").get<long long>();
    if (turn < 0) throw ValidationError("negative turn_index in " + utt.utt_id, d.dialogue_id);
    utt.turn_index = static_cast<std::size_t>(turn);
    utt.speaker = u.at("speaker").get<std::string>();
    utt.text = u.at("text").get<std::string>();
    utt.sentences = u.at("sentences").get<std::vector<std::string>>();
    utt.label4 = read_label(u, "label4", Taxonomy::four_way, d.dialogue_id);
    utt.label6 = read_label(u, "label6", Taxonomy::six_way, d.dialogue_id);
    d.utterances.push_back(std::move(utt));
  }
  return d;
}

json label_json(const std::optional<Emotion>& e) {
  if (!e) return nullptr;
  return std::string(to_string(*e));
}

Distribution distribution_of(std::vector<std::size_t> values) {
  Distribution d;
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  d.count = values.size();
  d.min = values.front();
  d.max = values.back();
  double sum = 0.0;
  for (auto v : values) sum += double(v);
  d.mean = sum / double(values.size());
  const auto n = values.size();
  d.median = n % 2 ? double(values[n / 2]) : 0.5 * double(values[n / 2 - 1] + values[n / 2]);
  // Linear interpolation between order statistics.
  const double pos = 0.95 * double(n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, n - 1);
  d.p95 = double(values[lo]) + (pos - double(lo)) * double(values[hi] - values[lo]);
  std::map<std::size_t, std::size_t> hist;
  for (auto v : values) ++hist[v];
  d.histogram.assign(hist.begin(), hist.end());
  return d;
}

}  // namespace

Corpus::Corpus(std::vector<Dialogue> dialogues) : dialogues_(std::move(dialogues)) {
  std::unordered_set<std::string> utt_ids;
  std::unordered_set<std::string> dialogue_ids;
  for (const auto& d : dialogues_) {
    if (d.dialogue_id.empty()) throw ValidationError("empty dialogue_id", "");
    if (!dialogue_ids.insert(d.dialogue_id).second)
      throw ValidationError("duplicate dialogue_id", d.dialogue_id);
    if (d.session < 1 || d.session > 5)
      throw ValidationError("session must be in 1..5, got " + std::to_string(d.session), d.dialogue_id);
    if (d.utterances.empty()) throw ValidationError("dialogue has no utterances", d.dialogue_id);
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
      const auto& u = d.utterances[i];
      if (u.turn_index != i)
        throw ValidationError("turn_index sequence broken at position " + std::to_string(i) +
                                  " (found " + std::to_string(u.turn_index) + ")",
                              d.dialogue_id);
      if (u.utt_id.empty()) throw ValidationError("empty utt_id", d.dialogue_id);
      if (!utt_ids.insert(u.utt_id).second)
        throw ValidationError("duplicate utt_id '" + u.utt_id + "'", d.dialogue_id);
      if (u.sentences.empty())
        throw ValidationError("utterance '" + u.utt_id + "' has no sentences", d.dialogue_id);
      if (u.label4 && !class_index(Taxonomy::four_way, *u.label4))
        throw ValidationError("label4 of '" + u.utt_id + "' outside the 4-way set", d.dialogue_id);
    }
    k_max_ = std::max(k_max_, d.utterances.size());
  }
}

std::size_t Corpus::utterance_count() const {
  std::size_t n = 0;
  for (const auto& d : dialogues_) n += d.utterances.size();
  return n;
}

std::size_t Corpus::labeled_count(Taxonomy t) const {
  std::size_t n = 0;
  for (const auto& d : dialogues_)
    for (const auto& u : d.utterances) n += u.label(t).has_value();
  return n;
}

std::set<int> Corpus::sessions() const {
  std::set<int> s;
  for (const auto& d : dialogues_) s.insert(d.session);
  return s;
}

Corpus parse_corpus(std::istream& in) {
  std::vector<Dialogue> dialogues;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      dialogues.push_back(dialogue_from_json(j));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed dialogue record: ") + e.what(), line_no);
    }
  }
  if (dialogues.empty()) log::warn("corpus contains no dialogues");
  return Corpus(std::move(dialogues));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& d : corpus.dialogues()) {
    json j;
    j["dialogue_id"] = d.dialogue_id;
    j["session"] = d.session;
    j["utterances"] = json::array();
    for (const auto& u : d.utterances) {
      j["utterances"].push_back({{"utt_id", u.utt_id},
                                 {"turn_index", u.turn_index},
                                 {"speaker", u.speaker},
                                 {"text", u.text},
                                 {"sentences", u.sentences},
                                 {"label4", label_json(u.label4)},
                                 {"label6", label_json(u.label6)}});
    }
    out << j.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_corpus(out, corpus);
}

SplitSpec SplitSpec::standard() { return SplitSpec{{2, 3, 4}, {1}, {5}}; }

SplitSpec SplitSpec::parse(std::string_view text) {
  std::vector<std::set<int>> parts(1);
  std::size_t i = 0;
  while (i <= text.size()) {
    const auto j = text.find_first_of(",/", i);
    const auto piece = text.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    if (!piece.empty()) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
      if (ec != std::errc{} || ptr != piece.data() + piece.size())
        throw SpecError("bad session id '" + std::string(piece) + "' in split spec");
      parts.back().insert(v);
    }
    if (j == std::string_view::npos) break;
    if (text[j] == '/') parts.emplace_back();
    i = j + 1;
  }
  if (parts.size() != 3) throw SpecError("split spec must look like train/val/test, e.g. 2,3,4/1/5");
  return SplitSpec{parts[0], parts[1], parts[2]};
}

std::string SplitSpec::to_string() const {
  auto join = [](const std::set<int>& s) {
    std::string out;
    for (int v : s) {
      if (!out.empty()) out += ',';
      out += std::to_string(v);
    }
    return out;
  };
  return join(train_sessions) + "/" + join(val_sessions) + "/" + join(test_sessions);
}

Splits make_splits(const Corpus& corpus, const SplitSpec& spec) {
  auto check_disjoint = [](const std::set<int>& a, const std::set<int>& b, const char* what) {
    for (int s : a)
      if (b.count(s)) throw SpecError(std::string("split sets overlap (") + what + ") on session " + std::to_string(s));
  };
  check_disjoint(spec.train_sessions, spec.val_sessions, "train/val");
  check_disjoint(spec.train_sessions, spec.test_sessions, "train/test");
  check_disjoint(spec.val_sessions, spec.test_sessions, "val/test");
  if (spec.train_sessions.empty() && spec.val_sessions.empty() && spec.test_sessions.empty())
    throw SpecError("split spec names no sessions");

  const auto present = corpus.sessions();
  for (const auto* set : {&spec.train_sessions, &spec.val_sessions, &spec.test_sessions})
    for (int s : *set)
      if (!present.count(s)) log::warn("split references session " + std::to_string(s) + " absent from corpus");

  std::vector<Dialogue> train, val, test;
  for (const auto& d : corpus.dialogues()) {
    if (spec.train_sessions.count(d.session)) train.push_back(d);
    else if (spec.val_sessions.count(d.session)) val.push_back(d);
    else if (spec.test_sessions.count(d.session)) test.push_back(d);
  }
  return Splits{Corpus(std::move(train)), Corpus(std::move(val)), Corpus(std::move(test))};
}

ContextWindow::ContextWindow(const Dialogue& dialogue, std::size_t target, std::size_t k_requested)
    : dialogue_(&dialogue),
      target_(target),
      first_(target - std::min(k_requested, target)),
      k_requested_(k_requested) {}

std::span<const Utterance> ContextWindow::turns() const {
  return std::span<const Utterance>(dialogue_->utterances).subspan(first_, target_ - first_ + 1);
}

std::vector<ContextWindow> build_context_windows(const Corpus& corpus, std::size_t k,
                                                 Taxonomy taxonomy) {
  std::vector<ContextWindow> windows;
  for (const auto& d : corpus.dialogues())
    for (std::size_t i = 0; i < d.utterances.size(); ++i)
      if (d.utterances[i].label(taxonomy)) windows.emplace_back(d, i, k);
  return windows;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.dialogues = corpus.size();
  s.utterances = corpus.utterance_count();
  s.labeled4 = corpus.labeled_count(Taxonomy::four_way);
  s.labeled6 = corpus.labeled_count(Taxonomy::six_way);
  std::vector<std::size_t> lengths, sentences;
  std::map<Emotion, std::size_t> c4, c6;
  for (const auto& d : corpus.dialogues()) {
    lengths.push_back(d.utterances.size());
    for (const auto& u : d.utterances) {
      sentences.push_back(u.sentences.size());
      if (u.label4) ++c4[*u.label4];
      if (u.label6) ++c6[*u.label6];
    }
  }
  s.dialogue_lengths = distribution_of(std::move(lengths));
  s.sentences_per_utterance = distribution_of(std::move(sentences));
  for (Emotion e : classes(Taxonomy::four_way)) s.label4_counts.emplace_back(e, c4[e]);
  for (Emotion e : classes(Taxonomy::six_way)) s.label6_counts.emplace_back(e, c6[e]);
  return s;
}

}  // namespace erc
