// SPDX-License-Identifier: Apache-2.0
#include "erc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "erc/error.hpp"
#include "erc/nn/rng.hpp"

namespace erc::synth {
namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

std::string filler_text(nn::Rng& rng, std::size_t tokens) {
  std::string text;
  for (std::size_t t = 0; t < tokens; ++t) {
    if (!text.empty()) text.push_back(' ');
    text += numbered("w", static_cast<std::size_t>(rng.below(50)), 1);
  }
  return text;
}

Utterance make_utterance(const std::string& dialogue_id, std::size_t turn, std::string text) {
  Utterance u;
  u.utt_id = dialogue_id + "_" + numbered("t", turn, 3);
  u.turn_index = turn;
  u.speaker = turn % 2 == 0 ? "A" : "B";
  u.sentences = {text};
  u.text = std::move(text);
  return u;
}

void set_label(Utterance& u, Emotion e) {
  u.label4 = e;
  u.label6 = e;
}

using SignalTable = std::unordered_map<std::string, Eigen::VectorXd>;

SyntheticData finish(std::vector<Dialogue> dialogues, std::uint32_t dim, std::uint64_t seed,
                     SignalTable signals, SignalPlacement placement) {
  SyntheticData out;
  out.corpus = Corpus(std::move(dialogues));
  SignalFn fn = [table = std::move(signals)](const Utterance& u) -> std::optional<Eigen::VectorXd> {
    const auto it = table.find(u.utt_id);
    if (it == table.end()) return std::nullopt;
    return it->second;
  };
  out.store = synth_store(out.corpus, dim, seed, fn, placement);
  return out;
}

}  // namespace

Eigen::VectorXd basis_direction(std::uint32_t dim, std::size_t axis) {
  if (axis >= dim) throw DomainError("basis axis " + std::to_string(axis) + " exceeds dim");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v[Eigen::Index(axis)] = 1.0;
  return v;
}

SyntheticData make_context_corpus(const ContextCorpusSpec& spec) {
  if (spec.dim < 4) throw DomainError("context corpus needs dim >= 4");
  if (spec.min_turns == 0 || spec.max_turns < spec.min_turns) throw DomainError("bad turn range");
  if (spec.threshold == 0 || spec.threshold > spec.window) throw DomainError("threshold must lie in 1..window");
  if (!(spec.visible_share >= 0.0 && spec.visible_share <= 1.0)) throw DomainError("visible_share must lie in [0, 1]");
  nn::Rng rng(spec.seed, "synth/context");
  std::vector<Dialogue> dialogues;
  SignalTable signals;
  for (std::size_t d = 0; d < spec.dialogues; ++d) {
    Dialogue dia;
    dia.dialogue_id = numbered("ctx_d", d, 4);
    dia.session = int(d % 5) + 1;
    const std::size_t n = spec.min_turns + rng.below(spec.max_turns - spec.min_turns + 1);
    std::vector<bool> cues;
    for (std::size_t t = 0; t < n; ++t) {
      const bool cue = rng.uniform() < spec.cue_probability;
      const double visible = rng.uniform();
      Utterance u = make_utterance(dia.dialogue_id, t, filler_text(rng, 3 + rng.below(4)));
      Eigen::VectorXd signal = Eigen::VectorXd::Zero(spec.dim);
      if (visible < spec.visible_share / 2) {
        set_label(u, Emotion::angry);
        signal += spec.class_strength * basis_direction(spec.dim, 0);
      } else if (visible < spec.visible_share) {
        set_label(u, Emotion::happy);
        signal += spec.class_strength * basis_direction(spec.dim, 1);
      } else {
        std::size_t count = 0;
        for (std::size_t back = 1; back <= spec.window && back <= t; ++back) count += cues[t - back];
        set_label(u, count >= spec.threshold ? Emotion::sad : Emotion::neutral);
      }
      if (cue) signal += spec.cue_strength * basis_direction(spec.dim, 2);
      cues.push_back(cue);
      signals.emplace(u.utt_id, std::move(signal));
      dia.utterances.push_back(std::move(u));
    }
    dialogues.push_back(std::move(dia));
  }
  return finish(std::move(dialogues), spec.dim, spec.seed, std::move(signals), SignalPlacement::all_tokens);
}

SyntheticData make_separable_corpus(const SeparableCorpusSpec& spec) {
  const auto cls = classes(spec.taxonomy);
  if (spec.dim < std::max<std::size_t>(4, cls.size())) throw DomainError("dim too small for the taxonomy");
  nn::Rng rng(spec.seed, "synth/separable");
  std::vector<Dialogue> dialogues;
  SignalTable signals;
  for (std::size_t d = 0; d < spec.dialogues; ++d) {
    Dialogue dia;
    dia.dialogue_id = numbered("sep_d", d, 4);
    dia.session = int(d % 5) + 1;
    for (std::size_t t = 0; t < spec.turns; ++t) {
      Utterance u = make_utterance(dia.dialogue_id, t, filler_text(rng, 3 + rng.below(4)));
      const std::size_t c = rng.below(cls.size());
      u.label4.reset();
      u.label6.reset();
      if (class_index(Taxonomy::four_way, cls[c])) u.label4 = cls[c];
      if (class_index(Taxonomy::six_way, cls[c])) u.label6 = cls[c];
      signals.emplace(u.utt_id, spec.strength * basis_direction(spec.dim, c));
      dia.utterances.push_back(std::move(u));
    }
    dialogues.push_back(std::move(dia));
  }
  return finish(std::move(dialogues), spec.dim, spec.seed, std::move(signals), SignalPlacement::all_tokens);
}

SyntheticData make_positional_corpus(const PositionalCorpusSpec& spec) {
  if (spec.min_tokens == 0 || spec.max_tokens < spec.min_tokens) throw DomainError("bad token range");
  const auto cls = classes(Taxonomy::four_way);
  if (spec.dim < cls.size()) throw DomainError("dim too small for the taxonomy");
  nn::Rng rng(spec.seed, "synth/positional");
  std::vector<Dialogue> dialogues;
  SignalTable signals;
  for (std::size_t d = 0; d < spec.dialogues; ++d) {
    Dialogue dia;
    dia.dialogue_id = numbered("pos_d", d, 4);
    dia.session = int(d % 5) + 1;
    for (std::size_t t = 0; t < spec.turns; ++t) {
      const std::size_t n = spec.min_tokens + rng.below(spec.max_tokens - spec.min_tokens + 1);
      Utterance u = make_utterance(dia.dialogue_id, t, filler_text(rng, n));
      const std::size_t c = rng.below(cls.size());
      set_label(u, cls[c]);
      signals.emplace(u.utt_id, spec.strength * basis_direction(spec.dim, c));
      dia.utterances.push_back(std::move(u));
    }
    dialogues.push_back(std::move(dia));
  }
  return finish(std::move(dialogues), spec.dim, spec.seed, std::move(signals), spec.placement);
}

Corpus make_marker_corpus(const MarkerCorpusSpec& spec) {
  if (spec.tokens < 3) throw DomainError("marker utterances need at least three tokens");
  static const std::vector<std::vector<std::string>> kMarkers{
      {"well"}, {"so"}, {"you", "know"}, {"but"}, {"oh"}, {"i", "mean"}};
  struct Item {
    Emotion emotion;
    std::string text;
  };
  std::vector<Item> items;
  for (Emotion e : classes(Taxonomy::four_way)) {
    for (std::size_t i = 0; i < spec.occurrences_per_emotion; ++i) {
      const auto& marker = kMarkers[i % kMarkers.size()];
      const std::size_t slot = spec.medial_emotion == e ? 1 : i % 3;
      const std::size_t start = slot == 0 ? 0 : slot == 1 ? spec.tokens / 2 : spec.tokens - marker.size();
      std::vector<std::string> words(spec.tokens, "");
      for (std::size_t w = 0; w < spec.tokens; ++w) words[w] = numbered("x", w, 1);
      for (std::size_t m = 0; m < marker.size(); ++m) words[start + m] = marker[m];
      std::string text;
      for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
      items.push_back({e, text});
    }
  }
  nn::Rng rng(spec.seed, "synth/markers");
  rng.shuffle(std::span<Item>(items));
  std::vector<Dialogue> dialogues;
  constexpr std::size_t kTurns = 10;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i % kTurns == 0) {
      Dialogue dia;
      dia.dialogue_id = numbered("dm_d", dialogues.size(), 4);
      dia.session = int(dialogues.size() % 5) + 1;
      dialogues.push_back(std::move(dia));
    }
    auto& dia = dialogues.back();
    Utterance u = make_utterance(dia.dialogue_id, dia.utterances.size(), items[i].text);
    set_label(u, items[i].emotion);
    dia.utterances.push_back(std::move(u));
  }
  return Corpus(std::move(dialogues));
}

}  // namespace erc::synth
