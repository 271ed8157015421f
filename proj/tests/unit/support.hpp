// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "erc/corpus.hpp"
#include "erc/nn/rng.hpp"

namespace erc::test {

/// Dialogue with one utterance per (text, label4) pair.
inline Dialogue make_dialogue(const std::string& id, int session,
                              std::initializer_list<std::pair<std::string, std::optional<Emotion>>> turns) {
  Dialogue d;
  d.dialogue_id = id;
  d.session = session;
  std::size_t t = 0;
  for (const auto& [text, label] : turns) {
    Utterance u;
    u.utt_id = id + "_" + std::to_string(t);
    u.turn_index = t++;
    u.speaker = t % 2 ? "A" : "B";
    u.text = text;
    u.sentences = {text};
    u.label4 = label;
    u.label6 = label;
    d.utterances.push_back(std::move(u));
  }
  return d;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("erclab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<double> random_values(nn::Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace erc::test
