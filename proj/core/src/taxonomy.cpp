// SPDX-License-Identifier: Apache-2.0
#include "erc/taxonomy.hpp"

#include <algorithm>
#include <array>

#include "erc/error.hpp"

namespace erc {
namespace {

constexpr std::array<Emotion, 4> kFourWay{Emotion::angry, Emotion::happy, Emotion::sad,
                                          Emotion::neutral};
constexpr std::array<Emotion, 6> kSixWay{Emotion::angry,   Emotion::happy,   Emotion::sad,
                                         Emotion::neutral, Emotion::excited, Emotion::frustrated};

}  // namespace

std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::angry: return "angry";
    case Emotion::happy: return "happy";
    case Emotion::sad: return "sad";
    case Emotion::neutral: return "neutral";
    case Emotion::excited: return "excited";
    case Emotion::frustrated: return "frustrated";
  }
  return "?";
}

std::string_view to_string(Taxonomy t) { return t == Taxonomy::four_way ? "4way" : "6way"; }

std::optional<Emotion> parse_emotion(std::string_view name) {
  for (Emotion e : kSixWay)
    if (to_string(e) == name) return e;
  return std::nullopt;
}

Taxonomy parse_taxonomy(std::string_view name) {
  if (name == "4way" || name == "4-way" || name == "four_way") return Taxonomy::four_way;
  if (name == "6way" || name == "6-way" || name == "six_way") return Taxonomy::six_way;
  throw SpecError("unknown taxonomy '" + std::string(name) + "' (expected 4way or 6way)");
}

std::span<const Emotion> classes(Taxonomy t) {
  if (t == Taxonomy::four_way) return kFourWay;
  return kSixWay;
}

std::size_t class_count(Taxonomy t) { return classes(t).size(); }

std::optional<std::size_t> class_index(Taxonomy t, Emotion e) {
  auto cs = classes(t);
  auto it = std::find(cs.begin(), cs.end(), e);
  if (it == cs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - cs.begin());
}

}  // namespace erc
