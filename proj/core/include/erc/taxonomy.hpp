// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace erc {

enum class Emotion { angry, happy, sad, neutral, excited, frustrated };

enum class Taxonomy { four_way, six_way };

std::string_view to_string(Emotion e);
std::string_view to_string(Taxonomy t);

std::optional<Emotion> parse_emotion(std::string_view name);
/// Accepts "4way"/"6way" (also "4-way", "four_way" spellings).
Taxonomy parse_taxonomy(std::string_view name);

/// Class order used for logits, confusion matrices and CSV columns.
std::span<const Emotion> classes(Taxonomy t);
std::size_t class_count(Taxonomy t);
/// Index of `e` within classes(t), or nullopt when the taxonomy lacks it.
std::optional<std::size_t> class_index(Taxonomy t, Emotion e);

}  // namespace erc
