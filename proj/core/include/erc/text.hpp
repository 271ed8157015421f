// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace erc {

/// Lowercases, splits on whitespace and strips leading/trailing punctuation
/// from each token. Internal apostrophes survive ("it's"); empty tokens are
/// dropped. Only ASCII letters are case-folded.
std::vector<std::string> tokenize(std::string_view text);

/// Number of whitespace-separated pieces, without punctuation handling.
std::size_t whitespace_token_count(std::string_view text);

}  // namespace erc
