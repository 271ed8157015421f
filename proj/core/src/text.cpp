// SPDX-License-Identifier: Apache-2.0
#include "erc/text.hpp"

#include <array>
#include <cctype>

namespace erc {
namespace {

bool is_space(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }

// Multi-byte punctuation commonly found in transcripts: curly quotes,
// dashes, ellipsis.
constexpr std::array<std::string_view, 7> kUtf8Punct{
    "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x9C", "\xE2\x80\x9D",
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\xA6"};

std::size_t leading_punct(std::string_view s) {
  if (s.empty()) return 0;
  if (std::ispunct(static_cast<unsigned char>(s.front()))) return 1;
  for (auto p : kUtf8Punct)
    if (s.starts_with(p)) return p.size();
  return 0;
}

std::size_t trailing_punct(std::string_view s) {
  if (s.empty()) return 0;
  if (std::ispunct(static_cast<unsigned char>(s.back()))) return 1;
  for (auto p : kUtf8Punct)
    if (s.ends_with(p)) return p.size();
  return 0;
}

std::string normalize(std::string_view piece) {
  while (auto n = leading_punct(piece)) piece.remove_prefix(n);
  while (auto n = trailing_punct(piece)) piece.remove_suffix(n);
  std::string out;
  out.reserve(piece.size());
  for (std::size_t i = 0; i < piece.size(); ++i) {
    // Right single quotation mark used as an apostrophe.
    if (piece.substr(i).starts_with("\xE2\x80\x99")) {
      out.push_back('\'');
      i += 2;
      continue;
    }
    const auto c = static_cast<unsigned char>(piece[i]);
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto token = normalize(text.substr(i, j - i));
      if (!token.empty()) tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

std::size_t whitespace_token_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

}  // namespace erc
