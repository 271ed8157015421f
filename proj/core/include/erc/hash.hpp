// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace erc {

/// 64-bit FNV-1a. Used for provenance hashes and PRNG stream labels, not for
/// anything security related.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string to_hex(std::uint64_t value);

/// Hex FNV-1a digest of a file's bytes.
std::string file_fingerprint(const std::filesystem::path& path);

}  // namespace erc
