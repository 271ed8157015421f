// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "erc/error.hpp"

namespace erc::detail {

// Explicit little-endian encoding, independent of host byte order.

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> buf{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    buf[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

template <typename UInt>
UInt get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(UInt)> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (in.gcount() != static_cast<std::streamsize>(buf.size()))
    throw FormatError(std::string("truncated input while reading ") + what);
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= static_cast<UInt>(buf[i]) << (8 * i);
  return value;
}

inline void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
inline float get_f32(std::istream& in, const char* what) {
  return std::bit_cast<float>(get_le<std::uint32_t>(in, what));
}
inline double get_f64(std::istream& in, const char* what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in, what));
}

inline void put_string16(std::ostream& out, const std::string& s) {
  if (s.size() > 0xFFFF) throw FormatError("string too long for u16 length prefix");
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string16(std::istream& in, const char* what) {
  const auto len = get_le<std::uint16_t>(in, what);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (in.gcount() != static_cast<std::streamsize>(len))
    throw FormatError(std::string("truncated input while reading ") + what);
  return s;
}

}  // namespace erc::detail
