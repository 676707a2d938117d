// SPDX-License-Identifier: Apache-2.0
//
// beamsel: position-aided probabilistic beam selection for mmWave MIMO
// Copyright (C) 2026 The beamsel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "beamsel/errors.hpp"

namespace beamsel::binio {

// All multi-byte values are little-endian on disk.

inline void put_bytes_le(std::ostream& out, const void* src, std::size_t n) {
  unsigned char buf[8];
  std::memcpy(buf, src, n);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < n / 2; ++i) std::swap(buf[i], buf[n - 1 - i]);
  }
  out.write(reinterpret_cast<const char*>(buf), static_cast<std::streamsize>(n));
}

inline void get_bytes_le(std::istream& in, void* dst, std::size_t n) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n))) {
    throw FormatError("unexpected end of binary stream");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < n / 2; ++i) std::swap(buf[i], buf[n - 1 - i]);
  }
  std::memcpy(dst, buf, n);
}

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::is_arithmetic_v<T>);
  put_bytes_le(out, &v, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  static_assert(std::is_arithmetic_v<T>);
  T v{};
  get_bytes_le(in, &v, sizeof(T));
  return v;
}

inline void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& in, std::size_t max_len = 1 << 20) {
  const auto n = get<std::uint32_t>(in);
  if (n > max_len) throw FormatError("string length out of range");
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw FormatError("unexpected end of binary stream");
  return s;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace beamsel::binio
