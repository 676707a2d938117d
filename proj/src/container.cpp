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

#include "beamsel/container.hpp"

#include <istream>
#include <ostream>

#include "beamsel/binary_io.hpp"
#include "beamsel/errors.hpp"

namespace beamsel {

namespace {
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxPayload = 1ULL << 34;
}  // namespace

void write_container(std::ostream& out, ContainerType type, const std::string& payload) {
  out.write("BSEL", 4);
  binio::put<std::uint32_t>(out, kVersion);
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(type));
  binio::put<std::uint64_t>(out, payload.size());
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  binio::put<std::uint64_t>(out, binio::fnv1a64(payload));
}

std::string read_container(std::istream& in, ContainerType expected) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "BSEL") {
    throw FormatError("model file: bad magic");
  }
  const auto version = binio::get<std::uint32_t>(in);
  if (version != kVersion) {
    throw FormatError("model file: unsupported version " + std::to_string(version));
  }
  const auto tag = binio::get<std::uint32_t>(in);
  if (tag != static_cast<std::uint32_t>(expected)) {
    throw FormatError("model file: type tag " + std::to_string(tag) + ", expected " +
                      std::to_string(static_cast<std::uint32_t>(expected)));
  }
  const auto size = binio::get<std::uint64_t>(in);
  if (size > kMaxPayload) throw FormatError("model file: payload too large");
  std::string payload(size, '\0');
  if (!in.read(payload.data(), static_cast<std::streamsize>(size))) {
    throw FormatError("model file: truncated payload");
  }
  if (binio::get<std::uint64_t>(in) != binio::fnv1a64(payload)) {
    throw FormatError("model file: checksum mismatch");
  }
  return payload;
}

ContainerType peek_container_type(std::istream& in) {
  const auto pos = in.tellg();
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "BSEL") {
    throw FormatError("model file: bad magic");
  }
  binio::get<std::uint32_t>(in);
  const auto tag = binio::get<std::uint32_t>(in);
  in.seekg(pos);
  return static_cast<ContainerType>(tag);
}

}  // namespace beamsel
