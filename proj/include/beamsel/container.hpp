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

#include <cstdint>
#include <iosfwd>
#include <string>

namespace beamsel {

/// Type tags of the versioned model container.
enum class ContainerType : std::uint32_t {
  kCpdPmf = 1,
  kMlp = 2,
  kFingerprint = 3,
};

/// Layout: "BSEL" | u32 version | u32 type tag | u64 payload size | payload | u64 FNV-1a of
/// payload. Integers little-endian.
void write_container(std::ostream& out, ContainerType type, const std::string& payload);

/// Validates magic, version, type and checksum; returns the payload.
std::string read_container(std::istream& in, ContainerType expected);

/// Reads only the header to learn the tag; the stream position is restored.
ContainerType peek_container_type(std::istream& in);

}  // namespace beamsel
