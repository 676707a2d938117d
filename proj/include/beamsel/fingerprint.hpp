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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "beamsel/beam_select.hpp"

namespace beamsel {

struct BeamDataset;

/// Inverse fingerprinting database: per position bin, beam pairs ranked by how often they were
/// optimal there.
struct FingerprintDatabase {
  struct Entry {
    int flat = 0;  // f * num_w + w
    int count = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  int num_x = 1;
  int num_y = 1;
  int num_f = 1;
  int num_w = 1;
  /// Key: bin_x * num_y + bin_y. Entries sorted by count desc, then flat index asc.
  std::map<int, std::vector<Entry>> bins;
  /// Whole-training-set ranking used to pad short or missing bins.
  std::vector<Entry> global;

  int bin_key(int bin_x, int bin_y) const { return bin_x * num_y + bin_y; }
};

/// Throws std::invalid_argument on an empty training set.
FingerprintDatabase fingerprint_train(const BeamDataset& train);

/// The bin's own ranking; empty for a bin without training samples.
const std::vector<FingerprintDatabase::Entry>& fingerprint_ranking(const FingerprintDatabase& db,
                                                                   int bin_x, int bin_y);

/// First n_b pairs of the bin ranking, padded with the global ranking and finally with unseen
/// pairs in index order. Scores are bin frequencies; padded entries score with their global
/// frequency for an empty bin and zero otherwise.
CandidateList fingerprint_top_n(const FingerprintDatabase& db, int bin_x, int bin_y, int n_b);

void save_fingerprint(std::ostream& out, const FingerprintDatabase& db);
FingerprintDatabase load_fingerprint(std::istream& in);

}  // namespace beamsel
