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

#include "beamsel/fingerprint.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "beamsel/binary_io.hpp"
#include "beamsel/container.hpp"
#include "beamsel/scene.hpp"

namespace beamsel {

namespace {

std::vector<FingerprintDatabase::Entry> rank_counts(const std::map<int, int>& counts) {
  std::vector<FingerprintDatabase::Entry> out;
  out.reserve(counts.size());
  for (const auto& [flat, count] : counts) out.push_back({flat, count});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.count > b.count || (a.count == b.count && a.flat < b.flat);
  });
  return out;
}

int total_count(const std::vector<FingerprintDatabase::Entry>& entries) {
  int total = 0;
  for (const auto& e : entries) total += e.count;
  return total;
}

}  // namespace

FingerprintDatabase fingerprint_train(const BeamDataset& train) {
  if (train.samples.empty()) throw std::invalid_argument("fingerprint_train: empty training set");
  FingerprintDatabase db;
  db.num_x = train.grid.num_x;
  db.num_y = train.grid.num_y;
  db.num_f = train.num_f;
  db.num_w = train.num_w;
  std::map<int, std::map<int, int>> per_bin;
  std::map<int, int> global;
  for (const auto& s : train.samples) {
    const int flat = s.optimal.flat(db.num_w);
    ++per_bin[db.bin_key(s.bin_x, s.bin_y)][flat];
    ++global[flat];
  }
  for (const auto& [key, counts] : per_bin) db.bins[key] = rank_counts(counts);
  db.global = rank_counts(global);
  return db;
}

const std::vector<FingerprintDatabase::Entry>& fingerprint_ranking(const FingerprintDatabase& db,
                                                                   int bin_x, int bin_y) {
  static const std::vector<FingerprintDatabase::Entry> kEmpty;
  const auto it = db.bins.find(db.bin_key(bin_x, bin_y));
  return it == db.bins.end() ? kEmpty : it->second;
}

CandidateList fingerprint_top_n(const FingerprintDatabase& db, int bin_x, int bin_y, int n_b) {
  const int total_pairs = db.num_f * db.num_w;
  if (n_b < 1 || n_b > total_pairs) {
    throw std::invalid_argument("fingerprint_top_n: n_b outside [1, I_f * I_w]");
  }
  const auto& local = fingerprint_ranking(db, bin_x, bin_y);
  std::vector<char> used(static_cast<std::size_t>(total_pairs), 0);
  CandidateList out;
  auto push = [&](int flat, double score) {
    used[static_cast<std::size_t>(flat)] = 1;
    out.pairs.push_back(BeamPair::from_flat(flat, db.num_w));
    out.scores.push_back(score);
  };

  const int local_total = total_count(local);
  for (const auto& e : local) {
    if (static_cast<int>(out.size()) == n_b) return out;
    push(e.flat, static_cast<double>(e.count) / local_total);
  }
  const int global_total = total_count(db.global);
  for (const auto& e : db.global) {
    if (static_cast<int>(out.size()) == n_b) return out;
    if (used[static_cast<std::size_t>(e.flat)]) continue;
    push(e.flat, local.empty() ? static_cast<double>(e.count) / global_total : 0.0);
  }
  for (int flat = 0; flat < total_pairs && static_cast<int>(out.size()) < n_b; ++flat) {
    if (!used[static_cast<std::size_t>(flat)]) push(flat, 0.0);
  }
  return out;
}

void save_fingerprint(std::ostream& out, const FingerprintDatabase& db) {
  std::ostringstream p;
  for (int v : {db.num_x, db.num_y, db.num_f, db.num_w}) binio::put<std::int32_t>(p, v);
  auto put_entries = [&](const std::vector<FingerprintDatabase::Entry>& entries) {
    binio::put<std::uint32_t>(p, static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) {
      binio::put<std::int32_t>(p, e.flat);
      binio::put<std::int32_t>(p, e.count);
    }
  };
  binio::put<std::uint32_t>(p, static_cast<std::uint32_t>(db.bins.size()));
  for (const auto& [key, entries] : db.bins) {
    binio::put<std::int32_t>(p, key);
    put_entries(entries);
  }
  put_entries(db.global);
  write_container(out, ContainerType::kFingerprint, p.str());
}

FingerprintDatabase load_fingerprint(std::istream& in) {
  std::istringstream p(read_container(in, ContainerType::kFingerprint));
  FingerprintDatabase db;
  db.num_x = binio::get<std::int32_t>(p);
  db.num_y = binio::get<std::int32_t>(p);
  db.num_f = binio::get<std::int32_t>(p);
  db.num_w = binio::get<std::int32_t>(p);
  auto get_entries = [&]() {
    const auto n = binio::get<std::uint32_t>(p);
    std::vector<FingerprintDatabase::Entry> entries(n);
    for (auto& e : entries) {
      e.flat = binio::get<std::int32_t>(p);
      e.count = binio::get<std::int32_t>(p);
      if (e.flat < 0 || e.flat >= db.num_f * db.num_w || e.count < 0) {
        throw FormatError("fingerprint database: entry out of range");
      }
    }
    return entries;
  };
  const auto num_bins = binio::get<std::uint32_t>(p);
  for (std::uint32_t k = 0; k < num_bins; ++k) {
    const int key = binio::get<std::int32_t>(p);
    db.bins[key] = get_entries();
  }
  db.global = get_entries();
  return db;
}

}  // namespace beamsel
