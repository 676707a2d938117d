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

#include "beamsel/beam_select.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "beamsel/errors.hpp"

namespace beamsel {

CandidateList rank_scores(const Eigen::MatrixXd& scores, int n_b) {
  const auto num_f = static_cast<int>(scores.rows());
  const auto num_w = static_cast<int>(scores.cols());
  const int total = num_f * num_w;
  if (n_b < 1 || n_b > total) {
    throw std::invalid_argument("candidate list length " + std::to_string(n_b) +
                                " outside [1, " + std::to_string(total) + "]");
  }
  std::vector<int> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), 0);
  const auto score = [&](int flat) { return scores(flat / num_w, flat % num_w); };
  std::partial_sort(order.begin(), order.begin() + n_b, order.end(), [&](int a, int b) {
    const double sa = score(a);
    const double sb = score(b);
    return sa > sb || (sa == sb && a < b);
  });
  CandidateList out;
  out.pairs.reserve(static_cast<std::size_t>(n_b));
  out.scores.reserve(static_cast<std::size_t>(n_b));
  for (int k = 0; k < n_b; ++k) {
    out.pairs.push_back(BeamPair::from_flat(order[static_cast<std::size_t>(k)], num_w));
    out.scores.push_back(score(order[static_cast<std::size_t>(k)]));
  }
  return out;
}

namespace {

Eigen::MatrixXd conditional(const CpdPmfModel& model, int i_x, int i_y,
                            const SelectOptions& options) {
  try {
    return posterior_over_beams(model, i_x, i_y);
  } catch (const ZeroEvidenceError&) {
    if (!options.zero_evidence_fallback) throw;
    return beam_marginal(model);
  }
}

}  // namespace

BeamPair select_map(const CpdPmfModel& model, int i_x, int i_y, const SelectOptions& options) {
  return rank_scores(conditional(model, i_x, i_y, options), 1).pairs.front();
}

CandidateList top_n(const CpdPmfModel& model, int i_x, int i_y, int n_b,
                    const SelectOptions& options) {
  return rank_scores(conditional(model, i_x, i_y, options), n_b);
}

BeamPair refine_by_rss(const CandidateList& candidates, const Eigen::MatrixXd& rss_table) {
  if (candidates.pairs.empty()) throw std::invalid_argument("refine_by_rss: empty candidate list");
  BeamPair best = candidates.pairs.front();
  double best_rss = -1.0;
  for (const auto& p : candidates.pairs) {
    if (p.f < 0 || p.f >= rss_table.rows() || p.w < 0 || p.w >= rss_table.cols()) {
      throw DimensionError("refine_by_rss: candidate outside the RSS table");
    }
    if (rss_table(p.f, p.w) > best_rss) {
      best_rss = rss_table(p.f, p.w);
      best = p;
    }
  }
  return best;
}

BeamPair refine_by_rss(const CandidateList& candidates, const ChannelMatrix& channel,
                       const Codebook& cb_tx, const Codebook& cb_rx, const RadioConfig& config) {
  if (candidates.pairs.empty()) throw std::invalid_argument("refine_by_rss: empty candidate list");
  BeamPair best = candidates.pairs.front();
  double best_rss = -1.0;
  for (const auto& p : candidates.pairs) {
    if (p.f < 0 || p.f >= cb_tx.size() || p.w < 0 || p.w >= cb_rx.size()) {
      throw DimensionError("refine_by_rss: candidate outside the codebooks");
    }
    const double rss = compute_rss(channel, cb_tx.beam(p.f), cb_rx.beam(p.w), config);
    if (rss > best_rss) {
      best_rss = rss;
      best = p;
    }
  }
  return best;
}

}  // namespace beamsel
