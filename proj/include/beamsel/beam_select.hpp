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

#include <vector>

#include <Eigen/Dense>

#include "beamsel/codebook.hpp"
#include "beamsel/cpd_pmf.hpp"

namespace beamsel {

/// Ranked candidate beam pairs with nonincreasing scores.
struct CandidateList {
  std::vector<BeamPair> pairs;
  std::vector<double> scores;

  std::size_t size() const { return pairs.size(); }
};

struct SelectOptions {
  /// On a zero-evidence bin, rank by the global beam-pair marginal instead of throwing.
  bool zero_evidence_fallback = false;
};

/// Top n entries of a score matrix (rows f, cols w), ties to the smaller flattened index.
CandidateList rank_scores(const Eigen::MatrixXd& scores, int n_b);

BeamPair select_map(const CpdPmfModel& model, int i_x, int i_y, const SelectOptions& options = {});

/// Throws std::invalid_argument unless 1 <= n_b <= I_f * I_w.
CandidateList top_n(const CpdPmfModel& model, int i_x, int i_y, int n_b,
                    const SelectOptions& options = {});

/// Candidate with the highest noiseless RSS; earlier candidates win ties.
BeamPair refine_by_rss(const CandidateList& candidates, const ChannelMatrix& channel,
                       const Codebook& cb_tx, const Codebook& cb_rx, const RadioConfig& config);

/// Same selection against a precomputed I_f x I_w RSS table.
BeamPair refine_by_rss(const CandidateList& candidates, const Eigen::MatrixXd& rss_table);

}  // namespace beamsel
