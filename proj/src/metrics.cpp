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

#include "beamsel/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "beamsel/errors.hpp"

namespace beamsel {

double power_loss_probability(const std::vector<BeamPair>& selections,
                              const std::vector<Eigen::MatrixXd>& rss_tables, double c) {
  if (selections.size() != rss_tables.size()) {
    throw DimensionError("power_loss_probability: selections and RSS tables are misaligned");
  }
  if (!(c >= 1.0)) throw std::invalid_argument("power_loss_probability: c must be >= 1");
  if (selections.empty()) return 0.0;
  std::size_t losses = 0;
  for (std::size_t t = 0; t < selections.size(); ++t) {
    const auto& table = rss_tables[t];
    const auto& sel = selections[t];
    if (sel.f < 0 || sel.f >= table.rows() || sel.w < 0 || sel.w >= table.cols()) {
      throw DimensionError("power_loss_probability: selection outside its RSS table");
    }
    if (table.maxCoeff() > c * table(sel.f, sel.w)) ++losses;
  }
  return static_cast<double>(losses) / static_cast<double>(selections.size());
}

double rate_from_rss(double rss, const RadioConfig& config) {
  return std::log2(1.0 + rss / config.noise_variance);
}

double achievable_rate(const ChannelMatrix& channel, const BeamPair& selected,
                       const Codebook& cb_tx, const Codebook& cb_rx, const RadioConfig& config) {
  if (selected.f < 0 || selected.f >= cb_tx.size() || selected.w < 0 ||
      selected.w >= cb_rx.size()) {
    throw DimensionError("achievable_rate: pair outside the codebooks");
  }
  return rate_from_rss(
      compute_rss(channel, cb_tx.beam(selected.f), cb_rx.beam(selected.w), config), config);
}

}  // namespace beamsel
