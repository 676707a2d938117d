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

namespace beamsel {

/// Fraction of samples whose best achievable RSS exceeds c times the RSS of the selected pair.
/// c = 1 is the 0 dB loss, c = 2 the 3 dB loss. Throws DimensionError on misaligned inputs and
/// std::invalid_argument for c < 1.
double power_loss_probability(const std::vector<BeamPair>& selections,
                              const std::vector<Eigen::MatrixXd>& rss_tables, double c);

/// log2(1 + RSS / noise variance) in bits/s/Hz.
double rate_from_rss(double rss, const RadioConfig& config);

/// Rate of a selected pair on a channel, evaluated noiselessly.
double achievable_rate(const ChannelMatrix& channel, const BeamPair& selected,
                       const Codebook& cb_tx, const Codebook& cb_rx, const RadioConfig& config);

}  // namespace beamsel
