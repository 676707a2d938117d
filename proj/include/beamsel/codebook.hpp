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
#include <optional>

#include "beamsel/geometry.hpp"

namespace beamsel {

/// DFT beams stored column-wise; column i is beam i (0-based).
struct Codebook {
  ArrayGeometry geometry;
  CMatrix beams;

  int size() const { return static_cast<int>(beams.cols()); }
  auto beam(int i) const { return beams.col(i); }
};

/// Beam pair with 0-based indices. Persisted artifacts add 1.
struct BeamPair {
  int f = 0;
  int w = 0;

  /// Row-major flattening, precoder index outer.
  int flat(int num_w) const { return f * num_w + w; }
  static BeamPair from_flat(int flat, int num_w) { return {flat / num_w, flat % num_w}; }

  friend bool operator==(const BeamPair&, const BeamPair&) = default;
};

/// Linear-domain radio parameters (mW). The pilot symbol has unit power and is taken as s = 1.
struct RadioConfig {
  double transmit_power = 1000.0;
  double noise_variance = 7.96214341106994e-10;  // -90.99 dBm
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Thermal noise floor -174 dBm/Hz integrated over the bandwidth, in dBm.
double thermal_noise_dbm(double bandwidth_hz);

/// 30 dBm transmit power and a 200 MHz noise floor.
RadioConfig default_radio_config();

/// M-point DFT codebook on the (q_x, q_y) grid, flattened with q_x outer.
Codebook build_dft_codebook(const ArrayGeometry& geometry);

/// |sqrt(P_T) w^H H f s + w^H n|^2 in mW. Without noise the deterministic term alone.
double compute_rss(const ChannelMatrix& channel, const Eigen::Ref<const CVector>& f,
                   const Eigen::Ref<const CVector>& w, const RadioConfig& config,
                   const std::optional<CVector>& noise = std::nullopt);

struct ExhaustiveResult {
  BeamPair best;
  Eigen::MatrixXd rss_table;  // I_f x I_w, mW
};

/// Noiseless RSS for every pair; ties go to the smallest flattened index.
ExhaustiveResult exhaustive_search(const ChannelMatrix& channel, const Codebook& cb_tx,
                                   const Codebook& cb_rx, const RadioConfig& config);

/// Noiseless RSS table only.
Eigen::MatrixXd rss_table(const ChannelMatrix& channel, const Codebook& cb_tx,
                          const Codebook& cb_rx, const RadioConfig& config);

/// Row = f_index, column = w_index (1-based in the header), cell = mW.
void write_rss_csv(std::ostream& out, const Eigen::MatrixXd& table);

}  // namespace beamsel
