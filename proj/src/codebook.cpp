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

#include "beamsel/codebook.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "beamsel/errors.hpp"

namespace beamsel {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double thermal_noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

RadioConfig default_radio_config() {
  return {dbm_to_mw(30.0), dbm_to_mw(thermal_noise_dbm(200e6))};
}

Codebook build_dft_codebook(const ArrayGeometry& geometry) {
  Codebook cb{geometry, CMatrix(geometry.elements(), geometry.elements())};
  int col = 0;
  for (int qx = 0; qx < geometry.m_x; ++qx) {
    for (int qy = 0; qy < geometry.m_y; ++qy) {
      const SpatialFrequency mu{2.0 * std::numbers::pi * qx / geometry.m_x,
                                2.0 * std::numbers::pi * qy / geometry.m_y};
      cb.beams.col(col++) = steering_vector(geometry, mu);
    }
  }
  return cb;
}

double compute_rss(const ChannelMatrix& channel, const Eigen::Ref<const CVector>& f,
                   const Eigen::Ref<const CVector>& w, const RadioConfig& config,
                   const std::optional<CVector>& noise) {
  if (f.size() != channel.cols() || w.size() != channel.rows()) {
    throw DimensionError("compute_rss: beam sizes (" + std::to_string(f.size()) + ", " +
                         std::to_string(w.size()) + ") do not match a " +
                         std::to_string(channel.rows()) + "x" + std::to_string(channel.cols()) +
                         " channel");
  }
  cplx y = std::sqrt(config.transmit_power) * w.dot(channel * f);
  if (noise) {
    if (noise->size() != channel.rows()) {
      throw DimensionError("compute_rss: noise vector length mismatch");
    }
    y += w.dot(*noise);
  }
  return std::norm(y);
}

Eigen::MatrixXd rss_table(const ChannelMatrix& channel, const Codebook& cb_tx,
                          const Codebook& cb_rx, const RadioConfig& config) {
  if (cb_tx.beams.rows() != channel.cols() || cb_rx.beams.rows() != channel.rows()) {
    throw DimensionError("rss_table: codebooks do not match the channel dimensions");
  }
  // (I_w x M_R)(M_R x M_T)(M_T x I_f), then transposed to I_f x I_w.
  const CMatrix gains = cb_rx.beams.adjoint() * channel * cb_tx.beams;
  return (config.transmit_power * gains.cwiseAbs2()).transpose();
}

ExhaustiveResult exhaustive_search(const ChannelMatrix& channel, const Codebook& cb_tx,
                                   const Codebook& cb_rx, const RadioConfig& config) {
  ExhaustiveResult result{{0, 0}, rss_table(channel, cb_tx, cb_rx, config)};
  double best = result.rss_table(0, 0);
  for (int f = 0; f < result.rss_table.rows(); ++f) {
    for (int w = 0; w < result.rss_table.cols(); ++w) {
      if (result.rss_table(f, w) > best) {
        best = result.rss_table(f, w);
        result.best = {f, w};
      }
    }
  }
  return result;
}

void write_rss_csv(std::ostream& out, const Eigen::MatrixXd& table) {
  out << "f_index";
  for (int w = 0; w < table.cols(); ++w) out << ",w" << (w + 1);
  out << '\n';
  const auto old_precision = out.precision(17);
  for (int f = 0; f < table.rows(); ++f) {
    out << (f + 1);
    for (int w = 0; w < table.cols(); ++w) out << ',' << table(f, w);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace beamsel
