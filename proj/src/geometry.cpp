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

#include "beamsel/geometry.hpp"

#include <cmath>
#include <numbers>

namespace beamsel {

SpatialFrequency spatial_frequencies(const ArrayGeometry& geometry, double elevation,
                                     double azimuth) {
  const double s = std::sin(elevation);
  return {2.0 * std::numbers::pi * geometry.delta_x * s * std::cos(azimuth),
          2.0 * std::numbers::pi * geometry.delta_y * s * std::sin(azimuth)};
}

CVector steering_vector(const ArrayGeometry& geometry, const SpatialFrequency& mu) {
  const int mx = geometry.m_x;
  const int my = geometry.m_y;
  const double scale = 1.0 / std::sqrt(static_cast<double>(mx * my));
  CVector a(mx * my);
  // Kronecker order: x index outer, y index inner.
  for (int ix = 0; ix < mx; ++ix) {
    const cplx px = std::polar(1.0, ix * mu.mu_x);
    for (int iy = 0; iy < my; ++iy) {
      a(ix * my + iy) = scale * px * std::polar(1.0, iy * mu.mu_y);
    }
  }
  return a;
}

CVector steering_vector(const ArrayGeometry& geometry, double elevation, double azimuth) {
  return steering_vector(geometry, spatial_frequencies(geometry, elevation, azimuth));
}

ChannelMatrix assemble_channel(const ArrayGeometry& geometry_tx, const ArrayGeometry& geometry_rx,
                               const std::vector<PathComponent>& paths) {
  ChannelMatrix h = ChannelMatrix::Zero(geometry_rx.elements(), geometry_tx.elements());
  for (const auto& p : paths) {
    const CVector a_r = steering_vector(geometry_rx, p.aoa_elevation, p.aoa_azimuth);
    const CVector a_t = steering_vector(geometry_tx, p.aod_elevation, p.aod_azimuth);
    h.noalias() += p.gain * a_r * a_t.adjoint();
  }
  return h;
}

}  // namespace beamsel
