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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace beamsel {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Channel between BS and one UE position, shape M_R x M_T.
using ChannelMatrix = CMatrix;

/// Uniform planar array lying in the x-y plane.
/// Spacings are in carrier wavelengths.
struct ArrayGeometry {
  int m_x = 1;
  int m_y = 1;
  double delta_x = 0.5;
  double delta_y = 0.5;

  int elements() const { return m_x * m_y; }
};

/// One propagation path. Angles in radians; elevation is measured from the
/// array normal (+z), azimuth from +x towards +y.
///
/// The delay is carried along for completeness only. The narrowband channel
/// model does not read it.
struct PathComponent {
  cplx gain{0.0, 0.0};
  double aoa_elevation = 0.0;
  double aoa_azimuth = 0.0;
  double aod_elevation = 0.0;
  double aod_azimuth = 0.0;
  double delay = 0.0;
};

struct SpatialFrequency {
  double mu_x = 0.0;
  double mu_y = 0.0;
};

SpatialFrequency spatial_frequencies(const ArrayGeometry& geometry, double elevation,
                                     double azimuth);

/// Unit-norm Kronecker steering vector a(theta, phi) = (x ramp) kron (y ramp) / sqrt(M).
CVector steering_vector(const ArrayGeometry& geometry, double elevation, double azimuth);

/// Steering vector directly from spatial frequencies.
CVector steering_vector(const ArrayGeometry& geometry, const SpatialFrequency& mu);

/// H = sum_l gain_l * a_R(aoa_l) * a_T(aod_l)^H. Empty path list gives the zero matrix.
ChannelMatrix assemble_channel(const ArrayGeometry& geometry_tx, const ArrayGeometry& geometry_rx,
                               const std::vector<PathComponent>& paths);

}  // namespace beamsel
