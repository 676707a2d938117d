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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "beamsel/geometry.hpp"

using namespace beamsel;

namespace {

// Direct element-by-element definition of the planar array response.
cplx element(const ArrayGeometry& g, int ix, int iy, double el, double az) {
  const double phase = 2.0 * std::numbers::pi * std::sin(el) *
                       (ix * g.delta_x * std::cos(az) + iy * g.delta_y * std::sin(az));
  return std::polar(1.0, phase) / std::sqrt(static_cast<double>(g.elements()));
}

}  // namespace

TEST(Geometry, BroadsideIsAllEqual) {
  const ArrayGeometry g{4, 4, 0.5, 0.5};
  const CVector a = steering_vector(g, 0.0, 0.0);
  ASSERT_EQ(a.size(), 16);
  for (int i = 0; i < 16; ++i) {
    EXPECT_NEAR(a(i).real(), 0.25, 1e-15);
    EXPECT_NEAR(a(i).imag(), 0.0, 1e-15);
  }
}

TEST(Geometry, EndfireAlongX) {
  const ArrayGeometry g{2, 1, 0.5, 0.5};
  const CVector a = steering_vector(g, std::numbers::pi / 2, 0.0);
  EXPECT_NEAR(std::abs(a(0) - cplx(1.0 / std::sqrt(2.0), 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1) - cplx(-1.0 / std::sqrt(2.0), 0.0)), 0.0, 1e-15);
}

TEST(Geometry, MatchesElementwiseDefinition) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> el(0.0, std::numbers::pi / 2);
  std::uniform_real_distribution<double> az(-std::numbers::pi, std::numbers::pi);
  const ArrayGeometry g{5, 3, 0.5, 0.7};
  for (int trial = 0; trial < 50; ++trial) {
    const double e = el(rng), a = az(rng);
    const CVector v = steering_vector(g, e, a);
    for (int ix = 0; ix < g.m_x; ++ix)
      for (int iy = 0; iy < g.m_y; ++iy) {
        EXPECT_NEAR(std::abs(v(ix * g.m_y + iy) - element(g, ix, iy, e, a)), 0.0, 1e-12);
      }
  }
}

TEST(Geometry, UnitNorm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int m : {1, 2, 8}) {
    const ArrayGeometry g{m, m + 1, 0.5, 0.5};
    for (int k = 0; k < 20; ++k) {
      EXPECT_NEAR(steering_vector(g, u(rng), u(rng)).norm(), 1.0, 1e-12);
    }
  }
}

TEST(Geometry, KroneckerStructure) {
  const ArrayGeometry g{3, 4, 0.5, 0.5};
  const SpatialFrequency mu = spatial_frequencies(g, 0.7, 1.1);
  const CVector a = steering_vector(g, mu);
  const CVector ax = steering_vector(ArrayGeometry{3, 1, 0.5, 0.5}, SpatialFrequency{mu.mu_x, 0.0});
  const CVector ay = steering_vector(ArrayGeometry{1, 4, 0.5, 0.5}, SpatialFrequency{0.0, mu.mu_y});
  for (int ix = 0; ix < 3; ++ix)
    for (int iy = 0; iy < 4; ++iy) {
      EXPECT_NEAR(std::abs(a(ix * 4 + iy) - ax(ix) * ay(iy)), 0.0, 1e-14);
    }
}

TEST(Geometry, SinglePathChannelIsRankOne) {
  const ArrayGeometry tx{4, 4, 0.5, 0.5}, rx{2, 2, 0.5, 0.5};
  PathComponent p;
  p.gain = {0.3, -0.4};
  p.aoa_elevation = 0.5;
  p.aoa_azimuth = 0.2;
  p.aod_elevation = 1.0;
  p.aod_azimuth = -0.6;
  const ChannelMatrix h = assemble_channel(tx, rx, {p});
  ASSERT_EQ(h.rows(), 4);
  ASSERT_EQ(h.cols(), 16);
  Eigen::JacobiSVD<ChannelMatrix> svd(h);
  EXPECT_NEAR(svd.singularValues()(0), 0.5, 1e-12);
  EXPECT_NEAR(svd.singularValues()(1), 0.0, 1e-12);
}

TEST(Geometry, ChannelIsSumOfPaths) {
  const ArrayGeometry tx{3, 2, 0.5, 0.5}, rx{2, 1, 0.5, 0.5};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  std::vector<PathComponent> paths(4);
  ChannelMatrix expect = ChannelMatrix::Zero(2, 6);
  for (auto& p : paths) {
    p.gain = {n(rng), n(rng)};
    p.aoa_elevation = n(rng);
    p.aoa_azimuth = n(rng);
    p.aod_elevation = n(rng);
    p.aod_azimuth = n(rng);
    for (int r = 0; r < 2; ++r)
      for (int t = 0; t < 6; ++t) {
        expect(r, t) += p.gain * element(rx, r, 0, p.aoa_elevation, p.aoa_azimuth) *
                        std::conj(element(tx, t / 2, t % 2, p.aod_elevation, p.aod_azimuth));
      }
  }
  EXPECT_LT((assemble_channel(tx, rx, paths) - expect).norm(), 1e-12);
}

TEST(Geometry, NoPathsGivesZeroChannel) {
  const ChannelMatrix h = assemble_channel({2, 2, 0.5, 0.5}, {1, 1, 0.5, 0.5}, {});
  EXPECT_EQ(h.rows(), 1);
  EXPECT_EQ(h.cols(), 4);
  EXPECT_EQ(h.norm(), 0.0);
}

TEST(Geometry, SpatialFrequencyExamples) {
  const ArrayGeometry g{8, 8, 0.5, 0.5};
  const double pi = std::numbers::pi;
  auto mu = spatial_frequencies(g, 0.0, 1.3);
  EXPECT_NEAR(mu.mu_x, 0.0, 1e-15);
  EXPECT_NEAR(mu.mu_y, 0.0, 1e-15);
  mu = spatial_frequencies(g, pi / 2, 0.0);
  EXPECT_NEAR(mu.mu_x, pi, 1e-15);
  EXPECT_NEAR(mu.mu_y, 0.0, 1e-15);
  mu = spatial_frequencies(g, pi / 2, pi / 2);
  EXPECT_NEAR(mu.mu_x, 0.0, 1e-15);
  EXPECT_NEAR(mu.mu_y, pi, 1e-15);
  EXPECT_NEAR(steering_vector(g, 0.7, 1.1).norm(), 1.0, 1e-12);
}

TEST(Geometry, OrthogonalPathsAddInQuadrature) {
  // Broadside and endfire on a 2x1 array are orthogonal: [1,1] vs [1,-1].
  const ArrayGeometry g{2, 1, 0.5, 0.5};
  PathComponent a, b;
  a.gain = b.gain = 1.0;
  b.aoa_elevation = b.aod_elevation = std::numbers::pi / 2;
  EXPECT_NEAR(std::abs(steering_vector(g, 0.0, 0.0).dot(steering_vector(g, std::numbers::pi / 2, 0.0))),
              0.0, 1e-15);
  EXPECT_NEAR(assemble_channel(g, g, {a, b}).norm(), std::sqrt(2.0), 1e-10);
}

TEST(Geometry, ChannelIsLinearInPathList) {
  const ArrayGeometry tx{4, 2, 0.5, 0.5}, rx{2, 2, 0.5, 0.5};
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  auto random_paths = [&](int count) {
    std::vector<PathComponent> v(count);
    for (auto& p : v) {
      p.gain = {n(rng), n(rng)};
      p.aoa_elevation = n(rng);
      p.aoa_azimuth = n(rng);
      p.aod_elevation = n(rng);
      p.aod_azimuth = n(rng);
    }
    return v;
  };
  const auto p1 = random_paths(3), p2 = random_paths(5);
  auto both = p1;
  both.insert(both.end(), p2.begin(), p2.end());
  const ChannelMatrix sum = assemble_channel(tx, rx, p1) + assemble_channel(tx, rx, p2);
  EXPECT_LT((assemble_channel(tx, rx, both) - sum).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geometry, AzimuthSignIrrelevantForLinearXArray) {
  const ArrayGeometry g{6, 1, 0.5, 0.5};
  for (double az : {0.1, 0.9, 2.5}) {
    EXPECT_LT((steering_vector(g, 0.8, az) - steering_vector(g, 0.8, -az)).norm(), 1e-14);
  }
}

TEST(Geometry, RankBoundedByPathCount) {
  const ArrayGeometry tx{4, 4, 0.5, 0.5}, rx{4, 2, 0.5, 0.5};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int paths = 1; paths <= 10; ++paths) {
    std::vector<PathComponent> v(paths);
    for (auto& p : v) {
      p.gain = 1.0;
      p.aoa_elevation = u(rng);
      p.aoa_azimuth = 4 * u(rng);
      p.aod_elevation = u(rng);
      p.aod_azimuth = 4 * u(rng);
    }
    Eigen::JacobiSVD<ChannelMatrix> svd(assemble_channel(tx, rx, v));
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s(i) > 1e-9;
    EXPECT_LE(rank, std::min(paths, 8));
  }
}
