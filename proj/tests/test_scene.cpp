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
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "beamsel/errors.hpp"
#include "beamsel/scene.hpp"

using namespace beamsel;

namespace {

struct Fixture {
  ArrayGeometry tx{8, 8, 0.5, 0.5};
  ArrayGeometry rx{2, 2, 0.5, 0.5};
  Codebook cb_tx = build_dft_codebook(tx);
  Codebook cb_rx = build_dft_codebook(rx);
  RadioConfig radio;
};

// Nearest DFT grid index for a spatial frequency, wrapping around 2*pi.
int nearest_grid(double mu, int m) {
  const double step = 2.0 * std::numbers::pi / m;
  long q = std::lround(mu / step);
  return static_cast<int>(((q % m) + m) % m);
}

}  // namespace

TEST(Scene, DirectionAngles) {
  double el = 0, az = 0;
  direction_angles({0, 0, 0}, {0, 0, -5}, el, az);
  EXPECT_NEAR(el, std::numbers::pi, 1e-15);
  direction_angles({0, 0, 10}, {3, 4, 10}, el, az);
  EXPECT_NEAR(el, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(az, std::atan2(4.0, 3.0), 1e-15);
  direction_angles({0, 0, 0}, {1, 0, 1}, el, az);
  EXPECT_NEAR(el, std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(az, 0.0, 1e-15);
}

TEST(Scene, LosPathHasGeometricAngles) {
  SceneSpec spec;
  spec.blockage = false;
  const Scene scene(spec);
  const Vec3 ue{260.0, 150.0, 1.5};
  const auto paths = synthesize_paths(scene, ue);
  ASSERT_EQ(paths.size(), static_cast<std::size_t>(spec.num_paths));
  const double dx = 60.0, dz = 1.5 - 30.0;
  EXPECT_NEAR(paths[0].aod_elevation, std::atan2(dx, dz), 1e-12);
  EXPECT_NEAR(paths[0].aod_azimuth, 0.0, 1e-12);
  EXPECT_NEAR(std::cos(paths[0].aoa_azimuth), -1.0, 1e-12);
  EXPECT_NEAR(std::sin(paths[0].aoa_azimuth), 0.0, 1e-12);
  const double d = std::hypot(dx, dz);
  EXPECT_NEAR(std::abs(paths[0].gain), scene.wavelength() / (4 * std::numbers::pi * d), 1e-15);
  // The LOS path is the strongest.
  for (std::size_t i = 1; i < paths.size(); ++i) {
    EXPECT_LT(std::abs(paths[i].gain), std::abs(paths[0].gain));
  }
}

TEST(Scene, DeterministicAndCoherent) {
  SceneSpec spec;
  spec.blockage = false;
  const Scene a(spec), b(spec);
  const Vec3 p{243.0, 171.0, 1.5}, q{243.1, 171.0, 1.5};
  const auto pa = synthesize_paths(a, p), pb = synthesize_paths(b, p), pq = synthesize_paths(a, q);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].gain, pb[i].gain);
    EXPECT_EQ(pa[i].aod_azimuth, pb[i].aod_azimuth);
  }
  // 0.1 m apart at about 50 m range.
  EXPECT_LT(std::abs(pa[0].aod_azimuth - pq[0].aod_azimuth), 0.01);
  EXPECT_LT(std::abs(pa[0].aod_elevation - pq[0].aod_elevation), 0.01);
}

TEST(Scene, BlockageRemovesLos) {
  SceneSpec spec;
  const Scene scene(spec);
  ASSERT_FALSE(scene.buildings().empty());
  const auto& b = scene.buildings().front();
  const double cx = 0.5 * (b.footprint.x_min + b.footprint.x_max);
  const double cy = 0.5 * (b.footprint.y_min + b.footprint.y_max);
  EXPECT_FALSE(scene.clear_segment({cx, cy, 0.5 * b.height}, {cx + 200.0, cy, 0.5 * b.height}));
  EXPECT_TRUE(scene.clear_segment({cx, cy, b.height + 1.0}, {cx + 200.0, cy, b.height + 1.0}));
  int blocked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec3 ue{5.0 + (i % 20) * 19.5, 5.0 + (i / 20) * 14.5, 1.5};
    if (!scene.is_los(ue)) {
      ++blocked;
      EXPECT_EQ(synthesize_paths(scene, ue).size(), static_cast<std::size_t>(spec.num_paths - 1));
    }
  }
  EXPECT_GT(blocked, 0);
  EXPECT_LT(blocked, 400);
}

TEST(Scene, OutsideAreaThrows) {
  const Scene scene(SceneSpec{});
  EXPECT_THROW(synthesize_paths(scene, {-1.0, 10.0, 1.5}), std::out_of_range);
  EXPECT_THROW(synthesize_paths(scene, {10.0, 300.5, 1.5}), std::out_of_range);
}

TEST(Scene, SingleLosPathLabelsFollowAngleCells) {
  SceneSpec spec;
  spec.blockage = false;
  spec.num_paths = 1;
  const Scene scene(spec);
  Fixture fx;
  int checked = 0;
  for (int i = 0; i <= 1000; ++i) {
    const Vec3 ue{10.0 + 0.38 * i, 40.0 + 0.1 * i, 1.5};
    const auto paths = synthesize_paths(scene, ue);
    ASSERT_EQ(paths.size(), 1u);
    const auto mt = spatial_frequencies(fx.tx, paths[0].aod_elevation, paths[0].aod_azimuth);
    const auto mr = spatial_frequencies(fx.rx, paths[0].aoa_elevation, paths[0].aoa_azimuth);
    const BeamPair expect{nearest_grid(mt.mu_x, 8) * 8 + nearest_grid(mt.mu_y, 8),
                          nearest_grid(mr.mu_x, 2) * 2 + nearest_grid(mr.mu_y, 2)};
    const auto res =
        exhaustive_search(scene_channel(scene, fx.tx, fx.rx, ue), fx.cb_tx, fx.cb_rx, fx.radio);
    EXPECT_EQ(res.best, expect) << "at i=" << i;
    ++checked;
  }
  EXPECT_EQ(checked, 1001);
}

TEST(Scene, Grid) {
  const GridSpec g = GridSpec::cover(Rect{0, 400, 0, 300}, 5.0);
  EXPECT_EQ(g.num_x, 80);
  EXPECT_EQ(g.num_y, 60);
  auto b = g.bin_of(0.0, 0.0);
  EXPECT_EQ(b.x, 0);
  EXPECT_EQ(b.y, 0);
  EXPECT_FALSE(b.clamped);
  b = g.bin_of(4.999, 5.0);
  EXPECT_EQ(b.x, 0);
  EXPECT_EQ(b.y, 1);
  b = g.bin_of(400.0, 300.0);
  EXPECT_EQ(b.x, 79);
  EXPECT_EQ(b.y, 59);
  EXPECT_FALSE(b.clamped);
  b = g.bin_of(-3.0, 320.0);
  EXPECT_EQ(b.x, 0);
  EXPECT_EQ(b.y, 59);
  EXPECT_TRUE(b.clamped);
  for (double x = 0.05; x < 400.0; x += 1.7) {
    const auto bx = g.bin_of(x, 1.0).x;
    EXPECT_LE(bx * 5.0, x);
    EXPECT_LT(x, (bx + 1) * 5.0);
  }
  EXPECT_EQ(GridSpec::cover(Rect{0, 7, 0, 3}, 5.0).num_x, 2);
  EXPECT_THROW(GridSpec::cover(Rect{0, 7, 0, 3}, 0.0), std::invalid_argument);
}

TEST(Scene, DatasetLabelsMatchRegeneration) {
  Fixture fx;
  const Scene scene(SceneSpec{});
  DatasetOptions opt;
  opt.num_samples = 60;
  const auto ds = build_dataset(scene, opt, fx.cb_tx, fx.cb_rx, fx.radio);
  ASSERT_EQ(ds.size(), 60u);
  EXPECT_EQ(ds.num_f, 64);
  EXPECT_EQ(ds.num_w, 4);
  EXPECT_EQ(ds.grid.num_x, 80);
  for (std::size_t t = 0; t < ds.size(); ++t) {
    const auto& s = ds.samples[t];
    EXPECT_EQ(s.position.z, 1.5);
    const auto bin = ds.grid.bin_of(s.position.x, s.position.y);
    EXPECT_EQ(bin.x, s.bin_x);
    EXPECT_EQ(bin.y, s.bin_y);
    const auto h = scene_channel(scene, fx.tx, fx.rx, s.position);
    EXPECT_EQ((h - ds.channels[t]).norm(), 0.0);
    EXPECT_EQ(exhaustive_search(h, fx.cb_tx, fx.cb_rx, fx.radio).best, s.optimal);
  }
  const auto again = build_dataset(scene, opt, fx.cb_tx, fx.cb_rx, fx.radio);
  for (std::size_t t = 0; t < ds.size(); ++t) {
    EXPECT_EQ(again.samples[t].position.x, ds.samples[t].position.x);
    EXPECT_EQ(again.samples[t].optimal, ds.samples[t].optimal);
  }
  opt.num_samples = 1;
  EXPECT_EQ(build_dataset(scene, opt, fx.cb_tx, fx.cb_rx, fx.radio).size(), 1u);
  opt.num_samples = 0;
  EXPECT_THROW(build_dataset(scene, opt, fx.cb_tx, fx.cb_rx, fx.radio), std::invalid_argument);
}

TEST(Scene, Split) {
  auto [tr, te] = shuffle_split_indices(2000, 0.8, 5);
  EXPECT_EQ(tr.size(), 1600u);
  EXPECT_EQ(te.size(), 400u);
  std::vector<int> seen(2000, 0);
  for (auto i : tr) ++seen[i];
  for (auto i : te) ++seen[i];
  for (int c : seen) EXPECT_EQ(c, 1);
  auto [tr2, te2] = shuffle_split_indices(2000, 0.8, 5);
  EXPECT_EQ(tr, tr2);
  EXPECT_EQ(te, te2);
  auto [a, b] = shuffle_split_indices(2, 0.5, 1);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_THROW(shuffle_split_indices(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(shuffle_split_indices(10, 1.0, 1), std::invalid_argument);

  Fixture fx;
  DatasetOptions opt;
  opt.num_samples = 20;
  const auto ds = build_dataset(Scene(SceneSpec{}), opt, fx.cb_tx, fx.cb_rx, fx.radio);
  const auto [train, test] = split_shuffle(ds, 0.75, 3);
  EXPECT_EQ(train.size(), 15u);
  EXPECT_EQ(test.size(), 5u);
  EXPECT_EQ(train.channels.size(), 15u);
  EXPECT_EQ(train.grid.num_x, ds.grid.num_x);
}

TEST(Scene, CsvRoundTrip) {
  Fixture fx;
  DatasetOptions opt;
  opt.num_samples = 25;
  const auto ds = build_dataset(Scene(SceneSpec{}), opt, fx.cb_tx, fx.cb_rx, fx.radio);
  std::stringstream buf;
  write_dataset_csv(buf, ds);
  const auto back = read_dataset_csv(buf);
  ASSERT_EQ(back.size(), ds.size());
  EXPECT_EQ(back.grid.num_x, 80);
  EXPECT_EQ(back.grid.num_y, 60);
  EXPECT_EQ(back.grid.bin_size, 5.0);
  EXPECT_EQ(back.num_f, 64);
  EXPECT_EQ(back.num_w, 4);
  EXPECT_EQ(back.scene_seed, ds.scene_seed);
  for (std::size_t t = 0; t < ds.size(); ++t) {
    EXPECT_EQ(back.samples[t].position.x, ds.samples[t].position.x);
    EXPECT_EQ(back.samples[t].position.y, ds.samples[t].position.y);
    EXPECT_EQ(back.samples[t].bin_x, ds.samples[t].bin_x);
    EXPECT_EQ(back.samples[t].optimal, ds.samples[t].optimal);
  }
  std::stringstream again;
  write_dataset_csv(again, back);
  std::stringstream first;
  write_dataset_csv(first, ds);
  EXPECT_EQ(again.str(), first.str());

  std::stringstream side;
  write_channel_sidecar(side, ds.channels);
  const auto channels = read_channel_sidecar(side);
  ASSERT_EQ(channels.size(), ds.channels.size());
  for (std::size_t t = 0; t < channels.size(); ++t) {
    EXPECT_EQ((channels[t] - ds.channels[t]).norm(), 0.0);
  }
}

TEST(Scene, CsvErrors) {
  std::stringstream bad("#grid=0,0,5,2,2\n#codebook=4,2\nx,y,z,i_x,i_y,i_f,i_w\n1,1,1.5,1,1,5,1\n");
  EXPECT_THROW(read_dataset_csv(bad), FormatError);
  std::stringstream bin_out("#grid=0,0,5,2,2\n#codebook=4,2\nx,y,z,i_x,i_y,i_f,i_w\n1,1,1.5,3,1,1,1\n");
  EXPECT_THROW(read_dataset_csv(bin_out), FormatError);
  std::stringstream garbage("#grid=0,0,5,2,2\n#codebook=4,2\nx,y,z,i_x,i_y,i_f,i_w\n1,1,zz,1,1,1,1\n");
  EXPECT_THROW(read_dataset_csv(garbage), FormatError);
  std::stringstream side("nope");
  EXPECT_THROW(read_channel_sidecar(side), FormatError);
}
