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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamsel/codebook.hpp"
#include "beamsel/config.hpp"
#include "beamsel/geometry.hpp"

namespace beamsel {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
};

/// Parameters of the procedural propagation scene. Distances in meters.
struct SceneSpec {
  Rect area{0.0, 400.0, 0.0, 300.0};
  Vec3 bs_position{200.0, 150.0, 30.0};
  double ue_height = 1.5;
  int num_paths = 25;  // one LOS slot plus num_paths - 1 scatterers
  double carrier_frequency = 26e9;
  bool blockage = true;
  int num_buildings = 14;
  double building_min_size = 15.0;
  double building_max_size = 50.0;
  double building_min_height = 8.0;
  double building_max_height = 25.0;
  /// Extra loss of a reflected leg that crosses a building.
  double penetration_loss_db = 30.0;
  double reflection_loss_min_db = 3.0;
  double reflection_loss_max_db = 12.0;
  std::uint64_t seed = 7;
};

SceneSpec scene_spec_from_config(const KeyValueConfig& cfg, SceneSpec base = {});

struct Building {
  Rect footprint;
  double height = 0.0;
};

struct Scatterer {
  Vec3 position;
  double loss_db = 0.0;
  double phase = 0.0;
};

/// Immutable scene realization: buildings (LOS blockers) and a fixed set of point scatterers,
/// both derived from the scene seed alone.
class Scene {
 public:
  explicit Scene(SceneSpec spec);

  const SceneSpec& spec() const { return spec_; }
  const std::vector<Building>& buildings() const { return buildings_; }
  const std::vector<Scatterer>& scatterers() const { return scatterers_; }
  double wavelength() const;

  /// True when the straight segment a-b crosses no building.
  bool clear_segment(const Vec3& a, const Vec3& b) const;
  bool is_los(const Vec3& ue) const;

 private:
  SceneSpec spec_;
  std::vector<Building> buildings_;
  std::vector<Scatterer> scatterers_;
};

/// Elevation from +z and azimuth of the direction from `from` to `to`.
void direction_angles(const Vec3& from, const Vec3& to, double& elevation, double& azimuth);

/// Deterministic path list at a UE position. The LOS path comes first when present.
/// Throws std::out_of_range when the position lies outside the scene area.
std::vector<PathComponent> synthesize_paths(const Scene& scene, const Vec3& position);

/// Channel at a position, including the sqrt(M_T * M_R) array gain so that entries of H carry
/// per-element path gains.
ChannelMatrix scene_channel(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx,
                            const Vec3& position);

/// Uniform position grid, origin at the area's min corner. Bins are 0-based here.
struct GridSpec {
  double x_min = 0.0;
  double y_min = 0.0;
  double bin_size = 5.0;
  int num_x = 1;
  int num_y = 1;

  static GridSpec cover(const Rect& area, double bin_size);

  struct Bin {
    int x = 0;
    int y = 0;
    bool clamped = false;
  };
  /// floor((v - min) / bin_size), clamped to the grid.
  Bin bin_of(double x, double y) const;
};

struct LabeledSample {
  Vec3 position;
  int bin_x = 0;
  int bin_y = 0;
  BeamPair optimal;
};

struct BeamDataset {
  std::vector<LabeledSample> samples;
  GridSpec grid;
  int num_f = 1;
  int num_w = 1;
  std::uint64_t scene_seed = 0;
  std::uint64_t sample_seed = 0;
  /// Optional raw channels, aligned with samples.
  std::vector<ChannelMatrix> channels;

  std::size_t size() const { return samples.size(); }
  bool has_channels() const { return !channels.empty(); }
  /// Same metadata, chosen samples (and channels when present).
  BeamDataset subset(const std::vector<std::size_t>& indices) const;
};

struct DatasetOptions {
  std::size_t num_samples = 2000;
  double bin_size = 5.0;
  std::uint64_t sample_seed = 1;
  bool keep_channels = true;
};

BeamDataset build_dataset(const Scene& scene, const DatasetOptions& options, const Codebook& cb_tx,
                          const Codebook& cb_rx, const RadioConfig& config);

/// Seeded permutation of 0..n-1 split into (train, test) index lists; the train part has
/// round(n * fraction) entries, kept within [1, n - 1] when n >= 2.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> shuffle_split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed);

/// Seeded permutation followed by a split; the train part has round(T * fraction) samples.
std::pair<BeamDataset, BeamDataset> split_shuffle(const BeamDataset& dataset,
                                                  double train_fraction, std::uint64_t seed);

/// CSV with `#key=value` metadata lines, header x,y,z,i_x,i_y,i_f,i_w and 1-based indices.
void write_dataset_csv(std::ostream& out, const BeamDataset& dataset);
BeamDataset read_dataset_csv(std::istream& in);
void save_dataset_csv(const std::string& path, const BeamDataset& dataset);
BeamDataset load_dataset_csv(const std::string& path);

/// Binary sidecar: magic "BSCH", u32 version, u64 count, u32 rows, u32 cols, then little-endian
/// doubles (re, im) per entry, row-major per matrix.
void write_channel_sidecar(std::ostream& out, const std::vector<ChannelMatrix>& channels);
std::vector<ChannelMatrix> read_channel_sidecar(std::istream& in);

}  // namespace beamsel
