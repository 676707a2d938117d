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

#include "beamsel/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "beamsel/binary_io.hpp"
#include "beamsel/errors.hpp"

namespace beamsel {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

// Slab test of segment a + t (b - a), t in [0, 1], against an axis-aligned box.
bool segment_hits_box(const Vec3& a, const Vec3& b, const double lo[3], const double hi[3]) {
  const double p[3] = {a.x, a.y, a.z};
  const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - p[k]) / d[k];
    double tb = (hi[k] - p[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

SceneSpec scene_spec_from_config(const KeyValueConfig& cfg, SceneSpec s) {
  s.area.x_min = cfg.get_double("area_x_min", s.area.x_min);
  s.area.x_max = cfg.get_double("area_x_max", s.area.x_max);
  s.area.y_min = cfg.get_double("area_y_min", s.area.y_min);
  s.area.y_max = cfg.get_double("area_y_max", s.area.y_max);
  s.bs_position.x = cfg.get_double("bs_x", s.bs_position.x);
  s.bs_position.y = cfg.get_double("bs_y", s.bs_position.y);
  s.bs_position.z = cfg.get_double("bs_z", s.bs_position.z);
  s.ue_height = cfg.get_double("ue_height", s.ue_height);
  s.num_paths = static_cast<int>(cfg.get_int("num_paths", s.num_paths));
  s.carrier_frequency = cfg.get_double("carrier_frequency_hz", s.carrier_frequency);
  s.blockage = cfg.get_bool("blockage", s.blockage);
  s.num_buildings = static_cast<int>(cfg.get_int("num_buildings", s.num_buildings));
  s.building_min_size = cfg.get_double("building_min_size", s.building_min_size);
  s.building_max_size = cfg.get_double("building_max_size", s.building_max_size);
  s.building_min_height = cfg.get_double("building_min_height", s.building_min_height);
  s.building_max_height = cfg.get_double("building_max_height", s.building_max_height);
  s.penetration_loss_db = cfg.get_double("penetration_loss_db", s.penetration_loss_db);
  s.reflection_loss_min_db = cfg.get_double("reflection_loss_min_db", s.reflection_loss_min_db);
  s.reflection_loss_max_db = cfg.get_double("reflection_loss_max_db", s.reflection_loss_max_db);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("scene_seed", static_cast<long long>(s.seed)));
  return s;
}

Scene::Scene(SceneSpec spec) : spec_(spec) {
  const Rect& a = spec_.area;
  if (!(a.x_max > a.x_min) || !(a.y_max > a.y_min)) {
    throw std::invalid_argument("scene area must be nonempty");
  }
  if (spec_.num_paths < 1) throw std::invalid_argument("scene needs at least one path");

  std::mt19937_64 rng(spec_.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const double bs_margin = 10.0;
  int attempts = 0;
  while (static_cast<int>(buildings_.size()) < spec_.num_buildings && attempts < 100 * (spec_.num_buildings + 1)) {
    ++attempts;
    const double w = uniform(spec_.building_min_size, spec_.building_max_size);
    const double d = uniform(spec_.building_min_size, spec_.building_max_size);
    const double cx = uniform(a.x_min, a.x_max);
    const double cy = uniform(a.y_min, a.y_max);
    Building b{{cx - w / 2, cx + w / 2, cy - d / 2, cy + d / 2},
               uniform(spec_.building_min_height, spec_.building_max_height)};
    const Rect guard{b.footprint.x_min - bs_margin, b.footprint.x_max + bs_margin,
                     b.footprint.y_min - bs_margin, b.footprint.y_max + bs_margin};
    if (guard.contains(spec_.bs_position.x, spec_.bs_position.y)) continue;
    buildings_.push_back(b);
  }

  const double pad_x = 0.1 * (a.x_max - a.x_min);
  const double pad_y = 0.1 * (a.y_max - a.y_min);
  for (int i = 0; i + 1 < spec_.num_paths; ++i) {
    Scatterer s;
    s.position = {uniform(a.x_min - pad_x, a.x_max + pad_x),
                  uniform(a.y_min - pad_y, a.y_max + pad_y), uniform(2.0, 20.0)};
    s.loss_db = uniform(spec_.reflection_loss_min_db, spec_.reflection_loss_max_db);
    s.phase = uniform(0.0, 2.0 * std::numbers::pi);
    scatterers_.push_back(s);
  }
}

double Scene::wavelength() const { return kSpeedOfLight / spec_.carrier_frequency; }

bool Scene::clear_segment(const Vec3& a, const Vec3& b) const {
  if (!spec_.blockage) return true;
  for (const auto& bld : buildings_) {
    const double lo[3] = {bld.footprint.x_min, bld.footprint.y_min, 0.0};
    const double hi[3] = {bld.footprint.x_max, bld.footprint.y_max, bld.height};
    if (segment_hits_box(a, b, lo, hi)) return false;
  }
  return true;
}

bool Scene::is_los(const Vec3& ue) const { return clear_segment(spec_.bs_position, ue); }

void direction_angles(const Vec3& from, const Vec3& to, double& elevation, double& azimuth) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double dz = to.z - from.z;
  elevation = std::atan2(std::hypot(dx, dy), dz);
  azimuth = std::atan2(dy, dx);
  if (azimuth >= std::numbers::pi) azimuth -= 2.0 * std::numbers::pi;
}

std::vector<PathComponent> synthesize_paths(const Scene& scene, const Vec3& position) {
  const SceneSpec& spec = scene.spec();
  if (!spec.area.contains(position.x, position.y)) {
    throw std::out_of_range("position outside the scene area");
  }
  const double lambda = scene.wavelength();
  const double k = 2.0 * std::numbers::pi / lambda;
  const Vec3& bs = spec.bs_position;

  std::vector<PathComponent> paths;
  paths.reserve(static_cast<std::size_t>(spec.num_paths));

  if (scene.is_los(position)) {
    const double d = distance(bs, position);
    PathComponent p;
    p.gain = std::polar(lambda / (4.0 * std::numbers::pi * d), -k * d);
    direction_angles(bs, position, p.aod_elevation, p.aod_azimuth);
    direction_angles(position, bs, p.aoa_elevation, p.aoa_azimuth);
    p.delay = d / kSpeedOfLight;
    paths.push_back(p);
  }

  for (const auto& s : scene.scatterers()) {
    const double d1 = distance(bs, s.position);
    const double d2 = distance(s.position, position);
    const double d = d1 + d2;
    double loss_db = s.loss_db;
    if (!scene.clear_segment(bs, s.position)) loss_db += spec.penetration_loss_db;
    if (!scene.clear_segment(s.position, position)) loss_db += spec.penetration_loss_db;
    PathComponent p;
    p.gain = std::polar(lambda / (4.0 * std::numbers::pi * d) * std::pow(10.0, -loss_db / 20.0),
                        s.phase - k * d);
    direction_angles(bs, s.position, p.aod_elevation, p.aod_azimuth);
    direction_angles(position, s.position, p.aoa_elevation, p.aoa_azimuth);
    p.delay = d / kSpeedOfLight;
    paths.push_back(p);
  }
  return paths;
}

ChannelMatrix scene_channel(const Scene& scene, const ArrayGeometry& tx, const ArrayGeometry& rx,
                            const Vec3& position) {
  const double array_gain = std::sqrt(static_cast<double>(tx.elements() * rx.elements()));
  return array_gain * assemble_channel(tx, rx, synthesize_paths(scene, position));
}

GridSpec GridSpec::cover(const Rect& area, double bin_size) {
  if (!(bin_size > 0.0)) throw std::invalid_argument("bin size must be positive");
  GridSpec g;
  g.x_min = area.x_min;
  g.y_min = area.y_min;
  g.bin_size = bin_size;
  g.num_x = std::max(1, static_cast<int>(std::ceil((area.x_max - area.x_min) / bin_size - 1e-9)));
  g.num_y = std::max(1, static_cast<int>(std::ceil((area.y_max - area.y_min) / bin_size - 1e-9)));
  return g;
}

GridSpec::Bin GridSpec::bin_of(double x, double y) const {
  Bin b;
  const auto one = [&](double v, double lo, int n, int& out) {
    const double q = std::floor((v - lo) / bin_size);
    if (q < 0.0) {
      out = 0;
      b.clamped = true;
    } else if (q > n - 1) {
      out = n - 1;
      // The area's far edge sits exactly on the last bin boundary; that is not an escape.
      if (v - lo > n * bin_size) b.clamped = true;
    } else {
      out = static_cast<int>(q);
    }
  };
  one(x, x_min, num_x, b.x);
  one(y, y_min, num_y, b.y);
  return b;
}

BeamDataset BeamDataset::subset(const std::vector<std::size_t>& indices) const {
  BeamDataset out;
  out.grid = grid;
  out.num_f = num_f;
  out.num_w = num_w;
  out.scene_seed = scene_seed;
  out.sample_seed = sample_seed;
  out.samples.reserve(indices.size());
  for (auto i : indices) out.samples.push_back(samples.at(i));
  if (has_channels()) {
    out.channels.reserve(indices.size());
    for (auto i : indices) out.channels.push_back(channels.at(i));
  }
  return out;
}

BeamDataset build_dataset(const Scene& scene, const DatasetOptions& options, const Codebook& cb_tx,
                          const Codebook& cb_rx, const RadioConfig& config) {
  if (options.num_samples < 1) throw std::invalid_argument("dataset needs at least one sample");
  const SceneSpec& spec = scene.spec();
  BeamDataset ds;
  ds.grid = GridSpec::cover(spec.area, options.bin_size);
  ds.num_f = cb_tx.size();
  ds.num_w = cb_rx.size();
  ds.scene_seed = spec.seed;
  ds.sample_seed = options.sample_seed;

  std::mt19937_64 rng(options.sample_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ds.samples.reserve(options.num_samples);
  for (std::size_t t = 0; t < options.num_samples; ++t) {
    LabeledSample s;
    s.position.x = spec.area.x_min + (spec.area.x_max - spec.area.x_min) * unit(rng);
    s.position.y = spec.area.y_min + (spec.area.y_max - spec.area.y_min) * unit(rng);
    s.position.z = spec.ue_height;
    const auto bin = ds.grid.bin_of(s.position.x, s.position.y);
    s.bin_x = bin.x;
    s.bin_y = bin.y;
    ChannelMatrix h = scene_channel(scene, cb_tx.geometry, cb_rx.geometry, s.position);
    s.optimal = exhaustive_search(h, cb_tx, cb_rx, config).best;
    ds.samples.push_back(s);
    if (options.keep_channels) ds.channels.push_back(std::move(h));
  }
  return ds;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> shuffle_split_indices(
    std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n >= 2) n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  n_train = std::min(n_train, n);
  return {std::vector<std::size_t>(perm.begin(), perm.begin() + static_cast<long>(n_train)),
          std::vector<std::size_t>(perm.begin() + static_cast<long>(n_train), perm.end())};
}

std::pair<BeamDataset, BeamDataset> split_shuffle(const BeamDataset& dataset,
                                                  double train_fraction, std::uint64_t seed) {
  const auto [train, test] = shuffle_split_indices(dataset.size(), train_fraction, seed);
  return {dataset.subset(train), dataset.subset(test)};
}

void write_dataset_csv(std::ostream& out, const BeamDataset& ds) {
  char buf[256];
  out << "#format=beamsel-dataset-v1\n";
  std::snprintf(buf, sizeof buf, "#grid=%.17g,%.17g,%.17g,%d,%d\n", ds.grid.x_min, ds.grid.y_min,
                ds.grid.bin_size, ds.grid.num_x, ds.grid.num_y);
  out << buf;
  out << "#codebook=" << ds.num_f << ',' << ds.num_w << '\n';
  out << "#scene_seed=" << ds.scene_seed << '\n';
  out << "#sample_seed=" << ds.sample_seed << '\n';
  out << "x,y,z,i_x,i_y,i_f,i_w\n";
  for (const auto& s : ds.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%d,%d,%d\n", s.position.x, s.position.y,
                  s.position.z, s.bin_x + 1, s.bin_y + 1, s.optimal.f + 1, s.optimal.w + 1);
    out << buf;
  }
}

BeamDataset read_dataset_csv(std::istream& in) {
  BeamDataset ds;
  bool have_grid = false;
  bool have_codebook = false;
  bool have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1);
      const std::string val = line.substr(eq + 1);
      if (key == "grid") {
        if (std::sscanf(val.c_str(), "%lf,%lf,%lf,%d,%d", &ds.grid.x_min, &ds.grid.y_min,
                        &ds.grid.bin_size, &ds.grid.num_x, &ds.grid.num_y) != 5) {
          throw FormatError("dataset: malformed grid metadata");
        }
        have_grid = true;
      } else if (key == "codebook") {
        if (std::sscanf(val.c_str(), "%d,%d", &ds.num_f, &ds.num_w) != 2) {
          throw FormatError("dataset: malformed codebook metadata");
        }
        have_codebook = true;
      } else if (key == "scene_seed") {
        ds.scene_seed = std::stoull(val);
      } else if (key == "sample_seed") {
        ds.sample_seed = std::stoull(val);
      }
      continue;
    }
    if (!have_header) {
      if (line != "x,y,z,i_x,i_y,i_f,i_w") {
        throw FormatError("dataset: unexpected header '" + line + "'");
      }
      have_header = true;
      continue;
    }
    LabeledSample s;
    int ix = 0, iy = 0, f = 0, w = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%d,%d,%d", &s.position.x, &s.position.y,
                    &s.position.z, &ix, &iy, &f, &w) != 7) {
      throw FormatError("dataset line " + std::to_string(lineno) + ": malformed row");
    }
    s.bin_x = ix - 1;
    s.bin_y = iy - 1;
    s.optimal = {f - 1, w - 1};
    ds.samples.push_back(s);
  }
  if (!have_grid || !have_codebook || !have_header) {
    throw FormatError("dataset: missing metadata or header");
  }
  for (const auto& s : ds.samples) {
    if (s.bin_x < 0 || s.bin_x >= ds.grid.num_x || s.bin_y < 0 || s.bin_y >= ds.grid.num_y ||
        s.optimal.f < 0 || s.optimal.f >= ds.num_f || s.optimal.w < 0 || s.optimal.w >= ds.num_w) {
      throw FormatError("dataset: index outside the recorded grid or codebook");
    }
  }
  return ds;
}

void save_dataset_csv(const std::string& path, const BeamDataset& dataset) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  write_dataset_csv(out, dataset);
}

BeamDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_dataset_csv(in);
}

void write_channel_sidecar(std::ostream& out, const std::vector<ChannelMatrix>& channels) {
  out.write("BSCH", 4);
  binio::put<std::uint32_t>(out, 1);
  binio::put<std::uint64_t>(out, channels.size());
  const auto rows = channels.empty() ? 0 : channels.front().rows();
  const auto cols = channels.empty() ? 0 : channels.front().cols();
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(rows));
  binio::put<std::uint32_t>(out, static_cast<std::uint32_t>(cols));
  for (const auto& h : channels) {
    if (h.rows() != rows || h.cols() != cols) {
      throw DimensionError("channel sidecar: all matrices must share one shape");
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        binio::put<double>(out, h(r, c).real());
        binio::put<double>(out, h(r, c).imag());
      }
    }
  }
}

std::vector<ChannelMatrix> read_channel_sidecar(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "BSCH") {
    throw FormatError("channel sidecar: bad magic");
  }
  if (binio::get<std::uint32_t>(in) != 1) throw FormatError("channel sidecar: unsupported version");
  const auto count = binio::get<std::uint64_t>(in);
  const auto rows = binio::get<std::uint32_t>(in);
  const auto cols = binio::get<std::uint32_t>(in);
  if (count > (1ULL << 32) || rows > 4096 || cols > 4096) {
    throw FormatError("channel sidecar: implausible dimensions");
  }
  std::vector<ChannelMatrix> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ChannelMatrix h(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        const double re = binio::get<double>(in);
        const double im = binio::get<double>(in);
        h(r, c) = {re, im};
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace beamsel
