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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beamsel/beam_select.hpp"
#include "beamsel/container.hpp"
#include "beamsel/cpd_pmf.hpp"
#include "beamsel/errors.hpp"
#include "beamsel/experiment.hpp"
#include "beamsel/fingerprint.hpp"
#include "beamsel/metrics.hpp"
#include "beamsel/mlp.hpp"
#include "beamsel/vb_pmf.hpp"

namespace fs = std::filesystem;
using namespace beamsel;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config_path, "key = value configuration file");
  app->add_option("--set", c.overrides, "override a configuration key (key=value), repeatable");
}

KeyValueConfig load_config(const Common& c) {
  KeyValueConfig cfg = c.config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  if (path.empty() || path == "-") return {};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string sidecar_path(const std::string& csv) { return csv + ".channels"; }

BeamDataset load_with_channels(const std::string& path, bool need_channels,
                               const ExperimentSpec& spec) {
  BeamDataset ds = load_dataset_csv(path);
  if (!need_channels) return ds;
  const std::string side = sidecar_path(path);
  if (fs::exists(side)) {
    std::ifstream in(side, std::ios::binary);
    ds.channels = read_channel_sidecar(in);
    if (ds.channels.size() != ds.size()) {
      throw FormatError("channel sidecar '" + side + "' does not match the dataset");
    }
  } else {
    if (ds.scene_seed != spec.scene.seed) {
      throw std::invalid_argument("no channel sidecar and the configured scene_seed (" +
                                  std::to_string(spec.scene.seed) +
                                  ") differs from the dataset's (" +
                                  std::to_string(ds.scene_seed) + ")");
    }
    const Scene scene(spec.scene);
    for (const auto& s : ds.samples) {
      ds.channels.push_back(scene_channel(scene, spec.tx, spec.rx, s.position));
    }
  }
  return ds;
}

// Ranker around a saved model file; the type is read from the container header.
Ranker load_ranker(const std::string& path, const GridSpec& grid, std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  switch (peek_container_type(in)) {
    case ContainerType::kCpdPmf: {
      kind = "pmf";
      auto model = std::make_shared<const CpdPmfModel>(load_cpd_model(in));
      if (model->dim(kX) != grid.num_x || model->dim(kY) != grid.num_y) {
        throw DimensionError("model grid " + std::to_string(model->dim(kX)) + "x" +
                             std::to_string(model->dim(kY)) + " does not match the configured grid " +
                             std::to_string(grid.num_x) + "x" + std::to_string(grid.num_y));
      }
      return [model, grid](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        const auto bin = grid.bin_of(p.x, p.y);
        if (bin.clamped) std::clog << "warning: position outside the grid, clamped\n";
        return top_n(*model, bin.x, bin.y, n_b, SelectOptions{true});
      };
    }
    case ContainerType::kFingerprint: {
      kind = "fingerprint";
      auto db = std::make_shared<const FingerprintDatabase>(load_fingerprint(in));
      return [db, grid](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        const auto bin = grid.bin_of(p.x, p.y);
        return fingerprint_top_n(*db, bin.x, bin.y, n_b);
      };
    }
    case ContainerType::kMlp: {
      kind = "mlp";
      auto model = std::make_shared<const MlpModel>(load_mlp(in));
      return [model](const Vec3& p, const Eigen::MatrixXd&, int n_b) {
        return mlp_top_n(*model, p, n_b);
      };
    }
  }
  throw FormatError("unknown model type in '" + path + "'");
}

std::vector<Vec3> read_positions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<Vec3> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("x,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    Vec3 p;
    if (!(row >> p.x >> p.y >> p.z)) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected x,y,z");
    }
    out.push_back(p);
  }
  return out;
}

int run_generate(const Common& common, const std::string& out_path, bool channels,
                 std::uint64_t seed) {
  auto cfg = load_config(common);
  ExperimentSpec spec = experiment_spec_from_config(cfg);
  spec.dataset.sample_seed = seed;
  spec.dataset.keep_channels = channels;
  const Scene scene(spec.scene);
  const auto ds = build_dataset(scene, spec.dataset, build_dft_codebook(spec.tx),
                                build_dft_codebook(spec.rx), spec.radio);
  save_dataset_csv(out_path, ds);
  if (channels) {
    std::ofstream side(sidecar_path(out_path), std::ios::binary);
    write_channel_sidecar(side, ds.channels);
  }
  std::cerr << "wrote " << ds.size() << " samples to " << out_path << "\n";
  return 0;
}

int run_train(const Common& common, const std::string& method_str, const std::string& data_path,
              const std::string& out_path, const std::string& elbo_path, std::uint64_t seed) {
  auto cfg = load_config(common);
  const ExperimentSpec spec = experiment_spec_from_config(cfg);
  const BeamDataset ds = load_dataset_csv(data_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  switch (parse_method(method_str)) {
    case Method::kPmf: {
      VbHyperparams hyper = spec.vb;
      hyper.rng_seed = seed;
      const auto res = fit(ds, hyper);
      save_cpd_model(out, res.model);
      if (!elbo_path.empty()) {
        std::ofstream e(elbo_path);
        write_elbo_csv(e, res);
      }
      std::cerr << "rank " << res.rank << " after " << res.iterations << " iterations"
                << (res.converged ? "" : " (not converged)") << "\n";
      break;
    }
    case Method::kFingerprint:
      save_fingerprint(out, fingerprint_train(ds));
      break;
    case Method::kMlp: {
      MlpHyperparams hyper = spec.mlp;
      hyper.seed = seed;
      const auto res = mlp_train(ds, hyper);
      save_mlp(out, res.model);
      std::cerr << "loss " << res.initial_loss << " -> " << res.epoch_loss.back() << "\n";
      break;
    }
    case Method::kOracle:
      throw std::invalid_argument("the oracle needs no training");
  }
  return 0;
}

int run_predict(const Common& common, const std::string& model_path,
                const std::string& positions_path, int n_b, const std::string& out_path) {
  auto cfg = load_config(common);
  const ExperimentSpec spec = experiment_spec_from_config(cfg);
  const GridSpec grid = GridSpec::cover(spec.scene.area, spec.dataset.bin_size);
  std::string kind;
  const Ranker ranker = load_ranker(model_path, grid, kind);
  const Eigen::MatrixXd unused;
  auto file = open_out(out_path);
  std::ostream& out = file.is_open() ? file : std::cout;
  out << "sample,rank,i_f,i_w,score\n";
  char buf[128];
  const auto positions = read_positions(positions_path);
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const auto cands = ranker(positions[t], unused, n_b);
    for (std::size_t k = 0; k < cands.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%d,%d,%.17g\n", t + 1, k + 1, cands.pairs[k].f + 1,
                    cands.pairs[k].w + 1, cands.scores[k]);
      out << buf;
    }
  }
  return 0;
}

int run_evaluate(const Common& common, const std::vector<std::string>& model_paths,
                 const std::string& data_path, std::vector<int> nb_values,
                 const std::string& out_path) {
  auto cfg = load_config(common);
  const ExperimentSpec spec = experiment_spec_from_config(cfg);
  if (nb_values.empty()) nb_values = spec.nb_sweep;
  const BeamDataset ds = load_with_channels(data_path, true, spec);
  const auto eval = make_evaluation_set(ds, build_dft_codebook(spec.tx),
                                        build_dft_codebook(spec.rx), spec.radio);
  auto file = open_out(out_path);
  std::ostream& out = file.is_open() ? file : std::cout;
  out << "model,method,n_b,power_loss_0db,power_loss_3db,mean_rate,normalized_rate\n";
  char buf[512];
  for (const auto& path : model_paths) {
    std::string kind;
    Ranker ranker;
    if (path == "oracle") {
      kind = "oracle";
      ranker = train_method(Method::kOracle, ds, spec, 0);
    } else {
      ranker = load_ranker(path, ds.grid, kind);
    }
    for (const auto& r : evaluate_ranker(ranker, eval, nb_values, spec.radio)) {
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.17g,%.17g,%.17g,%.17g\n", path.c_str(),
                    kind.c_str(), r.n_b, r.power_loss_0db, r.power_loss_3db, r.mean_rate,
                    r.normalized_rate);
      out << buf;
    }
  }
  return 0;
}

int run_sweep(const Common& common, const std::string& out_dir, const std::string& data_path,
              std::uint64_t seed, int trials, int threads, bool plots, bool full_scale,
              bool quiet) {
  auto cfg = load_config(common);
  ExperimentSpec spec = experiment_spec_from_config(cfg);
  spec.base_seed = seed;
  if (full_scale) spec.train_sweep_trials = 1000;
  if (trials > 0) {
    spec.trials = trials;
    spec.train_sweep_trials = trials;
  }
  if (threads > 0) spec.threads = threads;
  BeamDataset ds;
  const BeamDataset* dataset = nullptr;
  if (!data_path.empty()) {
    ds = load_with_channels(data_path, true, spec);
    dataset = &ds;
  }
  fs::create_directories(out_dir);
  ProgressFn progress;
  if (!quiet) progress = [](const std::string& msg) { std::cerr << msg << "\n"; };
  const auto result = run_experiment(spec, dataset, progress);
  {
    std::ofstream out(fs::path(out_dir) / "trials.csv", std::ios::binary);
    write_trials_csv(out, result);
  }
  {
    std::ofstream out(fs::path(out_dir) / "aggregate.csv", std::ios::binary);
    write_aggregate_csv(out, result);
  }
  if (plots) write_plots_svg((fs::path(out_dir) / "fig").string(), result);
  std::cerr << "wrote " << (fs::path(out_dir) / "trials.csv").string() << " and aggregate.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamsel: position-aided beam selection for mmWave MIMO"};
  app.require_subcommand(1);

  Common gen_common;
  std::string gen_out = "dataset.csv";
  bool gen_channels = false;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate", "build the synthetic scene and a labeled dataset");
  add_common(gen, gen_common);
  gen->add_option("-o,--out", gen_out, "dataset CSV");
  gen->add_flag("--channels", gen_channels, "also write <out>.channels with the raw channels");
  gen->add_option("--seed", gen_seed, "sample-position seed")->capture_default_str();

  Common train_common;
  std::string train_method_str = "pmf", train_data, train_out = "model.bsel", train_elbo;
  std::uint64_t train_seed = 1;
  auto* train = app.add_subcommand("train", "fit a model on a dataset CSV");
  add_common(train, train_common);
  train->add_option("-m,--method", train_method_str, "pmf, fingerprint or mlp")->capture_default_str();
  train->add_option("-d,--data", train_data, "training dataset CSV")->required();
  train->add_option("-o,--out", train_out, "model file")->capture_default_str();
  train->add_option("--elbo", train_elbo, "write the ELBO trace (pmf only)");
  train->add_option("--seed", train_seed, "initialization seed")->capture_default_str();

  Common pred_common;
  std::string pred_model, pred_positions, pred_out;
  int pred_nb = 6;
  auto* pred = app.add_subcommand("predict", "rank beam pairs for positions (x,y,z per line)");
  add_common(pred, pred_common);
  pred->add_option("--model", pred_model, "model file")->required();
  pred->add_option("-p,--positions", pred_positions, "positions CSV")->required();
  pred->add_option("--nb", pred_nb, "candidate list length")->capture_default_str();
  pred->add_option("-o,--out", pred_out, "candidates CSV (default stdout)");
  std::uint64_t pred_seed = 1;
  pred->add_option("--seed", pred_seed, "unused; accepted for uniformity");

  Common eval_common;
  std::vector<std::string> eval_models;
  std::string eval_data, eval_out;
  std::vector<int> eval_nb;
  std::uint64_t eval_seed = 1;
  auto* evaluate = app.add_subcommand("evaluate", "metrics of saved models on a labeled dataset");
  add_common(evaluate, eval_common);
  evaluate->add_option("--model", eval_models, "model file or 'oracle', repeatable")->required();
  evaluate->add_option("-d,--data", eval_data, "test dataset CSV")->required();
  evaluate->add_option("--nb", eval_nb, "candidate list lengths (default: nb_sweep)");
  evaluate->add_option("-o,--out", eval_out, "metrics CSV (default stdout)");
  evaluate->add_option("--seed", eval_seed, "unused; accepted for uniformity");

  Common sweep_common;
  std::string sweep_dir = "results", sweep_data;
  std::uint64_t sweep_seed = 42;
  int sweep_trials = 0, sweep_threads = 0;
  bool sweep_plots = false, sweep_full = false, sweep_quiet = false;
  auto* sweep = app.add_subcommand("sweep", "full shuffle/train/evaluate protocol");
  add_common(sweep, sweep_common);
  sweep->add_option("-o,--out-dir", sweep_dir, "output directory")->capture_default_str();
  sweep->add_option("-d,--data", sweep_data, "use this dataset instead of generating one");
  sweep->add_option("--seed", sweep_seed, "base seed; trial t uses seed + t")->capture_default_str();
  sweep->add_option("--trials", sweep_trials, "trials for both sweeps");
  sweep->add_option("--threads", sweep_threads, "worker threads");
  sweep->add_flag("--plots", sweep_plots, "write SVG panels");
  sweep->add_flag("--full-scale", sweep_full, "1000 trials for the training-size sweep");
  sweep->add_flag("-q,--quiet", sweep_quiet, "no progress output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return run_generate(gen_common, gen_out, gen_channels, gen_seed);
    if (*train) {
      return run_train(train_common, train_method_str, train_data, train_out, train_elbo,
                       train_seed);
    }
    if (*pred) return run_predict(pred_common, pred_model, pred_positions, pred_nb, pred_out);
    if (*evaluate) return run_evaluate(eval_common, eval_models, eval_data, eval_nb, eval_out);
    if (*sweep) {
      return run_sweep(sweep_common, sweep_dir, sweep_data, sweep_seed, sweep_trials,
                       sweep_threads, sweep_plots, sweep_full, sweep_quiet);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
