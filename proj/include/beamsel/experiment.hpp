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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamsel/codebook.hpp"
#include "beamsel/config.hpp"
#include "beamsel/mlp.hpp"
#include "beamsel/scene.hpp"
#include "beamsel/vb_pmf.hpp"

namespace beamsel {

enum class Method {
  kPmf,          // low-rank PMF + MAP ranking
  kFingerprint,  // inverse fingerprinting
  kMlp,          // neural network classifier
  kOracle,       // exhaustive search (reference)
};

std::string method_name(Method m);
/// Accepts pmf, fingerprint, mlp, oracle. Throws std::invalid_argument otherwise.
Method parse_method(const std::string& name);

struct ExperimentSpec {
  SceneSpec scene;
  ArrayGeometry tx{8, 8, 0.5, 0.5};
  ArrayGeometry rx{2, 2, 0.5, 0.5};
  RadioConfig radio = default_radio_config();
  DatasetOptions dataset;
  double train_fraction = 0.8;
  std::vector<Method> methods{Method::kPmf, Method::kFingerprint, Method::kMlp};
  std::vector<int> nb_sweep{1, 2, 4, 6, 8, 12, 16, 24, 32};
  int trials = 50;
  /// Training-set sizes for the data-efficiency sweep; empty disables it.
  std::vector<int> train_sizes{80, 160, 320, 640, 1600};
  int train_sweep_nb = 16;
  int train_sweep_trials = 50;
  std::vector<Method> train_sweep_methods{Method::kPmf, Method::kFingerprint, Method::kMlp};
  std::uint64_t base_seed = 42;
  VbHyperparams vb;
  MlpHyperparams mlp;
  int threads = 1;

  void validate() const;
};

/// Reads the documented keys (see README) on top of `base`.
ExperimentSpec experiment_spec_from_config(const KeyValueConfig& cfg, ExperimentSpec base = {});

struct TrialResult {
  Method method = Method::kPmf;
  int trial = 0;
  std::uint64_t seed = 0;
  int train_size = 0;
  int n_b = 0;
  double power_loss_0db = 0.0;
  double power_loss_3db = 0.0;
  double mean_rate = 0.0;
  double normalized_rate = 0.0;
  int rank = 0;  // detected CPD rank for the PMF method, 0 otherwise
};

struct ExperimentResult {
  std::vector<TrialResult> nb_sweep;     // full training split, every n_b
  std::vector<TrialResult> train_sweep;  // train_sweep_nb, every train size
};

/// Test split with its precomputed noiseless RSS tables.
struct EvaluationSet {
  std::vector<Vec3> positions;
  std::vector<Eigen::MatrixXd> rss_tables;
  std::vector<double> optimal_rates;
};

EvaluationSet make_evaluation_set(const BeamDataset& test, const Codebook& cb_tx,
                                  const Codebook& cb_rx, const RadioConfig& config);

/// Ranks candidates for one test sample. Only the oracle reads the RSS table.
using Ranker =
    std::function<CandidateList(const Vec3& position, const Eigen::MatrixXd& rss_table, int n_b)>;

/// Metrics for each n_b in `nb_values` from one ranking pass at the largest n_b. Candidate lists of
/// a smaller n_b are prefixes of the longest one.
std::vector<TrialResult> evaluate_ranker(const Ranker& ranker, const EvaluationSet& eval,
                                         const std::vector<int>& nb_values,
                                         const RadioConfig& config);

/// Trains `method` on `train` and returns its ranker. `rank_out` receives the detected CPD rank.
Ranker train_method(Method method, const BeamDataset& train, const ExperimentSpec& spec,
                    std::uint64_t seed, int* rank_out = nullptr);

using ProgressFn = std::function<void(const std::string&)>;

/// Shuffle/split/train/evaluate for every trial. When `dataset` is null it is generated from
/// the spec. Trial t uses seed base_seed + t; output order is by trial regardless of scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec, const BeamDataset* dataset = nullptr,
                                const ProgressFn& progress = {});

struct AggregateRow {
  Method method = Method::kPmf;
  int train_size = 0;
  int n_b = 0;
  int trials = 0;
  double power_loss_0db = 0.0;
  double power_loss_0db_se = 0.0;  // standard error of the mean over trials
  double power_loss_3db = 0.0;
  double mean_rate = 0.0;
  double normalized_rate = 0.0;
  double mean_rank = 0.0;
};

/// Means over trials grouped by (method, train_size, n_b), in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& rows);

void write_trials_csv(std::ostream& out, const ExperimentResult& result);
void write_aggregate_csv(std::ostream& out, const ExperimentResult& result);

/// Three panels as standalone SVG files: <prefix>_power_loss.svg, <prefix>_rate.svg and
/// <prefix>_train_size.svg (the last only when a train sweep ran).
void write_plots_svg(const std::string& prefix, const ExperimentResult& result);

}  // namespace beamsel
