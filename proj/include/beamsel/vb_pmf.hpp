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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "beamsel/cpd_pmf.hpp"

namespace beamsel {

struct BeamDataset;

/// Discrete observations (i_x, i_y, i_f, i_w), 0-based, with their alphabet sizes.
struct CategoricalData {
  Dims4 dims{};
  std::vector<Index4> rows;
};

CategoricalData to_categorical(const BeamDataset& dataset);

enum class PruneMode {
  kAfterConvergence,
  kEveryIteration,
};

struct VbHyperparams {
  double alpha_lambda = 1e-6;
  double alpha_factor = 1.0;
  int r_init = 30;
  int max_iters = 500;
  double elbo_rel_tol = 1e-7;
  /// Posterior-mean loading below which a component is dropped; unset means 1 / (10 T).
  std::optional<double> prune_threshold;
  PruneMode prune_mode = PruneMode::kAfterConvergence;
  int refine_iters = 10;
  std::uint64_t rng_seed = 1;

  double threshold_for(std::size_t num_samples) const;
};

/// Mean-field state: q(lambda) = Dir(dirichlet_lambda), q(A_n(:, r)) = Dir(dirichlet_factors[n].col(r)),
/// q(z_t) = Cat(responsibilities.row(t)).
struct VbPosterior {
  Eigen::VectorXd dirichlet_lambda;
  std::array<Eigen::MatrixXd, kNumVars> dirichlet_factors;
  Eigen::MatrixXd responsibilities;  // T x R, rows sum to one

  int rank() const { return static_cast<int>(dirichlet_lambda.size()); }
};

/// Digamma-based expectations E[ln lambda_r] and E[ln A_n(i, r)].
struct ExpectedLogs {
  Eigen::VectorXd log_lambda;
  std::array<Eigen::MatrixXd, kNumVars> log_factors;
};

ExpectedLogs expected_logs(const VbPosterior& posterior);

/// r_{t,r} proportional to exp(E[ln lambda_r] + sum_n E[ln A_n(i_{n,t}, r)]), normalized in the
/// log domain.
Eigen::MatrixXd update_responsibilities(const CategoricalData& data, const VbPosterior& posterior);

/// Conjugate updates from the current responsibilities:
/// lambda_r = alpha_lambda + sum_t r_{t,r}; factors[n](i, r) = alpha_factor + sum_{t: i_{n,t} = i} r_{t,r}.
void update_dirichlets(const CategoricalData& data, const VbHyperparams& hyper,
                       VbPosterior& posterior);

/// E_q[ln p(D, Z, lambda, A)] - E_q[ln q(Z, lambda, A)].
double elbo(const CategoricalData& data, const VbPosterior& posterior, const VbHyperparams& hyper);

/// Posterior means as a CPD model.
CpdPmfModel posterior_mean_model(const VbPosterior& posterior);

struct VbFitResult {
  CpdPmfModel model;
  VbPosterior posterior;
  std::vector<double> elbo_trace;
  std::vector<int> active_trace;
  int rank = 0;
  int iterations = 0;
  bool converged = false;
};

/// Coordinate-ascent fit with automatic rank pruning. Throws std::invalid_argument on an empty
/// or out-of-range dataset and NumericalFault on a non-finite ELBO.
VbFitResult fit(const CategoricalData& data, const VbHyperparams& hyper);
VbFitResult fit(const BeamDataset& dataset, const VbHyperparams& hyper);

/// iteration,elbo,active_components
void write_elbo_csv(std::ostream& out, const VbFitResult& result);

}  // namespace beamsel
