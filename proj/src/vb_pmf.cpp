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

#include "beamsel/vb_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "beamsel/errors.hpp"
#include "beamsel/scene.hpp"
#include "beamsel/special.hpp"

namespace beamsel {

CategoricalData to_categorical(const BeamDataset& dataset) {
  CategoricalData data;
  data.dims = {dataset.grid.num_x, dataset.grid.num_y, dataset.num_f, dataset.num_w};
  data.rows.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    data.rows.push_back({s.bin_x, s.bin_y, s.optimal.f, s.optimal.w});
  }
  return data;
}

double VbHyperparams::threshold_for(std::size_t num_samples) const {
  if (prune_threshold) return *prune_threshold;
  return 1.0 / (10.0 * static_cast<double>(std::max<std::size_t>(num_samples, 1)));
}

ExpectedLogs expected_logs(const VbPosterior& q) {
  ExpectedLogs e;
  const double psi_total = digamma(q.dirichlet_lambda.sum());
  e.log_lambda = q.dirichlet_lambda.unaryExpr([](double a) { return digamma(a); }).array() -
                 psi_total;
  for (int n = 0; n < kNumVars; ++n) {
    const auto& b = q.dirichlet_factors[n];
    e.log_factors[n] = b.unaryExpr([](double v) { return digamma(v); });
    for (Eigen::Index r = 0; r < b.cols(); ++r) {
      e.log_factors[n].col(r).array() -= digamma(b.col(r).sum());
    }
  }
  return e;
}

Eigen::MatrixXd update_responsibilities(const CategoricalData& data, const VbPosterior& q) {
  const ExpectedLogs e = expected_logs(q);
  const int rank = q.rank();
  Eigen::MatrixXd resp(static_cast<Eigen::Index>(data.rows.size()), rank);
  Eigen::VectorXd s(rank);
  for (std::size_t t = 0; t < data.rows.size(); ++t) {
    const Index4& idx = data.rows[t];
    for (int r = 0; r < rank; ++r) {
      double v = e.log_lambda(r);
      for (int n = 0; n < kNumVars; ++n) v += e.log_factors[n](idx[n], r);
      s(r) = v;
    }
    const double m = s.maxCoeff();
    double total = 0.0;
    for (int r = 0; r < rank; ++r) {
      s(r) = std::exp(s(r) - m);
      total += s(r);
    }
    resp.row(static_cast<Eigen::Index>(t)) = s.transpose() / total;
  }
  return resp;
}

void update_dirichlets(const CategoricalData& data, const VbHyperparams& hyper, VbPosterior& q) {
  const auto rank = q.responsibilities.cols();
  q.dirichlet_lambda = Eigen::VectorXd::Constant(rank, hyper.alpha_lambda);
  for (int n = 0; n < kNumVars; ++n) {
    q.dirichlet_factors[n] = Eigen::MatrixXd::Constant(data.dims[n], rank, hyper.alpha_factor);
  }
  for (std::size_t t = 0; t < data.rows.size(); ++t) {
    const auto row = q.responsibilities.row(static_cast<Eigen::Index>(t));
    q.dirichlet_lambda += row.transpose();
    for (int n = 0; n < kNumVars; ++n) q.dirichlet_factors[n].row(data.rows[t][n]) += row;
  }
}

double elbo(const CategoricalData& data, const VbPosterior& q, const VbHyperparams& hyper) {
  const ExpectedLogs e = expected_logs(q);
  const int rank = q.rank();
  double value = 0.0;

  // E[ln p(D | Z, A)] + E[ln p(Z | lambda)] - E[ln q(Z)]
  for (std::size_t t = 0; t < data.rows.size(); ++t) {
    const Index4& idx = data.rows[t];
    for (int r = 0; r < rank; ++r) {
      const double rho = q.responsibilities(static_cast<Eigen::Index>(t), r);
      if (rho <= 0.0) continue;
      double v = e.log_lambda(r) - std::log(rho);
      for (int n = 0; n < kNumVars; ++n) v += e.log_factors[n](idx[n], r);
      value += rho * v;
    }
  }

  // E[ln p(lambda)] - E[ln q(lambda)]
  const double a0 = hyper.alpha_lambda;
  value += std::lgamma(rank * a0) - rank * std::lgamma(a0) - std::lgamma(q.dirichlet_lambda.sum());
  for (int r = 0; r < rank; ++r) {
    const double a = q.dirichlet_lambda(r);
    value += std::lgamma(a) + (a0 - a) * e.log_lambda(r);
  }

  // E[ln p(A)] - E[ln q(A)]
  const double b0 = hyper.alpha_factor;
  for (int n = 0; n < kNumVars; ++n) {
    const auto& b = q.dirichlet_factors[n];
    const double prior_norm = std::lgamma(data.dims[n] * b0) - data.dims[n] * std::lgamma(b0);
    for (int r = 0; r < rank; ++r) {
      value += prior_norm - std::lgamma(b.col(r).sum());
      for (Eigen::Index i = 0; i < b.rows(); ++i) {
        value += std::lgamma(b(i, r)) + (b0 - b(i, r)) * e.log_factors[n](i, r);
      }
    }
  }
  return value;
}

CpdPmfModel posterior_mean_model(const VbPosterior& q) {
  std::array<Eigen::MatrixXd, kNumVars> factors;
  for (int n = 0; n < kNumVars; ++n) factors[n] = q.dirichlet_factors[n];
  return CpdPmfModel(q.dirichlet_lambda, std::move(factors));
}

namespace {

void validate(const CategoricalData& data, const VbHyperparams& hyper) {
  if (data.rows.empty()) throw std::invalid_argument("VB fit: empty dataset");
  if (hyper.r_init < 1) throw std::invalid_argument("VB fit: r_init must be >= 1");
  if (!(hyper.alpha_lambda > 0.0) || !(hyper.alpha_factor > 0.0)) {
    throw std::invalid_argument("VB fit: Dirichlet concentrations must be positive");
  }
  for (int n = 0; n < kNumVars; ++n) {
    if (data.dims[n] < 1) throw std::invalid_argument("VB fit: empty alphabet");
  }
  for (const auto& row : data.rows) {
    for (int n = 0; n < kNumVars; ++n) {
      if (row[n] < 0 || row[n] >= data.dims[n]) {
        throw std::invalid_argument("VB fit: sample index outside the alphabet of variable " +
                                    std::to_string(n));
      }
    }
  }
}

double checked(double value, int iteration) {
  if (!std::isfinite(value)) {
    throw NumericalFault("VB fit: non-finite ELBO at iteration " + std::to_string(iteration));
  }
  return value;
}

// Drops components whose posterior-mean loading is below the threshold. The heaviest component
// always survives. Returns true when something was removed.
bool prune(const CategoricalData& data, const VbHyperparams& hyper, double threshold,
           VbPosterior& q) {
  const Eigen::VectorXd mean = q.dirichlet_lambda / q.dirichlet_lambda.sum();
  Eigen::Index heaviest = 0;
  mean.maxCoeff(&heaviest);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < mean.size(); ++r) {
    if (r == heaviest || mean(r) >= threshold) keep.push_back(r);
  }
  if (static_cast<Eigen::Index>(keep.size()) == mean.size()) return false;

  Eigen::MatrixXd resp(q.responsibilities.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    resp.col(static_cast<Eigen::Index>(k)) = q.responsibilities.col(keep[k]);
  }
  for (Eigen::Index t = 0; t < resp.rows(); ++t) {
    const double s = resp.row(t).sum();
    if (s > 0.0) {
      resp.row(t) /= s;
    } else {
      resp.row(t).setConstant(1.0 / static_cast<double>(resp.cols()));
    }
  }
  q.responsibilities = std::move(resp);
  update_dirichlets(data, hyper, q);
  return true;
}

}  // namespace

VbFitResult fit(const CategoricalData& data, const VbHyperparams& hyper) {
  validate(data, hyper);
  const auto num_samples = static_cast<Eigen::Index>(data.rows.size());
  const double threshold = hyper.threshold_for(data.rows.size());

  VbPosterior q;
  {
    // Symmetric Dirichlet(1) rows: normalized unit exponentials.
    std::mt19937_64 rng(hyper.rng_seed);
    std::exponential_distribution<double> expo(1.0);
    q.responsibilities.resize(num_samples, hyper.r_init);
    for (Eigen::Index t = 0; t < num_samples; ++t) {
      for (int r = 0; r < hyper.r_init; ++r) q.responsibilities(t, r) = expo(rng);
      q.responsibilities.row(t) /= q.responsibilities.row(t).sum();
    }
  }
  update_dirichlets(data, hyper, q);

  VbFitResult result;
  auto record = [&](int iteration) {
    result.elbo_trace.push_back(checked(elbo(data, q, hyper), iteration));
    result.active_trace.push_back(q.rank());
  };
  auto cycle = [&](int iteration) {
    q.responsibilities = update_responsibilities(data, q);
    update_dirichlets(data, hyper, q);
    record(iteration);
  };

  record(0);
  int iteration = 0;
  while (iteration < hyper.max_iters) {
    ++iteration;
    cycle(iteration);
    const double prev = result.elbo_trace[result.elbo_trace.size() - 2];
    const double curr = result.elbo_trace.back();
    const bool settled = std::abs(curr - prev) <= hyper.elbo_rel_tol * std::abs(prev);
    if (hyper.prune_mode == PruneMode::kEveryIteration && prune(data, hyper, threshold, q)) {
      record(iteration);
      continue;
    }
    if (settled) {
      result.converged = true;
      break;
    }
  }

  if (prune(data, hyper, threshold, q)) {
    record(iteration);
    for (int k = 0; k < hyper.refine_iters; ++k) cycle(++iteration);
  }

  result.iterations = iteration;
  result.rank = q.rank();
  result.model = posterior_mean_model(q);
  result.posterior = std::move(q);
  return result;
}

VbFitResult fit(const BeamDataset& dataset, const VbHyperparams& hyper) {
  return fit(to_categorical(dataset), hyper);
}

void write_elbo_csv(std::ostream& out, const VbFitResult& result) {
  out << "iteration,elbo,active_components\n";
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < result.elbo_trace.size(); ++k) {
    out << k << ',' << result.elbo_trace[k] << ',' << result.active_trace[k] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace beamsel
