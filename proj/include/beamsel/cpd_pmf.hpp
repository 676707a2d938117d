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
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace beamsel {

/// Variables of the joint PMF: x bin, y bin, precoder index, combiner index.
enum Var : int { kX = 0, kY = 1, kF = 2, kW = 3 };
inline constexpr int kNumVars = 4;

using Dims4 = std::array<int, kNumVars>;
using Index4 = std::array<int, kNumVars>;

/// Low-rank joint PMF: P(i_x, i_y, i_f, i_w) = sum_r loading_r prod_n factors[n](i_n, r).
///
/// Read as a naive Bayes model, loading is the prior of a hidden state and column r of each
/// factor is the conditional PMF of that variable given the state. All indices are 0-based.
class CpdPmfModel {
 public:
  CpdPmfModel() = default;
  /// Validates and renormalizes (columns and loading) before storing.
  CpdPmfModel(Eigen::VectorXd loading, std::array<Eigen::MatrixXd, kNumVars> factors);

  static CpdPmfModel uniform(const Dims4& dims, int rank);
  /// Stores the parameters untouched after checking the invariants (used by the loader so that
  /// a round trip is bit-exact).
  static CpdPmfModel from_normalized(Eigen::VectorXd loading,
                                     std::array<Eigen::MatrixXd, kNumVars> factors);

  int rank() const { return static_cast<int>(loading_.size()); }
  int dim(int n) const { return static_cast<int>(factors_[n].rows()); }
  Dims4 dims() const { return {dim(0), dim(1), dim(2), dim(3)}; }
  const Eigen::VectorXd& loading() const { return loading_; }
  const Eigen::MatrixXd& factor(int n) const { return factors_[n]; }

  /// (R - 1) + sum_n R (I_n - 1).
  long long free_parameters() const;

  /// Throws std::invalid_argument unless all simplex constraints hold within tol.
  void check_invariants(double tol = 1e-10) const;

 private:
  Eigen::VectorXd loading_;
  std::array<Eigen::MatrixXd, kNumVars> factors_;
};

double evaluate_joint(const CpdPmfModel& model, const Index4& idx);

/// Unnormalized conditional scores over (f, w) for one position bin, I_f x I_w.
Eigen::MatrixXd beam_scores(const CpdPmfModel& model, int i_x, int i_y);

/// P(f, w | x, y), I_f x I_w, sums to 1. Throws ZeroEvidenceError when the bin has no mass.
Eigen::MatrixXd posterior_over_beams(const CpdPmfModel& model, int i_x, int i_y);

/// Marginal P(f, w), I_f x I_w.
Eigen::MatrixXd beam_marginal(const CpdPmfModel& model);

/// Row-major dense 4-way array, last index fastest.
struct DenseTensor4 {
  Dims4 dims{};
  std::vector<double> data;

  std::size_t offset(const Index4& i) const {
    return ((static_cast<std::size_t>(i[0]) * dims[1] + i[1]) * dims[2] + i[2]) * dims[3] + i[3];
  }
  double operator()(const Index4& i) const { return data[offset(i)]; }
  double& operator()(const Index4& i) { return data[offset(i)]; }
  double sum() const;
};

inline constexpr std::size_t kMaxDenseCells = 1'000'000;

/// Throws std::length_error beyond kMaxDenseCells cells.
DenseTensor4 materialize_full_tensor(const CpdPmfModel& model);

/// Total-variation distance 0.5 * sum |p - q|.
double total_variation(const DenseTensor4& p, const DenseTensor4& q);

void save_cpd_model(std::ostream& out, const CpdPmfModel& model);
CpdPmfModel load_cpd_model(std::istream& in);
void save_cpd_model(const std::string& path, const CpdPmfModel& model);
CpdPmfModel load_cpd_model(const std::string& path);

}  // namespace beamsel
