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

#include "beamsel/cpd_pmf.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "beamsel/binary_io.hpp"
#include "beamsel/container.hpp"
#include "beamsel/errors.hpp"

namespace beamsel {

namespace {

void check_shapes(const Eigen::VectorXd& loading,
                  const std::array<Eigen::MatrixXd, kNumVars>& factors) {
  if (loading.size() < 1) throw std::invalid_argument("CPD model needs rank >= 1");
  for (int n = 0; n < kNumVars; ++n) {
    if (factors[n].cols() != loading.size()) {
      throw std::invalid_argument("CPD factor " + std::to_string(n) + " has " +
                                  std::to_string(factors[n].cols()) + " columns, expected " +
                                  std::to_string(loading.size()));
    }
    if (factors[n].rows() < 1) throw std::invalid_argument("CPD factor with zero rows");
  }
}

}  // namespace

CpdPmfModel::CpdPmfModel(Eigen::VectorXd loading, std::array<Eigen::MatrixXd, kNumVars> factors)
    : loading_(std::move(loading)), factors_(std::move(factors)) {
  check_shapes(loading_, factors_);
  if (!loading_.allFinite() || (loading_.array() < 0.0).any() || loading_.sum() <= 0.0) {
    throw std::invalid_argument("CPD loading must be finite, nonnegative and not all zero");
  }
  loading_ /= loading_.sum();
  for (auto& a : factors_) {
    if (!a.allFinite() || (a.array() < 0.0).any()) {
      throw std::invalid_argument("CPD factors must be finite and nonnegative");
    }
    for (Eigen::Index r = 0; r < a.cols(); ++r) {
      const double s = a.col(r).sum();
      if (s <= 0.0) throw std::invalid_argument("CPD factor column with zero mass");
      a.col(r) /= s;
    }
  }
  check_invariants();
}

CpdPmfModel CpdPmfModel::from_normalized(Eigen::VectorXd loading,
                                         std::array<Eigen::MatrixXd, kNumVars> factors) {
  check_shapes(loading, factors);
  CpdPmfModel m;
  m.loading_ = std::move(loading);
  m.factors_ = std::move(factors);
  m.check_invariants();
  return m;
}

CpdPmfModel CpdPmfModel::uniform(const Dims4& dims, int rank) {
  std::array<Eigen::MatrixXd, kNumVars> f;
  for (int n = 0; n < kNumVars; ++n) f[n] = Eigen::MatrixXd::Ones(dims[n], rank);
  return CpdPmfModel(Eigen::VectorXd::Ones(rank), std::move(f));
}

long long CpdPmfModel::free_parameters() const {
  long long count = rank() - 1;
  for (int n = 0; n < kNumVars; ++n) count += static_cast<long long>(rank()) * (dim(n) - 1);
  return count;
}

void CpdPmfModel::check_invariants(double tol) const {
  if (!loading_.allFinite() || (loading_.array() < 0.0).any() ||
      std::abs(loading_.sum() - 1.0) > tol) {
    throw std::invalid_argument("CPD loading is not on the probability simplex");
  }
  for (int n = 0; n < kNumVars; ++n) {
    const auto& a = factors_[n];
    if (!a.allFinite() || (a.array() < 0.0).any()) {
      throw std::invalid_argument("CPD factor has negative or non-finite entries");
    }
    for (Eigen::Index r = 0; r < a.cols(); ++r) {
      if (std::abs(a.col(r).sum() - 1.0) > tol) {
        throw std::invalid_argument("CPD factor column does not sum to one");
      }
    }
  }
}

double evaluate_joint(const CpdPmfModel& model, const Index4& idx) {
  for (int n = 0; n < kNumVars; ++n) {
    if (idx[n] < 0 || idx[n] >= model.dim(n)) {
      throw std::out_of_range("evaluate_joint: index " + std::to_string(idx[n]) +
                              " out of range for variable " + std::to_string(n));
    }
  }
  double p = 0.0;
  for (int r = 0; r < model.rank(); ++r) {
    double term = model.loading()(r);
    for (int n = 0; n < kNumVars; ++n) term *= model.factor(n)(idx[n], r);
    p += term;
  }
  return p;
}

Eigen::MatrixXd beam_scores(const CpdPmfModel& model, int i_x, int i_y) {
  if (i_x < 0 || i_x >= model.dim(kX) || i_y < 0 || i_y >= model.dim(kY)) {
    throw std::out_of_range("beam_scores: position bin out of range");
  }
  // weight_r = lambda_r A_x(i_x, r) A_y(i_y, r); scores = A_f diag(weight) A_w^T
  const Eigen::VectorXd weight = model.loading().cwiseProduct(
      model.factor(kX).row(i_x).transpose().cwiseProduct(model.factor(kY).row(i_y).transpose()));
  return model.factor(kF) * weight.asDiagonal() * model.factor(kW).transpose();
}

Eigen::MatrixXd posterior_over_beams(const CpdPmfModel& model, int i_x, int i_y) {
  Eigen::MatrixXd scores = beam_scores(model, i_x, i_y);
  const double total = scores.sum();
  if (!(total > 0.0)) {
    throw ZeroEvidenceError("position bin (" + std::to_string(i_x + 1) + ", " +
                            std::to_string(i_y + 1) + ") has zero probability under the model");
  }
  return scores / total;
}

Eigen::MatrixXd beam_marginal(const CpdPmfModel& model) {
  return model.factor(kF) * model.loading().asDiagonal() * model.factor(kW).transpose();
}

double DenseTensor4::sum() const {
  double s = 0.0;
  for (double v : data) s += v;
  return s;
}

DenseTensor4 materialize_full_tensor(const CpdPmfModel& model) {
  const Dims4 d = model.dims();
  const double cells = static_cast<double>(d[0]) * d[1] * d[2] * d[3];
  if (cells > static_cast<double>(kMaxDenseCells)) {
    throw std::length_error("materialize_full_tensor: " + std::to_string(cells) +
                            " cells exceeds the dense limit");
  }
  DenseTensor4 t{d, std::vector<double>(static_cast<std::size_t>(cells), 0.0)};
  Index4 i{};
  for (i[0] = 0; i[0] < d[0]; ++i[0])
    for (i[1] = 0; i[1] < d[1]; ++i[1])
      for (i[2] = 0; i[2] < d[2]; ++i[2])
        for (i[3] = 0; i[3] < d[3]; ++i[3]) t(i) = evaluate_joint(model, i);
  return t;
}

double total_variation(const DenseTensor4& p, const DenseTensor4& q) {
  if (p.dims != q.dims) throw DimensionError("total_variation: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < p.data.size(); ++k) s += std::abs(p.data[k] - q.data[k]);
  return 0.5 * s;
}

void save_cpd_model(std::ostream& out, const CpdPmfModel& model) {
  std::ostringstream payload;
  binio::put<std::uint32_t>(payload, static_cast<std::uint32_t>(model.rank()));
  for (int n = 0; n < kNumVars; ++n) {
    binio::put<std::uint32_t>(payload, static_cast<std::uint32_t>(model.dim(n)));
  }
  for (int r = 0; r < model.rank(); ++r) binio::put<double>(payload, model.loading()(r));
  for (int n = 0; n < kNumVars; ++n) {
    const auto& a = model.factor(n);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index r = 0; r < a.cols(); ++r) binio::put<double>(payload, a(i, r));
  }
  write_container(out, ContainerType::kCpdPmf, payload.str());
}

CpdPmfModel load_cpd_model(std::istream& in) {
  std::istringstream payload(read_container(in, ContainerType::kCpdPmf));
  const auto rank = binio::get<std::uint32_t>(payload);
  Dims4 dims{};
  for (int n = 0; n < kNumVars; ++n) dims[n] = static_cast<int>(binio::get<std::uint32_t>(payload));
  if (rank == 0 || rank > 100000) throw FormatError("CPD model: implausible rank");
  Eigen::VectorXd loading(rank);
  for (std::uint32_t r = 0; r < rank; ++r) loading(r) = binio::get<double>(payload);
  std::array<Eigen::MatrixXd, kNumVars> factors;
  for (int n = 0; n < kNumVars; ++n) {
    if (dims[n] <= 0 || dims[n] > 10'000'000) throw FormatError("CPD model: implausible dims");
    factors[n].resize(dims[n], rank);
    for (int i = 0; i < dims[n]; ++i)
      for (std::uint32_t r = 0; r < rank; ++r) factors[n](i, r) = binio::get<double>(payload);
  }
  try {
    return CpdPmfModel::from_normalized(std::move(loading), std::move(factors));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("CPD model: ") + e.what());
  }
}

void save_cpd_model(const std::string& path, const CpdPmfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  save_cpd_model(out, model);
}

CpdPmfModel load_cpd_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return load_cpd_model(in);
}

}  // namespace beamsel
