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

#include "beamsel/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "beamsel/binary_io.hpp"
#include "beamsel/container.hpp"
#include "beamsel/errors.hpp"

namespace beamsel {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// Column-wise softmax, in place.
void softmax_columns(Eigen::MatrixXd& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    auto col = z.col(c);
    col.array() = (col.array() - col.maxCoeff()).exp();
    col /= col.sum();
  }
}

// Activations of every layer; front() is the input, back() the softmax output.
std::vector<Eigen::MatrixXd> forward_all(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(model.layers.size() + 1);
  acts.push_back(inputs);
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    Eigen::MatrixXd z = layer.weight * acts.back();
    z.colwise() += layer.bias;
    if (l + 1 == model.layers.size()) {
      softmax_columns(z);
      acts.push_back(std::move(z));
    } else {
      acts.push_back(sigmoid(z));
    }
  }
  return acts;
}

Eigen::MatrixXd position_matrix(const BeamDataset& ds) {
  Eigen::MatrixXd x(3, static_cast<Eigen::Index>(ds.size()));
  for (std::size_t t = 0; t < ds.size(); ++t) {
    const auto& p = ds.samples[t].position;
    x.col(static_cast<Eigen::Index>(t)) << p.x, p.y, p.z;
  }
  return x;
}

std::vector<DenseLayer> zeros_like(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  for (const auto& l : layers) {
    out.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  }
  return out;
}

}  // namespace

Eigen::MatrixXd InputScaler::apply(const Eigen::MatrixXd& raw) const {
  return ((raw.colwise() - mean).array().colwise() * inv_scale.array()).matrix();
}

MlpModel make_mlp(const std::vector<int>& layer_sizes, int num_f, int num_w) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("MLP needs input and output layers");
  if (layer_sizes.back() != num_f * num_w) {
    throw std::invalid_argument("MLP output width must equal I_f * I_w");
  }
  MlpModel m;
  m.layer_sizes = layer_sizes;
  m.num_f = num_f;
  m.num_w = num_w;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    m.layers.push_back({Eigen::MatrixXd::Zero(layer_sizes[l + 1], layer_sizes[l]),
                        Eigen::VectorXd::Zero(layer_sizes[l + 1])});
  }
  m.scaler.mean = Eigen::VectorXd::Zero(layer_sizes.front());
  m.scaler.inv_scale = Eigen::VectorXd::Ones(layer_sizes.front());
  return m;
}

void he_uniform_init(MlpModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& layer : model.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = dist(rng);
    layer.bias.setZero();
  }
}

Eigen::MatrixXd mlp_forward_standardized(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  return forward_all(model, inputs).back();
}

Eigen::VectorXd mlp_forward(const MlpModel& model, const Vec3& position) {
  Eigen::MatrixXd raw(3, 1);
  raw << position.x, position.y, position.z;
  Eigen::VectorXd out = mlp_forward_standardized(model, model.scaler.apply(raw)).col(0);
  if (!out.allFinite()) throw NumericalFault("mlp_forward: non-finite activation");
  return out;
}

LossAndGradient mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                                      const std::vector<int>& labels) {
  const auto batch = inputs.cols();
  if (static_cast<std::size_t>(batch) != labels.size() || batch == 0) {
    throw DimensionError("mlp_loss_and_gradient: inputs and labels disagree");
  }
  const auto acts = forward_all(model, inputs);
  const Eigen::MatrixXd& probs = acts.back();

  LossAndGradient out;
  out.gradient.resize(model.layers.size());
  double loss = 0.0;
  Eigen::MatrixXd delta = probs;  // dL/dz of the output layer, before the 1/B factor
  for (Eigen::Index c = 0; c < batch; ++c) {
    const int y = labels[static_cast<std::size_t>(c)];
    loss -= std::log(std::max(probs(y, c), 1e-300));
    delta(y, c) -= 1.0;
  }
  out.loss = loss / static_cast<double>(batch);
  delta /= static_cast<double>(batch);

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    out.gradient[l].weight = delta * acts[l].transpose();
    out.gradient[l].bias = delta.rowwise().sum();
    if (l > 0) {
      const Eigen::MatrixXd& h = acts[l];
      delta = ((model.layers[l].weight.transpose() * delta).array() * h.array() *
               (1.0 - h.array()))
                  .matrix();
    }
  }
  return out;
}

AdamState AdamState::for_model(const MlpModel& model, double learning_rate, double beta1,
                               double beta2, double epsilon) {
  AdamState s;
  s.m = zeros_like(model.layers);
  s.v = zeros_like(model.layers);
  s.learning_rate = learning_rate;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

void adam_step(std::vector<DenseLayer>& params, const std::vector<DenseLayer>& grads,
               AdamState& s) {
  if (params.size() != grads.size() || params.size() != s.m.size()) {
    throw DimensionError("adam_step: parameter/gradient/state shapes disagree");
  }
  ++s.step;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    m = s.beta1 * m + (1.0 - s.beta1) * g;
    v = s.beta2 * v + (1.0 - s.beta2) * g.cwiseAbs2();
    p.array() -= s.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + s.epsilon);
  };
  for (std::size_t l = 0; l < params.size(); ++l) {
    update(params[l].weight, grads[l].weight, s.m[l].weight, s.v[l].weight);
    update(params[l].bias, grads[l].bias, s.m[l].bias, s.v[l].bias);
  }
}

MlpTrainResult mlp_train(const BeamDataset& train, const MlpHyperparams& hyper) {
  if (train.samples.empty()) throw std::invalid_argument("mlp_train: empty training set");
  if (hyper.batch_size < 1 || hyper.epochs < 0) {
    throw std::invalid_argument("mlp_train: invalid batch size or epoch count");
  }
  std::vector<int> sizes{3};
  sizes.insert(sizes.end(), hyper.hidden.begin(), hyper.hidden.end());
  sizes.push_back(train.num_f * train.num_w);
  MlpTrainResult result{make_mlp(sizes, train.num_f, train.num_w), 0.0, {}};
  MlpModel& model = result.model;
  he_uniform_init(model, hyper.seed);

  const Eigen::MatrixXd raw = position_matrix(train);
  const auto n = raw.cols();
  model.scaler.mean = raw.rowwise().mean();
  model.scaler.inv_scale.resize(3);
  for (int k = 0; k < 3; ++k) {
    const double var = (raw.row(k).array() - model.scaler.mean(k)).square().sum() /
                       static_cast<double>(n);
    const double sd = std::sqrt(var);
    model.scaler.inv_scale(k) = sd > 1e-12 * (1.0 + std::abs(model.scaler.mean(k))) ? 1.0 / sd : 0.0;
  }
  const Eigen::MatrixXd inputs = model.scaler.apply(raw);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < n; ++t) {
    labels[static_cast<std::size_t>(t)] = train.samples[static_cast<std::size_t>(t)].optimal.flat(train.num_w);
  }

  auto full_loss = [&](int epoch) {
    const Eigen::MatrixXd probs = mlp_forward_standardized(model, inputs);
    double loss = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      loss -= std::log(std::max(probs(labels[static_cast<std::size_t>(t)], t), 1e-300));
    }
    loss /= static_cast<double>(n);
    if (!std::isfinite(loss)) {
      throw NumericalFault("mlp_train: loss diverged at epoch " + std::to_string(epoch));
    }
    return loss;
  };
  result.initial_loss = full_loss(0);

  AdamState adam = AdamState::for_model(model, hyper.learning_rate, hyper.beta1, hyper.beta2,
                                        hyper.epsilon);
  std::mt19937_64 rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::MatrixXd batch_x;
  std::vector<int> batch_y;
  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += hyper.batch_size) {
      const Eigen::Index len = std::min<Eigen::Index>(hyper.batch_size, n - start);
      batch_x.resize(3, len);
      batch_y.resize(static_cast<std::size_t>(len));
      for (Eigen::Index k = 0; k < len; ++k) {
        const Eigen::Index t = order[static_cast<std::size_t>(start + k)];
        batch_x.col(k) = inputs.col(t);
        batch_y[static_cast<std::size_t>(k)] = labels[static_cast<std::size_t>(t)];
      }
      const auto lg = mlp_loss_and_gradient(model, batch_x, batch_y);
      if (!std::isfinite(lg.loss)) {
        throw NumericalFault("mlp_train: loss diverged at epoch " + std::to_string(epoch));
      }
      adam_step(model.layers, lg.gradient, adam);
    }
    result.epoch_loss.push_back(full_loss(epoch));
  }
  return result;
}

CandidateList mlp_top_n(const MlpModel& model, const Vec3& position, int n_b) {
  const Eigen::VectorXd p = mlp_forward(model, position);
  // Flat class k = f * num_w + w, so the row-major reshape gives the (f, w) score matrix.
  const Eigen::MatrixXd scores =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          p.data(), model.num_f, model.num_w);
  return rank_scores(scores, n_b);
}

void save_mlp(std::ostream& out, const MlpModel& model) {
  std::ostringstream p;
  binio::put<std::int32_t>(p, model.num_f);
  binio::put<std::int32_t>(p, model.num_w);
  binio::put<std::uint32_t>(p, static_cast<std::uint32_t>(model.layer_sizes.size()));
  for (int s : model.layer_sizes) binio::put<std::int32_t>(p, s);
  for (Eigen::Index k = 0; k < model.scaler.mean.size(); ++k) {
    binio::put<double>(p, model.scaler.mean(k));
    binio::put<double>(p, model.scaler.inv_scale(k));
  }
  for (const auto& layer : model.layers) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) binio::put<double>(p, layer.weight(i, j));
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) binio::put<double>(p, layer.bias(i));
  }
  write_container(out, ContainerType::kMlp, p.str());
}

MlpModel load_mlp(std::istream& in) {
  std::istringstream p(read_container(in, ContainerType::kMlp));
  const int num_f = binio::get<std::int32_t>(p);
  const int num_w = binio::get<std::int32_t>(p);
  const auto count = binio::get<std::uint32_t>(p);
  if (count < 2 || count > 64) throw FormatError("MLP: implausible layer count");
  std::vector<int> sizes(count);
  for (auto& s : sizes) {
    s = binio::get<std::int32_t>(p);
    if (s < 1 || s > 1'000'000) throw FormatError("MLP: implausible layer width");
  }
  MlpModel m;
  try {
    m = make_mlp(sizes, num_f, num_w);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("MLP: ") + e.what());
  }
  for (Eigen::Index k = 0; k < m.scaler.mean.size(); ++k) {
    m.scaler.mean(k) = binio::get<double>(p);
    m.scaler.inv_scale(k) = binio::get<double>(p);
  }
  for (auto& layer : m.layers) {
    for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) layer.weight(i, j) = binio::get<double>(p);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = binio::get<double>(p);
  }
  return m;
}

}  // namespace beamsel
