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
#include <vector>

#include <Eigen/Dense>

#include "beamsel/beam_select.hpp"
#include "beamsel/scene.hpp"

namespace beamsel {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

/// Per-coordinate standardization fitted on the training split. A constant coordinate has
/// inv_scale 0 and therefore always maps to 0.
struct InputScaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd inv_scale;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;  // columns are samples
};

/// Fully connected classifier: sigmoid hidden layers, softmax output over flattened beam pairs.
struct MlpModel {
  std::vector<int> layer_sizes;  // input, hidden..., classes
  std::vector<DenseLayer> layers;
  InputScaler scaler;
  int num_f = 1;
  int num_w = 1;

  int num_classes() const { return layer_sizes.back(); }
};

/// Zero weights and biases, identity scaler.
MlpModel make_mlp(const std::vector<int>& layer_sizes, int num_f, int num_w);

/// He-uniform weights U(-sqrt(6 / fan_in), +sqrt(6 / fan_in)), zero biases.
void he_uniform_init(MlpModel& model, std::uint64_t seed);

/// Class probabilities for already standardized inputs (columns), classes x batch.
Eigen::MatrixXd mlp_forward_standardized(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// Standardizes (x, y, z) with the model's scaler and returns the probability vector.
/// Throws NumericalFault on a non-finite activation.
Eigen::VectorXd mlp_forward(const MlpModel& model, const Vec3& position);

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy
  std::vector<DenseLayer> gradient;
};

LossAndGradient mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                                      const std::vector<int>& labels);

struct AdamState {
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;
  long long step = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_model(const MlpModel& model, double learning_rate, double beta1,
                             double beta2, double epsilon);
};

void adam_step(std::vector<DenseLayer>& params, const std::vector<DenseLayer>& grads,
               AdamState& state);

struct MlpHyperparams {
  std::vector<int> hidden{6, 18, 48};
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 64;
  int epochs = 500;
  std::uint64_t seed = 1;
};

struct MlpTrainResult {
  MlpModel model;
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;  // full training-set loss after each epoch
};

/// Cross-entropy on flattened pair labels with minibatch Adam. Throws std::invalid_argument on an
/// empty set and NumericalFault when the loss diverges.
MlpTrainResult mlp_train(const BeamDataset& train, const MlpHyperparams& hyper);

CandidateList mlp_top_n(const MlpModel& model, const Vec3& position, int n_b);

void save_mlp(std::ostream& out, const MlpModel& model);
MlpModel load_mlp(std::istream& in);

}  // namespace beamsel
