// Copyright 2026 The fairdl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRDL_NUMERICS_MLP_H_
#define FAIRDL_NUMERICS_MLP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/numerics/dataset.h"
#include "fairdl/numerics/matrix.h"

namespace fairdl {

// Flat gradient over all model parameters, in the model's flattening order.
struct DenseGradient {
  std::vector<double> values;

  size_t size() const { return values.size(); }
  double Norm() const;
  bool operator==(const DenseGradient&) const = default;
};

// Multi-layer perceptron with ReLU hidden layers and a softmax output.
//
// All parameters live in one flat vector. Layer l (0-based) contributes its
// weight matrix first, stored row-major as (dims[l+1] rows x dims[l] cols),
// followed by its bias vector of length dims[l+1]. Layers are laid out in
// order. Sparse update indices refer to positions in this vector, so the
// order is part of the wire format between parties.
class MlpModel {
 public:
  // All-zero parameters. Needs at least an input and an output layer, every
  // dimension positive.
  static absl::StatusOr<MlpModel> Create(std::vector<size_t> layer_dims);
  // He-uniform weights, zero biases.
  static absl::StatusOr<MlpModel> CreateRandom(std::vector<size_t> layer_dims,
                                               Rng& rng);

  const std::vector<size_t>& layer_dims() const { return dims_; }
  size_t num_weight_layers() const { return dims_.size() - 1; }
  size_t input_dim() const { return dims_.front(); }
  size_t num_classes() const { return dims_.back(); }
  size_t parameter_count() const { return params_.size(); }

  size_t weight_offset(size_t layer) const { return offsets_[layer]; }
  size_t bias_offset(size_t layer) const {
    return offsets_[layer] + dims_[layer + 1] * dims_[layer];
  }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  bool operator==(const MlpModel&) const = default;

 private:
  std::vector<size_t> dims_;
  std::vector<size_t> offsets_;
  std::vector<double> params_;
};

// Row-wise class probabilities.
absl::StatusOr<Matrix> Forward(const MlpModel& model, const Matrix& features);

// Mean cross-entropy loss over a batch (natural log).
absl::StatusOr<double> CrossEntropyLoss(const MlpModel& model,
                                        const Dataset& batch);

// Gradient of the mean cross-entropy over the batch.
absl::StatusOr<DenseGradient> Backward(const MlpModel& model,
                                       const Dataset& batch);

// One gradient per example (the per-example terms whose mean is Backward).
absl::StatusOr<std::vector<DenseGradient>> PerExampleGradients(
    const MlpModel& model, const Dataset& batch);

// w <- w - learning_rate * g.
absl::Status SgdStep(MlpModel& model, const DenseGradient& gradient,
                     double learning_rate);

// lr_t = initial / (1 + decay * t), t counted in SGD steps from zero.
struct InverseTimeDecay {
  double initial = 0.1;
  double decay = 1e-7;

  double At(uint64_t step) const {
    return initial / (1.0 + decay * static_cast<double>(step));
  }
  bool operator==(const InverseTimeDecay&) const = default;
};

// Argmax class per row; ties go to the lowest class index.
std::vector<int> Predict(const MlpModel& model, const Matrix& features);

// Fraction of argmax-correct predictions.
absl::StatusOr<double> Evaluate(const MlpModel& model, const Dataset& data);

struct SgdOptions {
  size_t epochs = 1;
  size_t batch_size = 16;
  InverseTimeDecay schedule;
};

// Plain minibatch SGD over shuffled epochs. `step` is the running step
// counter for the learning-rate schedule and is advanced in place.
absl::Status TrainSgd(MlpModel& model, const Dataset& data,
                      const SgdOptions& options, uint64_t& step, Rng& rng);

}  // namespace fairdl

#endif  // FAIRDL_NUMERICS_MLP_H_
