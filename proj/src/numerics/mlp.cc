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

#include "fairdl/numerics/mlp.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace fairdl {
namespace {

// Activations of one example: acts[0] is the input, acts[l] the output of
// weight layer l-1 (post-ReLU for hidden layers, probabilities at the end).
struct Workspace {
  std::vector<std::vector<double>> acts;
  std::vector<double> delta;
  std::vector<double> next_delta;
};

void ForwardOne(const MlpModel& model, std::span<const double> x,
                Workspace& ws) {
  const auto& dims = model.layer_dims();
  const std::span<const double> p = model.parameters();
  ws.acts.resize(dims.size());
  ws.acts[0].assign(x.begin(), x.end());
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const size_t in = dims[l], out = dims[l + 1];
    const double* w = p.data() + model.weight_offset(l);
    const double* b = p.data() + model.bias_offset(l);
    const std::vector<double>& a = ws.acts[l];
    std::vector<double>& z = ws.acts[l + 1];
    z.resize(out);
    for (size_t o = 0; o < out; ++o) {
      const double* wrow = w + o * in;
      double s = b[o];
      for (size_t i = 0; i < in; ++i) s += wrow[i] * a[i];
      z[o] = s;
    }
    const bool output_layer = l + 2 == dims.size();
    if (!output_layer) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    } else {
      const double m = *std::max_element(z.begin(), z.end());
      double total = 0.0;
      for (double& v : z) {
        v = std::exp(v - m);
        total += v;
      }
      for (double& v : z) v /= total;
    }
  }
}

// grad += scale * d(-log p[label]) / d(params).
void AccumulateExampleGradient(const MlpModel& model, std::span<const double> x,
                               int label, double scale, std::span<double> grad,
                               Workspace& ws) {
  ForwardOne(model, x, ws);
  const auto& dims = model.layer_dims();
  const std::span<const double> p = model.parameters();
  ws.delta = ws.acts.back();
  ws.delta[static_cast<size_t>(label)] -= 1.0;
  for (size_t l = dims.size() - 1; l-- > 0;) {
    const size_t in = dims[l], out = dims[l + 1];
    double* gw = grad.data() + model.weight_offset(l);
    double* gb = grad.data() + model.bias_offset(l);
    const std::vector<double>& a = ws.acts[l];
    for (size_t o = 0; o < out; ++o) {
      const double d = scale * ws.delta[o];
      if (d == 0.0) continue;
      double* row = gw + o * in;
      for (size_t i = 0; i < in; ++i) row[i] += d * a[i];
      gb[o] += d;
    }
    if (l == 0) break;
    const double* w = p.data() + model.weight_offset(l);
    ws.next_delta.assign(in, 0.0);
    for (size_t o = 0; o < out; ++o) {
      const double d = ws.delta[o];
      if (d == 0.0) continue;
      const double* wrow = w + o * in;
      for (size_t i = 0; i < in; ++i) ws.next_delta[i] += wrow[i] * d;
    }
    // ReLU derivative: the stored activation is max(z, 0).
    for (size_t i = 0; i < in; ++i) {
      if (a[i] <= 0.0) ws.next_delta[i] = 0.0;
    }
    std::swap(ws.delta, ws.next_delta);
  }
}

absl::Status CheckBatch(const MlpModel& model, const Dataset& batch) {
  if (batch.empty()) return absl::InvalidArgumentError("empty batch");
  if (batch.dim() != model.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("batch has %d features, model expects %d", batch.dim(),
                        model.input_dim()));
  }
  for (int label : batch.labels) {
    if (label < 0 || static_cast<size_t>(label) >= model.num_classes()) {
      return absl::InvalidArgumentError("label outside model output range");
    }
  }
  return absl::OkStatus();
}

}  // namespace

double DenseGradient::Norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

absl::StatusOr<MlpModel> MlpModel::Create(std::vector<size_t> layer_dims) {
  if (layer_dims.size() < 2) {
    return absl::InvalidArgumentError("an MLP needs input and output layers");
  }
  for (size_t d : layer_dims) {
    if (d == 0) return absl::InvalidArgumentError("layer dimension is zero");
  }
  MlpModel m;
  m.dims_ = std::move(layer_dims);
  size_t total = 0;
  for (size_t l = 0; l + 1 < m.dims_.size(); ++l) {
    m.offsets_.push_back(total);
    total += m.dims_[l] * m.dims_[l + 1] + m.dims_[l + 1];
  }
  m.params_.assign(total, 0.0);
  return m;
}

absl::StatusOr<MlpModel> MlpModel::CreateRandom(std::vector<size_t> layer_dims,
                                                Rng& rng) {
  absl::StatusOr<MlpModel> m = Create(std::move(layer_dims));
  if (!m.ok()) return m;
  for (size_t l = 0; l < m->num_weight_layers(); ++l) {
    const size_t in = m->dims_[l], out = m->dims_[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in));
    for (size_t i = 0; i < in * out; ++i) {
      m->params_[m->weight_offset(l) + i] = rng.Uniform(-limit, limit);
    }
  }
  return m;
}

absl::StatusOr<Matrix> Forward(const MlpModel& model, const Matrix& features) {
  if (features.cols() != model.input_dim()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("features have %d columns, model expects %d",
                        features.cols(), model.input_dim()));
  }
  Matrix out(features.rows(), model.num_classes());
  Workspace ws;
  for (size_t r = 0; r < features.rows(); ++r) {
    ForwardOne(model, features.row(r), ws);
    std::copy(ws.acts.back().begin(), ws.acts.back().end(), out.row(r).begin());
  }
  return out;
}

absl::StatusOr<double> CrossEntropyLoss(const MlpModel& model,
                                        const Dataset& batch) {
  if (absl::Status s = CheckBatch(model, batch); !s.ok()) return s;
  absl::StatusOr<Matrix> probs = Forward(model, batch.features);
  if (!probs.ok()) return probs.status();
  double loss = 0.0;
  for (size_t r = 0; r < batch.size(); ++r) {
    loss -= std::log((*probs)(r, static_cast<size_t>(batch.labels[r])));
  }
  return loss / static_cast<double>(batch.size());
}

absl::StatusOr<DenseGradient> Backward(const MlpModel& model,
                                       const Dataset& batch) {
  if (absl::Status s = CheckBatch(model, batch); !s.ok()) return s;
  DenseGradient g{std::vector<double>(model.parameter_count(), 0.0)};
  Workspace ws;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (size_t r = 0; r < batch.size(); ++r) {
    AccumulateExampleGradient(model, batch.features.row(r), batch.labels[r],
                              scale, g.values, ws);
  }
  return g;
}

absl::StatusOr<std::vector<DenseGradient>> PerExampleGradients(
    const MlpModel& model, const Dataset& batch) {
  if (absl::Status s = CheckBatch(model, batch); !s.ok()) return s;
  std::vector<DenseGradient> out(batch.size());
  Workspace ws;
  for (size_t r = 0; r < batch.size(); ++r) {
    out[r].values.assign(model.parameter_count(), 0.0);
    AccumulateExampleGradient(model, batch.features.row(r), batch.labels[r],
                              1.0, out[r].values, ws);
  }
  return out;
}

absl::Status SgdStep(MlpModel& model, const DenseGradient& gradient,
                     double learning_rate) {
  if (gradient.size() != model.parameter_count()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gradient has %d values, model has %d parameters",
                        gradient.size(), model.parameter_count()));
  }
  std::span<double> w = model.parameters();
  for (size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gradient.values[i];
  return absl::OkStatus();
}

std::vector<int> Predict(const MlpModel& model, const Matrix& features) {
  std::vector<int> out(features.rows());
  Workspace ws;
  for (size_t r = 0; r < features.rows(); ++r) {
    ForwardOne(model, features.row(r), ws);
    const std::vector<double>& p = ws.acts.back();
    // max_element returns the first maximum, i.e. the lowest class index.
    out[r] = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  return out;
}

absl::StatusOr<double> Evaluate(const MlpModel& model, const Dataset& data) {
  if (data.empty()) return absl::InvalidArgumentError("empty dataset");
  if (data.dim() != model.input_dim()) {
    return absl::InvalidArgumentError("dataset dimension mismatch");
  }
  const std::vector<int> predicted = Predict(model, data.features);
  size_t correct = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

absl::Status TrainSgd(MlpModel& model, const Dataset& data,
                      const SgdOptions& options, uint64_t& step, Rng& rng) {
  if (data.empty() || options.epochs == 0) return absl::OkStatus();
  if (options.batch_size == 0) {
    return absl::InvalidArgumentError("batch_size must be positive");
  }
  std::vector<size_t> order(data.size());
  std::vector<size_t> batch_idx;
  for (size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.UniformIndex(i)]);
    }
    for (size_t start = 0; start < order.size(); start += options.batch_size) {
      const size_t end = std::min(order.size(), start + options.batch_size);
      batch_idx.assign(order.begin() + start, order.begin() + end);
      absl::StatusOr<DenseGradient> g = Backward(model, data.Subset(batch_idx));
      if (!g.ok()) return g.status();
      if (absl::Status s = SgdStep(model, *g, options.schedule.At(step)); !s.ok()) {
        return s;
      }
      ++step;
    }
  }
  return absl::OkStatus();
}

}  // namespace fairdl
