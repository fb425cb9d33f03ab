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

#include "fairdl/protocol/baselines.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fairdl/numerics/sparse_update.h"

namespace fairdl {

namespace {

struct Prepared {
  MlpModel w0;
  std::vector<Party> parties;
};

absl::StatusOr<Prepared> PrepareAll(const ExperimentConfig& config,
                                    std::vector<PartyInput> inputs,
                                    const Dataset& test, uint64_t seed,
                                    bool pretrain) {
  if (inputs.empty()) return absl::InvalidArgumentError("no parties");
  absl::StatusOr<MlpModel> w0 =
      CommonInit(config.training, test.dim(), test.num_classes, seed);
  if (!w0.ok()) return w0.status();
  Prepared out{*std::move(w0), {}};
  for (size_t i = 0; i < inputs.size(); ++i) {
    absl::StatusOr<Party> p = PrepareParty(static_cast<PartyId>(i),
                                           std::move(inputs[i]), config, out.w0, seed);
    if (!p.ok()) return p.status();
    if (absl::Status s = Pretrain(*p, config, test, seed); !s.ok()) return s;
    if (!pretrain) {
      p->model = out.w0;
      p->sgd_step = 0;
    }
    out.parties.push_back(*std::move(p));
  }
  return out;
}

SgdOptions Options(const ExperimentConfig& config, size_t epochs) {
  SgdOptions o;
  o.epochs = epochs;
  o.batch_size = config.training.batch_size;
  o.schedule = {config.training.learning_rate, config.training.decay};
  return o;
}

absl::StatusOr<std::vector<double>> Accuracies(const std::vector<Party>& parties,
                                               const Dataset& test) {
  std::vector<double> acc;
  for (const Party& p : parties) {
    absl::StatusOr<double> a = Evaluate(p.model, test);
    if (!a.ok()) return a.status();
    acc.push_back(*a);
  }
  return acc;
}

}  // namespace

absl::StatusOr<BaselineResult> RunStandalone(const ExperimentConfig& config,
                                             std::vector<PartyInput> inputs,
                                             const Dataset& test, uint64_t seed) {
  absl::StatusOr<Prepared> prep =
      PrepareAll(config, std::move(inputs), test, seed, /*pretrain=*/true);
  if (!prep.ok()) return prep.status();
  BaselineResult r;
  r.kind = FrameworkKind::kStandalone;
  for (const Party& p : prep->parties) r.standalone_accuracy.push_back(p.standalone_accuracy);
  for (size_t t = 0; t < config.protocol.rounds; ++t) {
    for (Party& p : prep->parties) {
      if (absl::Status s =
              TrainSgd(p.model, p.train, Options(config, 1), p.sgd_step, p.local_rng);
          !s.ok()) {
        return s;
      }
    }
    absl::StatusOr<std::vector<double>> acc = Accuracies(prep->parties, test);
    if (!acc.ok()) return acc.status();
    r.trace.push_back(*std::move(acc));
  }
  absl::StatusOr<std::vector<double>> acc = Accuracies(prep->parties, test);
  if (!acc.ok()) return acc.status();
  r.final_accuracy = *std::move(acc);
  return r;
}

absl::StatusOr<BaselineResult> RunCentralised(const ExperimentConfig& config,
                                              std::vector<PartyInput> inputs,
                                              const Dataset& test, uint64_t seed) {
  absl::StatusOr<Prepared> prep =
      PrepareAll(config, std::move(inputs), test, seed, /*pretrain=*/true);
  if (!prep.ok()) return prep.status();
  BaselineResult r;
  r.kind = FrameworkKind::kCentralised;
  Dataset pooled = prep->parties.front().train;
  for (size_t i = 1; i < prep->parties.size(); ++i) pooled.Append(prep->parties[i].train);
  for (const Party& p : prep->parties) r.standalone_accuracy.push_back(p.standalone_accuracy);
  MlpModel model = prep->w0;
  uint64_t step = 0;
  Rng rng = Rng::Derive(seed, {kStreamLocal, 0xce47});
  const size_t epochs = config.training.pretrain_epochs + config.protocol.rounds;
  double acc = 0;
  for (size_t t = 0; t < epochs; ++t) {
    if (absl::Status s = TrainSgd(model, pooled, Options(config, 1), step, rng); !s.ok()) {
      return s;
    }
    absl::StatusOr<double> a = Evaluate(model, test);
    if (!a.ok()) return a.status();
    acc = *a;
    r.trace.push_back(std::vector<double>(prep->parties.size(), acc));
  }
  if (epochs == 0) acc = Evaluate(model, test).value_or(0.0);
  r.final_accuracy.assign(prep->parties.size(), acc);
  return r;
}

absl::StatusOr<BaselineResult> RunDistributed(const ExperimentConfig& config,
                                              std::vector<PartyInput> inputs,
                                              const Dataset& test, uint64_t seed) {
  // Pretraining only feeds the fairness x-axis; DSSGD starts every party at w0.
  absl::StatusOr<Prepared> prep =
      PrepareAll(config, std::move(inputs), test, seed, /*pretrain=*/false);
  if (!prep.ok()) return prep.status();
  BaselineResult r;
  r.kind = FrameworkKind::kDistributed;
  for (const Party& p : prep->parties) r.standalone_accuracy.push_back(p.standalone_accuracy);
  MlpModel server = prep->w0;
  const size_t count = server.parameter_count();
  const size_t download =
      static_cast<size_t>(FloorCount(config.dssgd.download_rate * static_cast<double>(count)));
  const size_t upload = std::max<size_t>(
      1, static_cast<size_t>(FloorCount(config.dssgd.upload_rate * static_cast<double>(count))));
  const size_t sweeps = config.training.pretrain_epochs + config.protocol.rounds;
  for (size_t t = 0; t < sweeps; ++t) {
    for (Party& p : prep->parties) {
      // Download: overwrite the coordinates where the server moved furthest.
      DenseGradient gap{std::vector<double>(count)};
      for (size_t k = 0; k < count; ++k) {
        gap.values[k] = server.parameters()[k] - p.model.parameters()[k];
      }
      absl::StatusOr<SparseUpdate> pulled = SelectLargest(gap, download);
      if (!pulled.ok()) return pulled.status();
      if (absl::Status s = ApplyUpdates(p.model, std::span(&*pulled, 1)); !s.ok()) {
        return s;
      }
      const std::vector<double> before(p.model.parameters().begin(),
                                       p.model.parameters().end());
      if (absl::Status s = TrainSgd(p.model, p.train,
                                    Options(config, config.dssgd.local_epochs),
                                    p.sgd_step, p.local_rng);
          !s.ok()) {
        return s;
      }
      DenseGradient delta{std::vector<double>(count)};
      for (size_t k = 0; k < count; ++k) {
        delta.values[k] = p.model.parameters()[k] - before[k];
      }
      absl::StatusOr<SparseUpdate> pushed = SelectLargest(delta, upload);
      if (!pushed.ok()) return pushed.status();
      if (absl::Status s = ApplyUpdates(server, std::span(&*pushed, 1)); !s.ok()) {
        return s;
      }
    }
    absl::StatusOr<std::vector<double>> acc = Accuracies(prep->parties, test);
    if (!acc.ok()) return acc.status();
    r.trace.push_back(*std::move(acc));
  }
  absl::StatusOr<std::vector<double>> acc = Accuracies(prep->parties, test);
  if (!acc.ok()) return acc.status();
  r.final_accuracy = *std::move(acc);
  return r;
}

}  // namespace fairdl
