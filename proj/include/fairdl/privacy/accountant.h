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

#ifndef FAIRDL_PRIVACY_ACCOUNTANT_H_
#define FAIRDL_PRIVACY_ACCOUNTANT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fairdl {

struct PrivacyCost {
  double epsilon = 0;
  double delta = 0;
  bool operator==(const PrivacyCost&) const = default;
};

// One recorded mechanism invocation. `sample_ratio` is q = L/N; it is 1 for
// releases that touch the whole dataset.
struct StepRecord {
  double epsilon = 0;
  double delta = 0;
  double sample_ratio = 1;
  bool operator==(const StepRecord&) const = default;
};

enum class CompositionStrategy {
  kBasic,
  // Each step is mapped to (q*eps, q*delta) before summation.
  kAmplifiedBasic,
};

std::string_view StrategyName(CompositionStrategy strategy);
absl::StatusOr<CompositionStrategy> ParseStrategy(std::string_view name);

PrivacyCost StepCost(const StepRecord& step, CompositionStrategy strategy);
PrivacyCost ComposeSpent(std::span<const StepRecord> steps,
                         CompositionStrategy strategy);

// sigma = sqrt(2 ln(1.25 / delta)) / epsilon, valid for 0 < epsilon <= 1.
absl::StatusOr<double> CalibrateSigma(double epsilon, double delta);

enum class BudgetStage { kInitialisation, kUpdate };

// Stage budgets: (4, 1e-5) for initialisation and (2, 1e-5) for updates;
// datasets named "svhn" (any case) use delta = 1e-6.
PrivacyCost AllocateBudget(BudgetStage stage, std::string_view dataset_name);

// Per-party ledger of privacy spending against a fixed total.
class PrivacyAccountant {
 public:
  static absl::StatusOr<PrivacyAccountant> Create(PrivacyCost total,
                                                  CompositionStrategy strategy);

  // Debits one step. A step that would exceed the total is refused with
  // kResourceExhausted and the accountant becomes exhausted for good.
  absl::Status Record(const StepRecord& step);
  bool CanAfford(const StepRecord& step) const;

  PrivacyCost Spent() const;
  PrivacyCost Remaining() const;
  const PrivacyCost& total() const { return total_; }
  CompositionStrategy strategy() const { return strategy_; }
  const std::vector<StepRecord>& steps() const { return steps_; }
  size_t step_count() const { return steps_.size(); }
  bool exhausted() const { return exhausted_; }

  std::string ToJson() const;
  static absl::StatusOr<PrivacyAccountant> FromJson(std::string_view text);

  bool operator==(const PrivacyAccountant&) const = default;

 private:
  PrivacyAccountant(PrivacyCost total, CompositionStrategy strategy)
      : total_(total), strategy_(strategy) {}

  PrivacyCost total_;
  CompositionStrategy strategy_;
  std::vector<StepRecord> steps_;
  PrivacyCost spent_;
  bool exhausted_ = false;
};

}  // namespace fairdl

#endif  // FAIRDL_PRIVACY_ACCOUNTANT_H_
