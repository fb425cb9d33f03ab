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

#include "fairdl/privacy/accountant.h"

#include <cmath>

#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "json.hpp"

namespace fairdl {
namespace {

// Relative slack so that a budget split into equal steps is fully usable
// despite rounding in the running sum.
constexpr double kBudgetSlack = 1e-9;

bool Within(double spent, double total) {
  return spent <= total * (1 + kBudgetSlack);
}

}  // namespace

std::string_view StrategyName(CompositionStrategy strategy) {
  switch (strategy) {
    case CompositionStrategy::kBasic:
      return "basic";
    case CompositionStrategy::kAmplifiedBasic:
      return "amplified-basic";
  }
  return "unknown";
}

absl::StatusOr<CompositionStrategy> ParseStrategy(std::string_view name) {
  if (name == "basic") return CompositionStrategy::kBasic;
  if (name == "amplified-basic") return CompositionStrategy::kAmplifiedBasic;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown composition strategy '%s'",
                      std::string(name)));
}

PrivacyCost StepCost(const StepRecord& step, CompositionStrategy strategy) {
  if (strategy == CompositionStrategy::kAmplifiedBasic) {
    return {step.sample_ratio * step.epsilon, step.sample_ratio * step.delta};
  }
  return {step.epsilon, step.delta};
}

PrivacyCost ComposeSpent(std::span<const StepRecord> steps,
                         CompositionStrategy strategy) {
  PrivacyCost sum;
  for (const StepRecord& s : steps) {
    const PrivacyCost c = StepCost(s, strategy);
    sum.epsilon += c.epsilon;
    sum.delta += c.delta;
  }
  return sum;
}

absl::StatusOr<double> CalibrateSigma(double epsilon, double delta) {
  if (!(epsilon > 0) || !(delta > 0) || !(delta < 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need epsilon > 0 and 0 < delta < 1, got (%g, %g)", epsilon, delta));
  }
  if (epsilon > 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "Gaussian calibration requires epsilon <= 1, got %g", epsilon));
  }
  return std::sqrt(2 * std::log(1.25 / delta)) / epsilon;
}

PrivacyCost AllocateBudget(BudgetStage stage, std::string_view dataset_name) {
  const bool svhn = absl::AsciiStrToLower(std::string(dataset_name)) == "svhn";
  const double delta = svhn ? 1e-6 : 1e-5;
  return {stage == BudgetStage::kInitialisation ? 4.0 : 2.0, delta};
}

absl::StatusOr<PrivacyAccountant> PrivacyAccountant::Create(
    PrivacyCost total, CompositionStrategy strategy) {
  if (!(total.epsilon >= 0) || !(total.delta >= 0) ||
      !std::isfinite(total.epsilon) || !(total.delta < 1)) {
    return absl::InvalidArgumentError("invalid privacy budget");
  }
  return PrivacyAccountant(total, strategy);
}

bool PrivacyAccountant::CanAfford(const StepRecord& step) const {
  if (exhausted_) return false;
  const PrivacyCost c = StepCost(step, strategy_);
  return Within(spent_.epsilon + c.epsilon, total_.epsilon) &&
         Within(spent_.delta + c.delta, total_.delta);
}

absl::Status PrivacyAccountant::Record(const StepRecord& step) {
  if (!(step.epsilon > 0) || !(step.delta >= 0) || !(step.sample_ratio > 0) ||
      step.sample_ratio > 1) {
    return absl::InvalidArgumentError("invalid privacy step");
  }
  if (!CanAfford(step)) {
    exhausted_ = true;
    return absl::ResourceExhaustedError(absl::StrFormat(
        "privacy budget exhausted: spent (%g, %g) of (%g, %g)",
        spent_.epsilon, spent_.delta, total_.epsilon, total_.delta));
  }
  const PrivacyCost c = StepCost(step, strategy_);
  spent_.epsilon += c.epsilon;
  spent_.delta += c.delta;
  steps_.push_back(step);
  return absl::OkStatus();
}

PrivacyCost PrivacyAccountant::Spent() const { return spent_; }

PrivacyCost PrivacyAccountant::Remaining() const {
  return {std::max(0.0, total_.epsilon - spent_.epsilon),
          std::max(0.0, total_.delta - spent_.delta)};
}

std::string PrivacyAccountant::ToJson() const {
  nlohmann::json j;
  j["strategy"] = std::string(StrategyName(strategy_));
  j["total"] = {{"epsilon", total_.epsilon}, {"delta", total_.delta}};
  j["exhausted"] = exhausted_;
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& s : steps_) {
    steps.push_back({{"epsilon", s.epsilon},
                     {"delta", s.delta},
                     {"q", s.sample_ratio}});
  }
  j["steps"] = std::move(steps);
  return j.dump();
}

absl::StatusOr<PrivacyAccountant> PrivacyAccountant::FromJson(
    std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("accountant record is not a JSON object");
  }
  try {
    absl::StatusOr<CompositionStrategy> strategy =
        ParseStrategy(j.at("strategy").get<std::string>());
    if (!strategy.ok()) return strategy.status();
    absl::StatusOr<PrivacyAccountant> acc = Create(
        {j.at("total").at("epsilon").get<double>(),
         j.at("total").at("delta").get<double>()},
        *strategy);
    if (!acc.ok()) return acc.status();
    for (const auto& s : j.at("steps")) {
      StepRecord step{s.at("epsilon").get<double>(), s.at("delta").get<double>(),
                      s.at("q").get<double>()};
      const PrivacyCost c = StepCost(step, acc->strategy_);
      acc->spent_.epsilon += c.epsilon;
      acc->spent_.delta += c.delta;
      acc->steps_.push_back(step);
    }
    acc->exhausted_ = j.at("exhausted").get<bool>();
    return acc;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed accountant record: %s", e.what()));
  }
}

}  // namespace fairdl
