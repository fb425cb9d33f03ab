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

#ifndef FAIRDL_HARNESS_EXPERIMENT_H_
#define FAIRDL_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairdl/adversary/adversary.h"
#include "fairdl/common/events.h"
#include "fairdl/harness/fairness.h"
#include "fairdl/harness/setting.h"
#include "fairdl/protocol/config.h"
#include "fairdl/protocol/simulation.h"

namespace fairdl {

// Everything one (framework, seed) run leaves behind.
struct CellResult {
  FrameworkKind framework = FrameworkKind::kStandalone;
  uint64_t seed = 0;
  SettingSpec spec;
  // Empty unless the run failed; the other fields are then partial.
  std::string error;
  std::vector<double> standalone_accuracy;
  std::vector<double> final_accuracy;
  // trace[t][i]: test accuracy of party i after round (or sweep) t.
  std::vector<std::vector<double>> trace;
  // Distributed and FDPDDL only, over the honest parties.
  std::optional<FairnessReport> fairness;
  // FDPDDL only.
  std::vector<RoundRecord> rounds;
  std::vector<CredibilityRecord> credibility;
  std::vector<RunEvent> events;
  std::vector<Detection> detections;
  std::string chain_jsonl;
};

struct RunTrace {
  ExperimentConfig config;
  // Seed-major, frameworks in config order within a seed.
  std::vector<CellResult> cells;
};

// One cell. Never fails as a whole: errors land in CellResult::error.
CellResult RunCell(const ExperimentConfig& config, FrameworkKind framework,
                   uint64_t seed);

// Validates the config, then runs every cell on up to `threads` workers
// (0 picks the hardware concurrency). Results do not depend on `threads`.
absl::StatusOr<RunTrace> RunExperiment(const ExperimentConfig& config,
                                       size_t threads = 1);

struct FrameworkSummary {
  FrameworkKind framework = FrameworkKind::kStandalone;
  size_t cells = 0;
  size_t failed = 0;
  // Per-party means over the successful cells.
  std::vector<double> mean_standalone_accuracy;
  std::vector<double> mean_final_accuracy;
  // Mean r over cells where it is defined.
  std::optional<double> mean_fairness;
  size_t fairness_defined = 0;
};

std::vector<FrameworkSummary> Summarize(const RunTrace& trace);

std::string TraceToJson(const RunTrace& trace);
absl::StatusOr<RunTrace> TraceFromJson(std::string_view text);

struct ReportFile {
  std::string name;
  std::string contents;
};

// CSV tables, summary.json, one chain file per FDPDDL seed and trace.json.
// A pure function of the trace.
std::vector<ReportFile> RenderReport(const RunTrace& trace);

// Writes RenderReport(trace) into `directory`, creating it if needed.
absl::Status WriteReport(const RunTrace& trace, const std::string& directory);

}  // namespace fairdl

#endif  // FAIRDL_HARNESS_EXPERIMENT_H_
