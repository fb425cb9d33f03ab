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

#ifndef FAIRDL_HARNESS_FAIRNESS_H_
#define FAIRDL_HARNESS_FAIRNESS_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace fairdl {

// Contribution axis: setting 2 adds normalized sharing levels to normalized
// standalone accuracies; settings 1 and 3 use the standalone accuracies.
absl::StatusOr<std::vector<double>> BuildXAxis(int setting,
                                               std::span<const double> sharing_levels,
                                               std::span<const double> standalone);

struct FairnessReport {
  std::vector<double> x;
  std::vector<double> y;
  // Pearson correlation; meaningful only when `defined`.
  double r = 0;
  bool defined = false;
  // Why r is undefined, empty otherwise.
  std::string note;
};

// Pearson correlation with (n-1)-denominator standard deviations. A zero
// variance on either axis yields an undefined report rather than a number.
absl::StatusOr<FairnessReport> Fairness(std::span<const double> x,
                                        std::span<const double> y);

}  // namespace fairdl

#endif  // FAIRDL_HARNESS_FAIRNESS_H_
