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

#include "fairdl/harness/fairness.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace fairdl {

absl::StatusOr<std::vector<double>> BuildXAxis(int setting,
                                               std::span<const double> sharing_levels,
                                               std::span<const double> standalone) {
  if (sharing_levels.size() != standalone.size()) {
    return absl::InvalidArgumentError("x-axis inputs differ in length");
  }
  if (setting != 2) return std::vector<double>(standalone.begin(), standalone.end());
  double lsum = 0, ssum = 0;
  for (double l : sharing_levels) lsum += l;
  for (double s : standalone) ssum += s;
  if (!(lsum > 0) || !(ssum > 0)) {
    return absl::InvalidArgumentError("setting 2 needs positive lambda and accuracy sums");
  }
  std::vector<double> x(standalone.size());
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = sharing_levels[i] / lsum + standalone[i] / ssum;
  }
  return x;
}

absl::StatusOr<FairnessReport> Fairness(std::span<const double> x,
                                        std::span<const double> y) {
  if (x.size() != y.size()) return absl::InvalidArgumentError("x and y differ in length");
  const size_t n = x.size();
  if (n < 2) return absl::InvalidArgumentError("fairness needs at least two parties");
  FairnessReport rep;
  rep.x.assign(x.begin(), x.end());
  rep.y.assign(y.begin(), y.end());
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double denom = static_cast<double>(n - 1);
  const double sx = std::sqrt(sxx / denom);
  const double sy = std::sqrt(syy / denom);
  if (!(sx > 0) || !(sy > 0)) {
    rep.note = absl::StrFormat("zero variance in %s", !(sx > 0) ? "x" : "y");
    return rep;
  }
  rep.r = std::clamp(sxy / denom / (sx * sy), -1.0, 1.0);
  rep.defined = true;
  return rep;
}

}  // namespace fairdl
