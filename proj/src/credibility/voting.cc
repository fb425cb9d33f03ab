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

#include "fairdl/credibility/voting.h"

#include <set>

#include "absl/strings/str_format.h"

namespace fairdl {

absl::StatusOr<LabelMatrix> LabelMatrix::Create(
    std::vector<PartyId> labellers, std::vector<std::vector<int>> rows) {
  if (labellers.empty()) return absl::InvalidArgumentError("no labellers");
  if (std::set<PartyId>(labellers.begin(), labellers.end()).size() !=
      labellers.size()) {
    return absl::InvalidArgumentError("duplicate labeller");
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != labellers.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d labels for %d labellers", r, rows[r].size(),
          labellers.size()));
    }
    for (int label : rows[r]) {
      if (label < 0) return absl::InvalidArgumentError("negative label");
    }
  }
  return LabelMatrix(std::move(labellers), std::move(rows));
}

std::vector<int> MajorityVote(const LabelMatrix& matrix) {
  std::vector<int> out;
  out.reserve(matrix.row_count());
  for (const std::vector<int>& row : matrix.rows()) {
    std::map<int, int> counts;
    for (int label : row) ++counts[label];
    int best = counts.begin()->first;
    int best_count = 0;
    for (const auto& [label, count] : counts) {  // ascending labels
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    out.push_back(best);
  }
  return out;
}

std::map<PartyId, double> InitCredibility(const LabelMatrix& matrix) {
  std::map<PartyId, double> raw;
  const size_t u = matrix.row_count();
  if (u == 0) {
    for (PartyId p : matrix.labellers()) raw[p] = 1.0;
    return raw;
  }
  const std::vector<int> majority = MajorityVote(matrix);
  for (size_t c = 0; c < matrix.labellers().size(); ++c) {
    size_t matches = 0;
    for (size_t r = 0; r < u; ++r) {
      if (matrix.rows()[r][c] == majority[r]) ++matches;
    }
    raw[matrix.labellers()[c]] =
        static_cast<double>(matches) / static_cast<double>(u);
  }
  return raw;
}

}  // namespace fairdl
