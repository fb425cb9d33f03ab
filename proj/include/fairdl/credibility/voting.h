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

#ifndef FAIRDL_CREDIBILITY_VOTING_H_
#define FAIRDL_CREDIBILITY_VOTING_H_

#include <map>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/types.h"

namespace fairdl {

// Predicted labels for one release: one row per released sample, one column
// per labelling party.
class LabelMatrix {
 public:
  static absl::StatusOr<LabelMatrix> Create(std::vector<PartyId> labellers,
                                            std::vector<std::vector<int>> rows);

  const std::vector<PartyId>& labellers() const { return labellers_; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  size_t row_count() const { return rows_.size(); }

 private:
  LabelMatrix(std::vector<PartyId> labellers, std::vector<std::vector<int>> rows)
      : labellers_(std::move(labellers)), rows_(std::move(rows)) {}

  std::vector<PartyId> labellers_;
  std::vector<std::vector<int>> rows_;
};

// Most frequent label per row; ties go to the smallest label.
std::vector<int> MajorityVote(const LabelMatrix& matrix);

// Raw credibility m_j / u per labeller, where m_j counts agreements with the
// majority label. An empty release carries no signal and yields 1 for every
// labeller.
std::map<PartyId, double> InitCredibility(const LabelMatrix& matrix);

}  // namespace fairdl

#endif  // FAIRDL_CREDIBILITY_VOTING_H_
