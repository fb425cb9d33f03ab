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

#ifndef FAIRDL_NUMERICS_DATASET_H_
#define FAIRDL_NUMERICS_DATASET_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "fairdl/common/rng.h"
#include "fairdl/numerics/matrix.h"

namespace fairdl {

// Labelled examples. Invariants (checked by Create): one label per feature
// row, every label in [0, num_classes).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  static absl::StatusOr<Dataset> Create(Matrix features,
                                        std::vector<int> labels,
                                        int num_classes);

  size_t size() const { return labels.size(); }
  size_t dim() const { return features.cols(); }
  bool empty() const { return labels.empty(); }

  Dataset Subset(std::span<const size_t> indices) const;
  // Examples whose label is in `classes`.
  Dataset FilterClasses(std::span<const int> classes) const;
  std::vector<size_t> ClassCounts() const;
  void Append(const Dataset& other);

  bool operator==(const Dataset&) const = default;
};

// Splits off the trailing `validation_fraction` of the rows (rounded down) as
// a validation set; returns (train, validation).
std::pair<Dataset, Dataset> SplitTrainValidation(const Dataset& data,
                                                 double validation_fraction);

// Random permutation of the rows.
Dataset Shuffled(const Dataset& data, Rng& rng);

// CSV with a header row; every column but the last is a real feature, the last
// column is an integer label. num_classes <= 0 infers max(label) + 1.
absl::StatusOr<Dataset> ParseCsv(std::string_view text, int num_classes = 0);
absl::StatusOr<Dataset> LoadCsv(const std::string& path, int num_classes = 0);

// IDX files (big-endian). Images use magic 0x00000803 and are flattened and
// scaled to [0,1]; labels use magic 0x00000801.
absl::StatusOr<Dataset> ParseIdx(std::string_view images, std::string_view labels,
                                 int num_classes = 10);
absl::StatusOr<Dataset> LoadIdx(const std::string& images_path,
                                const std::string& labels_path,
                                int num_classes = 10);

struct BlobSpec {
  int num_classes = 10;
  int dim = 32;
  double center_low = 0.25;
  double center_high = 0.75;
  double spread = 0.15;

  bool operator==(const BlobSpec&) const = default;
};

// Synthetic Gaussian-blob classification task. Class centres are drawn once
// from the task seed; every Sample call draws fresh examples from the same
// distribution, clamped to [0,1].
class BlobTask {
 public:
  static BlobTask Create(const BlobSpec& spec, uint64_t seed);

  // Labels uniform over classes.
  Dataset Sample(size_t count, Rng& rng) const;
  // Labels uniform over `classes` only.
  Dataset SampleClasses(size_t count, std::span<const int> classes,
                        Rng& rng) const;

  const BlobSpec& spec() const { return spec_; }
  const Matrix& centers() const { return centers_; }

 private:
  BlobSpec spec_;
  Matrix centers_;
};

}  // namespace fairdl

#endif  // FAIRDL_NUMERICS_DATASET_H_
