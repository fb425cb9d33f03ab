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

#include "fairdl/numerics/matrix.h"

#include <cassert>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace fairdl {

absl::StatusOr<Matrix> Matrix::FromData(size_t rows, size_t cols,
                                        std::vector<double> data) {
  if (data.size() != rows * cols) {
    return absl::InvalidArgumentError(
        absl::StrFormat("matrix data has %d values, expected %d x %d",
                        data.size(), rows, cols));
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("matrix data contains non-finite value");
    }
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  assert(values.size() == cols_);
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

}  // namespace fairdl
