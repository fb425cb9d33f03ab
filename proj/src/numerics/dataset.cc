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

#include "fairdl/numerics/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace fairdl {

absl::StatusOr<Dataset> Dataset::Create(Matrix features,
                                        std::vector<int> labels,
                                        int num_classes) {
  if (features.rows() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d feature rows but %d labels", features.rows(),
                        labels.size()));
  }
  if (num_classes <= 0) {
    return absl::InvalidArgumentError("num_classes must be positive");
  }
  for (int label : labels) {
    if (label < 0 || label >= num_classes) {
      return absl::InvalidArgumentError(
          absl::StrFormat("label %d outside [0, %d)", label, num_classes));
    }
  }
  return Dataset{std::move(features), std::move(labels), num_classes};
}

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  Dataset out;
  out.num_classes = num_classes;
  out.features = Matrix(0, dim());
  out.labels.reserve(indices.size());
  for (size_t i : indices) {
    out.features.AppendRow(features.row(i));
    out.labels.push_back(labels[i]);
  }
  return out;
}

Dataset Dataset::FilterClasses(std::span<const int> classes) const {
  std::vector<size_t> keep;
  for (size_t i = 0; i < size(); ++i) {
    if (std::find(classes.begin(), classes.end(), labels[i]) != classes.end()) {
      keep.push_back(i);
    }
  }
  return Subset(keep);
}

std::vector<size_t> Dataset::ClassCounts() const {
  std::vector<size_t> counts(static_cast<size_t>(num_classes), 0);
  for (int label : labels) ++counts[static_cast<size_t>(label)];
  return counts;
}

void Dataset::Append(const Dataset& other) {
  if (features.cols() == 0 && features.rows() == 0) {
    features = Matrix(0, other.dim());
  }
  for (size_t i = 0; i < other.size(); ++i) {
    features.AppendRow(other.features.row(i));
    labels.push_back(other.labels[i]);
  }
  num_classes = std::max(num_classes, other.num_classes);
}

std::pair<Dataset, Dataset> SplitTrainValidation(const Dataset& data,
                                                 double validation_fraction) {
  const size_t n_val =
      static_cast<size_t>(std::floor(validation_fraction * data.size() + 1e-9));
  const size_t n_train = data.size() - n_val;
  std::vector<size_t> train_idx(n_train), val_idx(n_val);
  std::iota(train_idx.begin(), train_idx.end(), 0);
  std::iota(val_idx.begin(), val_idx.end(), n_train);
  return {data.Subset(train_idx), data.Subset(val_idx)};
}

Dataset Shuffled(const Dataset& data, Rng& rng) {
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with our own index draws so the permutation does not depend
  // on the standard library's shuffle implementation.
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  }
  return data.Subset(order);
}

absl::StatusOr<Dataset> ParseCsv(std::string_view text, int num_classes) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(absl::string_view(text.data(), text.size()), '\n', absl::SkipWhitespace());
  if (lines.empty()) return absl::InvalidArgumentError("CSV has no header row");
  const size_t columns =
      std::vector<absl::string_view>(absl::StrSplit(lines[0], ',')).size();
  if (columns < 2) {
    return absl::InvalidArgumentError("CSV needs a feature and a label column");
  }
  std::vector<double> values;
  std::vector<int> labels;
  for (size_t li = 1; li < lines.size(); ++li) {
    std::vector<absl::string_view> cells = absl::StrSplit(
        absl::StripTrailingAsciiWhitespace(lines[li]), ',');
    if (cells.size() != columns) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "CSV line %d has %d cells, expected %d", li + 1, cells.size(), columns));
    }
    for (size_t c = 0; c + 1 < columns; ++c) {
      double v;
      if (!absl::SimpleAtod(cells[c], &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("CSV line %d: bad feature '%s'", li + 1, cells[c]));
      }
      values.push_back(v);
    }
    int label;
    if (!absl::SimpleAtoi(cells.back(), &label)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("CSV line %d: bad label '%s'", li + 1, cells.back()));
    }
    labels.push_back(label);
  }
  if (num_classes <= 0) {
    num_classes = labels.empty()
                      ? 1
                      : *std::max_element(labels.begin(), labels.end()) + 1;
  }
  const size_t rows = labels.size();
  absl::StatusOr<Matrix> features =
      Matrix::FromData(rows, columns - 1, std::move(values));
  if (!features.ok()) return features.status();
  return Dataset::Create(*std::move(features), std::move(labels), num_classes);
}

namespace {

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

uint32_t ReadBigEndian32(std::string_view bytes, size_t offset) {
  uint32_t v = 0;
  for (size_t i = 0; i < 4; ++i) {
    v = (v << 8) | static_cast<uint8_t>(bytes[offset + i]);
  }
  return v;
}

}  // namespace

absl::StatusOr<Dataset> LoadCsv(const std::string& path, int num_classes) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseCsv(*text, num_classes);
}

absl::StatusOr<Dataset> ParseIdx(std::string_view images,
                                 std::string_view labels, int num_classes) {
  if (images.size() < 16 || ReadBigEndian32(images, 0) != 0x00000803) {
    return absl::InvalidArgumentError("bad IDX image magic");
  }
  if (labels.size() < 8 || ReadBigEndian32(labels, 0) != 0x00000801) {
    return absl::InvalidArgumentError("bad IDX label magic");
  }
  const size_t count = ReadBigEndian32(images, 4);
  const size_t rows = ReadBigEndian32(images, 8);
  const size_t cols = ReadBigEndian32(images, 12);
  if (ReadBigEndian32(labels, 4) != count) {
    return absl::InvalidArgumentError("IDX image and label counts differ");
  }
  const size_t dim = rows * cols;
  if (images.size() != 16 + count * dim || labels.size() != 8 + count) {
    return absl::InvalidArgumentError("IDX payload size mismatch");
  }
  std::vector<double> values(count * dim);
  for (size_t i = 0; i < values.size(); ++i) {
    values[i] = static_cast<uint8_t>(images[16 + i]) / 255.0;
  }
  std::vector<int> y(count);
  for (size_t i = 0; i < count; ++i) y[i] = static_cast<uint8_t>(labels[8 + i]);
  absl::StatusOr<Matrix> features = Matrix::FromData(count, dim, std::move(values));
  if (!features.ok()) return features.status();
  return Dataset::Create(*std::move(features), std::move(y), num_classes);
}

absl::StatusOr<Dataset> LoadIdx(const std::string& images_path,
                                const std::string& labels_path,
                                int num_classes) {
  absl::StatusOr<std::string> images = ReadFile(images_path);
  if (!images.ok()) return images.status();
  absl::StatusOr<std::string> labels = ReadFile(labels_path);
  if (!labels.ok()) return labels.status();
  return ParseIdx(*images, *labels, num_classes);
}

BlobTask BlobTask::Create(const BlobSpec& spec, uint64_t seed) {
  BlobTask task;
  task.spec_ = spec;
  task.centers_ = Matrix(static_cast<size_t>(spec.num_classes),
                         static_cast<size_t>(spec.dim));
  Rng rng = Rng::Derive(seed, {0xb10b});
  for (double& v : task.centers_.data()) {
    v = rng.Uniform(spec.center_low, spec.center_high);
  }
  return task;
}

Dataset BlobTask::Sample(size_t count, Rng& rng) const {
  std::vector<int> all(static_cast<size_t>(spec_.num_classes));
  std::iota(all.begin(), all.end(), 0);
  return SampleClasses(count, all, rng);
}

Dataset BlobTask::SampleClasses(size_t count, std::span<const int> classes,
                                Rng& rng) const {
  Dataset out;
  out.num_classes = spec_.num_classes;
  out.features = Matrix(count, static_cast<size_t>(spec_.dim));
  out.labels.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const int label = classes[rng.UniformIndex(classes.size())];
    out.labels[i] = label;
    std::span<double> row = out.features.row(i);
    std::span<const double> center = centers_.row(static_cast<size_t>(label));
    for (size_t d = 0; d < row.size(); ++d) {
      row[d] = std::clamp(rng.Normal(center[d], spec_.spread), 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace fairdl
