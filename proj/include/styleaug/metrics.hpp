/* Copyright 2026 The StyleAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef STYLEAUG_METRICS_HPP_
#define STYLEAUG_METRICS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace styleaug {

struct PredictionRecord {
  std::string image_id;
  std::string predicted_label;
  std::optional<std::string> true_label;
  std::optional<std::string> shape_label;
  std::optional<std::string> texture_label;
  std::string dataset_tag;
};

// Throws InvalidRecord for malformed JSON or broken invariants, MissingField
// when image_id or predicted_label is absent. Unknown fields are ignored.
PredictionRecord parse_prediction_record(std::string_view json_line);
// One record per non-empty line; errors name the offending line.
std::vector<PredictionRecord> read_prediction_log(const std::filesystem::path& path);

// EmptyInput for no records, MissingField if any record lacks true_label.
double top1_accuracy(std::span<const PredictionRecord> records);

struct ShapeBias {
  double bias = 0.0;
  std::size_t n_shape = 0;
  std::size_t n_texture = 0;
};

// Records matching neither cue are excluded. NoDecidableRecords when no
// record matches either.
ShapeBias shape_bias(std::span<const PredictionRecord> records);

inline constexpr std::size_t kExpectedCorruptionDatasets = 95;

struct CorruptionMean {
  double value = 0.0;
  std::size_t n = 0;
  std::vector<std::string> warnings;
};

// Unweighted mean over datasets; warns when the count differs from 95.
CorruptionMean mean_corruption_accuracy(const std::map<std::string, double>& per_dataset);

// Top-1 accuracy per dataset_tag.
std::map<std::string, double> per_dataset_accuracy(std::span<const PredictionRecord> records);

struct MetricReport {
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

}  // namespace styleaug

#endif  // STYLEAUG_METRICS_HPP_
