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

#include "styleaug/metrics.hpp"

#include <fstream>
#include "json.hpp"

#include "styleaug/error.hpp"

namespace styleaug {
namespace {

using nlohmann::json;

std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(ErrorCode::kInvalidRecord, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string required_string(const json& j, const char* key) {
  auto v = optional_string(j, key);
  if (!v) fail(ErrorCode::kMissingField, std::string("record has no '") + key + "'");
  return *v;
}

}  // namespace

PredictionRecord parse_prediction_record(std::string_view json_line) {
  const json j = json::parse(json_line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::kInvalidRecord, "record is not a JSON object");
  }
  PredictionRecord r;
  r.image_id = required_string(j, "image_id");
  r.predicted_label = required_string(j, "predicted_label");
  r.true_label = optional_string(j, "true_label");
  r.shape_label = optional_string(j, "shape_label");
  r.texture_label = optional_string(j, "texture_label");
  r.dataset_tag = optional_string(j, "dataset_tag").value_or("");
  const bool cue_conflict = r.shape_label && r.texture_label;
  if (!r.true_label && !cue_conflict) {
    fail(ErrorCode::kInvalidRecord,
         "record '" + r.image_id + "' needs true_label or both shape_label and texture_label");
  }
  if (cue_conflict && *r.shape_label == *r.texture_label) {
    fail(ErrorCode::kInvalidRecord,
         "record '" + r.image_id + "' has identical shape and texture labels");
  }
  return r;
}

std::vector<PredictionRecord> read_prediction_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<PredictionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_prediction_record(line));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

double top1_accuracy(std::span<const PredictionRecord> records) {
  if (records.empty()) fail(ErrorCode::kEmptyInput, "no prediction records");
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (!r.true_label) fail(ErrorCode::kMissingField, "record '" + r.image_id + "' has no true_label");
    if (r.predicted_label == *r.true_label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

ShapeBias shape_bias(std::span<const PredictionRecord> records) {
  if (records.empty()) fail(ErrorCode::kEmptyInput, "no prediction records");
  ShapeBias out;
  for (const auto& r : records) {
    if (!r.shape_label || !r.texture_label) {
      fail(ErrorCode::kMissingField, "record '" + r.image_id + "' lacks shape or texture label");
    }
    if (r.predicted_label == *r.shape_label) {
      ++out.n_shape;
    } else if (r.predicted_label == *r.texture_label) {
      ++out.n_texture;
    }
  }
  const std::size_t decided = out.n_shape + out.n_texture;
  if (decided == 0) {
    fail(ErrorCode::kNoDecidableRecords, "no prediction matches a shape or texture label");
  }
  out.bias = static_cast<double>(out.n_shape) / static_cast<double>(decided);
  return out;
}

CorruptionMean mean_corruption_accuracy(const std::map<std::string, double>& per_dataset) {
  if (per_dataset.empty()) fail(ErrorCode::kEmptyInput, "no corruption datasets");
  CorruptionMean out;
  double sum = 0.0;
  for (const auto& [tag, acc] : per_dataset) {
    if (!(acc >= 0.0 && acc <= 1.0)) {
      fail(ErrorCode::kInvalidRecord, "accuracy for '" + tag + "' is outside [0,1]");
    }
    sum += acc;
  }
  out.n = per_dataset.size();
  out.value = sum / static_cast<double>(out.n);
  if (out.n != kExpectedCorruptionDatasets) {
    out.warnings.push_back("expected " + std::to_string(kExpectedCorruptionDatasets) +
                           " corruption datasets, got " + std::to_string(out.n));
  }
  return out;
}

std::map<std::string, double> per_dataset_accuracy(std::span<const PredictionRecord> records) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& r : records) {
    if (!r.true_label) fail(ErrorCode::kMissingField, "record '" + r.image_id + "' has no true_label");
    auto& [hit, total] = counts[r.dataset_tag];
    hit += r.predicted_label == *r.true_label ? 1 : 0;
    ++total;
  }
  std::map<std::string, double> out;
  for (const auto& [tag, c] : counts) {
    out[tag] = static_cast<double>(c.first) / static_cast<double>(c.second);
  }
  return out;
}

std::string MetricReport::to_json() const {
  json j;
  j["metric"] = metric;
  j["value"] = value;
  j["n"] = n;
  j["warnings"] = warnings;
  return j.dump();
}

}  // namespace styleaug
