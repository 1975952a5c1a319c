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

#ifndef STYLEAUG_CONFIG_HPP_
#define STYLEAUG_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "styleaug/augment.hpp"
#include "styleaug/losses.hpp"
#include "styleaug/trainer.hpp"

namespace styleaug {

// Settings shared by all subcommands. Loaded from an INI file with sections
// [run], [policy], [loss] and [train]; see README for the key list.
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> weights;
  std::optional<std::size_t> workers;
  AugmentationPolicy policy;
  LossConfig loss;
  TrainConfig train;

  // Validates the policy, loss and train sections (ConfigError).
  void validate() const;
};

// ConfigError on unreadable files, unknown sections or keys, and values
// that do not parse.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// Applies "section.key=value" (or "section.key", "value"); ConfigError as above.
void apply_setting(PipelineConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value);
void apply_setting(PipelineConfig& cfg, std::string_view assignment);

// Policy name and parameters as a JSON object string.
std::string policy_to_json(const AugmentationPolicy& policy);

// Weight file precedence: explicit flag, STYLEAUG_WEIGHTS, config, built-in.
std::filesystem::path resolve_weights_path(const std::optional<std::filesystem::path>& flag,
                                           const PipelineConfig& cfg);

}  // namespace styleaug

#endif  // STYLEAUG_CONFIG_HPP_
