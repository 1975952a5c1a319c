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

#ifndef STYLEAUG_DATASET_HPP_
#define STYLEAUG_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "styleaug/image.hpp"

namespace styleaug {

struct LabeledImage {
  ImageRGB image;
  std::size_t label = 0;
};

struct Dataset {
  std::vector<std::string> class_names;
  std::vector<LabeledImage> items;

  std::size_t num_classes() const { return class_names.size(); }
  std::vector<std::size_t> class_counts() const;
};

// One subdirectory per class (sorted by name) holding .png/.ppm files.
Dataset load_dataset_dir(const std::filesystem::path& root);
void save_dataset_dir(const Dataset& dataset, const std::filesystem::path& root);

struct SyntheticSpec {
  std::size_t num_classes = 4;
  std::size_t per_class = 40;
  std::size_t size = 64;
  std::uint64_t seed = 0;
};

// Colored stripe, checker and disk patterns; class k has its own hue and
// pattern family, with per-image jitter in phase, frequency, hue and noise.
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

// Deterministic per-class split: the last `fraction` of each class goes to
// the second dataset.
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, double fraction);

}  // namespace styleaug

#endif  // STYLEAUG_DATASET_HPP_
