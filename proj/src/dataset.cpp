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

#include "styleaug/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "styleaug/error.hpp"
#include "styleaug/rng.hpp"

namespace styleaug {
namespace {

bool is_image_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm";
}

double pattern_value(std::size_t kind, double x, double y, double freq, double phase) {
  const double two_pi = 2.0 * std::numbers::pi;
  switch (kind % 4) {
    case 0: return 0.5 + 0.5 * std::sin(two_pi * (freq * y + phase));
    case 1: return 0.5 + 0.5 * std::sin(two_pi * (freq * x + phase));
    case 2: {
      const double a = std::sin(two_pi * (freq * x + phase));
      const double b = std::sin(two_pi * (freq * y + phase));
      return a * b > 0.0 ? 1.0 : 0.0;
    }
    default: {
      const double r = std::hypot(x - 0.5, y - 0.5);
      return 0.5 + 0.5 * std::cos(two_pi * (freq * r + phase));
    }
  }
}

}  // namespace

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (const auto& item : items) ++counts.at(item.label);
  return counts;
}

Dataset load_dataset_dir(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) fail(ErrorCode::kIoError, "dataset directory not found: " + root.string());
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  Dataset ds;
  for (const auto& dir : class_dirs) {
    const std::size_t label = ds.class_names.size();
    ds.class_names.push_back(dir.filename().string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      ImageRGB img = load_image(f);
      img.set_source_id(ds.class_names.back() + "/" + f.filename().string());
      ds.items.push_back({std::move(img), label});
    }
  }
  return ds;
}

void save_dataset_dir(const Dataset& dataset, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::vector<std::size_t> seen(dataset.num_classes(), 0);
  for (const auto& name : dataset.class_names) fs::create_directories(root / name);
  for (const auto& item : dataset.items) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%05zu.png", seen[item.label]++);
    save_image(item.image, root / dataset.class_names[item.label] / buf);
  }
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  if (spec.num_classes < 2) fail(ErrorCode::kInvalidParameter, "synthetic data needs at least two classes");
  if (spec.size < 8) fail(ErrorCode::kInvalidParameter, "synthetic images must be at least 8 pixels");
  const Rng root(spec.seed);
  Dataset ds;
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    ds.class_names.push_back("class" + std::to_string(c));
  }
  const double n = static_cast<double>(spec.size);
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    const double base_hue = static_cast<double>(c) / static_cast<double>(spec.num_classes);
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      Rng rng = root.fork({c, i});
      const double hue = base_hue + rng.uniform(-0.04, 0.04);
      const double sat = rng.uniform(0.45, 0.75);
      const double freq = rng.uniform(3.0, 6.0);
      const double phase = rng.uniform();
      ImageRGB img(spec.size, spec.size, "class" + std::to_string(c) + "/" + std::to_string(i));
      for (std::size_t y = 0; y < spec.size; ++y) {
        for (std::size_t x = 0; x < spec.size; ++x) {
          const double p = pattern_value(c, (static_cast<double>(x) + 0.5) / n,
                                         (static_cast<double>(y) + 0.5) / n, freq, phase);
          Hsv hsv{static_cast<float>(hue - std::floor(hue)), static_cast<float>(sat),
                  static_cast<float>(0.3 + 0.5 * p)};
          float rgb[3];
          hsv_to_rgb(hsv, rgb[0], rgb[1], rgb[2]);
          for (std::size_t ch = 0; ch < 3; ++ch) {
            const double v = rgb[ch] + 0.04 * rng.normal();
            img.at(ch, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
          }
        }
      }
      ds.items.push_back({std::move(img), c});
    }
  }
  return ds;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, double fraction) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    fail(ErrorCode::kInvalidParameter, "split fraction must be in [0,1)");
  }
  const std::vector<std::size_t> counts = dataset.class_counts();
  std::vector<std::size_t> held(counts.size()), seen(counts.size(), 0);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    held[c] = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(counts[c])));
  }
  std::pair<Dataset, Dataset> out;
  out.first.class_names = dataset.class_names;
  out.second.class_names = dataset.class_names;
  for (const auto& item : dataset.items) {
    const std::size_t k = seen[item.label]++;
    (k >= counts[item.label] - held[item.label] ? out.second : out.first).items.push_back(item);
  }
  return out;
}

}  // namespace styleaug
