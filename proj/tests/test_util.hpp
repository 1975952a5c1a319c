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

#ifndef STYLEAUG_TESTS_TEST_UTIL_HPP_
#define STYLEAUG_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "styleaug/image.hpp"
#include "styleaug/rng.hpp"
#include "styleaug/tensor.hpp"

namespace styleaug::testing {

inline std::filesystem::path source_dir() { return STYLEAUG_SOURCE_DIR; }
inline std::filesystem::path test_data_dir() { return STYLEAUG_TEST_DATA_DIR; }
inline std::filesystem::path shipped_weights() {
  return source_dir() / "data" / "weights" / "adain_b8.adwt";
}
inline std::filesystem::path shipped_images_dir() { return source_dir() / "data" / "images"; }

inline Tensor random_tensor(const Shape& shape, std::uint64_t seed, float lo = -1.0f,
                            float hi = 1.0f) {
  Rng rng(seed);
  Tensor t(shape);
  for (float& v : t.data()) v = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

inline ImageRGB random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  return ImageRGB(random_tensor({3, h, w}, seed, 0.0f, 1.0f));
}

// Smooth color gradients plus a few blobs: closer to natural images than
// white noise.
inline ImageRGB smooth_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  double a[3], b[3], c[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = rng.uniform(0.1, 0.9);
    b[k] = rng.uniform(-0.5, 0.5);
    c[k] = rng.uniform(-0.5, 0.5);
  }
  const double fx = rng.uniform(1.0, 4.0), fy = rng.uniform(1.0, 4.0);
  ImageRGB img(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(w);
      const double v = static_cast<double>(y) / static_cast<double>(h);
      for (std::size_t k = 0; k < 3; ++k) {
        const double val = a[k] + b[k] * u + c[k] * v + 0.15 * std::sin(6.28 * (fx * u + fy * v));
        img.at(k, y, x) = static_cast<float>(std::clamp(val, 0.0, 1.0));
      }
    }
  }
  return img;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  }
  return m;
}

inline double mean_abs_diff(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return s / static_cast<double>(a.size());
}

// Two-sided Kolmogorov-Smirnov distance of a sample against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace styleaug::testing

#endif  // STYLEAUG_TESTS_TEST_UTIL_HPP_
