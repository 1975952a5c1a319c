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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "styleaug/augment.hpp"
#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"

namespace styleaug {
namespace {

constexpr float kGrayR = 0.2989f;
constexpr float kGrayG = 0.587f;
constexpr float kGrayB = 0.114f;

void check_rgb(const ImageRGB& img) {
  const Tensor& t = img.pixels();
  if (t.rank() != 3 || t.dim(0) != 3) {
    fail(ErrorCode::kShapeError, "expected a [3,H,W] image, got " + shape_to_string(t.shape()));
  }
}

ImageRGB like(const ImageRGB& img) {
  return ImageRGB(Tensor(img.pixels().shape()), img.source_id());
}

// out = clamp(factor * img + (1 - factor) * base) with base per pixel.
ImageRGB blend_with(const ImageRGB& img, const std::vector<float>& base, float factor) {
  ImageRGB out = like(img);
  const std::size_t plane = img.height() * img.width();
  const float* src = img.pixels().raw();
  float* dst = out.pixels().raw();
  const bool scalar_base = base.size() == 1;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < plane; ++i) {
      const float b = scalar_base ? base[0] : base[i];
      const float v = factor * src[c * plane + i] + (1.0f - factor) * b;
      dst[c * plane + i] = std::clamp(v, 0.0f, 1.0f);
    }
  }
  return out;
}

std::vector<float> grayscale(const ImageRGB& img) {
  const std::size_t plane = img.height() * img.width();
  const float* p = img.pixels().raw();
  std::vector<float> gray(plane);
  for (std::size_t i = 0; i < plane; ++i) {
    gray[i] = kGrayR * p[i] + kGrayG * p[plane + i] + kGrayB * p[2 * plane + i];
  }
  return gray;
}

// Inverse-mapped affine warp. For output pixel centre p (relative to the image
// centre) the source point is m * p + centre - offset.
ImageRGB warp(const ImageRGB& img, const std::array<double, 4>& m, double offset_x,
              double offset_y) {
  check_rgb(img);
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  const double cx = 0.5 * static_cast<double>(w);
  const double cy = 0.5 * static_cast<double>(h);
  ImageRGB out = like(img);
  const Tensor& src = img.pixels();
  Tensor& dst = out.pixels();
  const auto iw = static_cast<std::int64_t>(w);
  const auto ih = static_cast<std::int64_t>(h);
  for (std::size_t y = 0; y < h; ++y) {
    const double py = static_cast<double>(y) + 0.5 - cy;
    for (std::size_t x = 0; x < w; ++x) {
      const double px = static_cast<double>(x) + 0.5 - cx;
      const double sx = m[0] * px + m[1] * py + cx - 0.5 - offset_x;
      const double sy = m[2] * px + m[3] * py + cy - 0.5 - offset_y;
      const double fx0 = std::floor(sx);
      const double fy0 = std::floor(sy);
      if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= static_cast<double>(w) ||
          fy0 >= static_cast<double>(h)) {
        continue;
      }
      const auto x0 = static_cast<std::int64_t>(fx0);
      const auto y0 = static_cast<std::int64_t>(fy0);
      const float ax = static_cast<float>(sx - fx0);
      const float ay = static_cast<float>(sy - fy0);
      const float wts[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
      const std::int64_t xs[4] = {x0, x0 + 1, x0, x0 + 1};
      const std::int64_t ys[4] = {y0, y0, y0 + 1, y0 + 1};
      for (std::size_t c = 0; c < 3; ++c) {
        float acc = 0.0f;
        for (int k = 0; k < 4; ++k) {
          if (wts[k] == 0.0f || xs[k] < 0 || ys[k] < 0 || xs[k] >= iw || ys[k] >= ih) continue;
          acc += wts[k] * src.at(c, static_cast<std::size_t>(ys[k]), static_cast<std::size_t>(xs[k]));
        }
        dst.at(c, y, x) = std::clamp(acc, 0.0f, 1.0f);
      }
    }
  }
  return out;
}

template <typename F>
ImageRGB map_u8(const ImageRGB& img, F&& lut_for_channel) {
  check_rgb(img);
  ImageRGB out = like(img);
  const std::size_t plane = img.height() * img.width();
  for (std::size_t c = 0; c < 3; ++c) {
    auto src = img.pixels().channel(c);
    auto dst = out.pixels().channel(c);
    std::array<int, 256> hist{};
    for (float v : src) ++hist[to_u8(v)];
    const std::array<float, 256> lut = lut_for_channel(hist, plane);
    for (std::size_t i = 0; i < plane; ++i) dst[i] = lut[to_u8(src[i])];
  }
  return out;
}

}  // namespace

ImageRGB adjust_brightness(const ImageRGB& img, double factor) {
  check_rgb(img);
  return blend_with(img, {0.0f}, static_cast<float>(factor));
}

ImageRGB adjust_contrast(const ImageRGB& img, double factor) {
  check_rgb(img);
  const std::vector<float> gray = grayscale(img);
  double sum = 0.0;
  for (float g : gray) sum += g;
  const float mean = static_cast<float>(sum / static_cast<double>(gray.size()));
  return blend_with(img, {mean}, static_cast<float>(factor));
}

ImageRGB adjust_saturation(const ImageRGB& img, double factor) {
  check_rgb(img);
  return blend_with(img, grayscale(img), static_cast<float>(factor));
}

ImageRGB adjust_hue(const ImageRGB& img, double offset) {
  check_rgb(img);
  Tensor hsv = rgb_to_hsv(img.pixels());
  const float off = static_cast<float>(offset);
  for (float& h : hsv.channel(0)) {
    float v = h + off;
    v -= std::floor(v);
    h = v >= 1.0f ? 0.0f : v;
  }
  ImageRGB out(hsv_to_rgb(hsv), img.source_id());
  clamp01_inplace(out.pixels());
  return out;
}

ImageRGB autocontrast(const ImageRGB& img) {
  check_rgb(img);
  ImageRGB out = like(img);
  for (std::size_t c = 0; c < 3; ++c) {
    auto src = img.pixels().channel(c);
    auto dst = out.pixels().channel(c);
    const auto [lo_it, hi_it] = std::minmax_element(src.begin(), src.end());
    const float lo = *lo_it;
    const float hi = *hi_it;
    if (!(hi > lo)) {
      std::copy(src.begin(), src.end(), dst.begin());
      continue;
    }
    const float inv = 1.0f / (hi - lo);
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = std::clamp((src[i] - lo) * inv, 0.0f, 1.0f);
    }
  }
  return out;
}

ImageRGB equalize(const ImageRGB& img) {
  return map_u8(img, [](const std::array<int, 256>& hist, std::size_t) {
    std::array<float, 256> lut{};
    for (int i = 0; i < 256; ++i) lut[i] = static_cast<float>(i) / 255.0f;
    std::vector<int> nonzero;
    for (int n : hist) {
      if (n > 0) nonzero.push_back(n);
    }
    if (nonzero.size() <= 1) return lut;
    long total = 0;
    for (int n : nonzero) total += n;
    const long step = (total - nonzero.back()) / 255;
    if (step == 0) return lut;
    long n = step / 2;
    for (int i = 0; i < 256; ++i) {
      lut[i] = static_cast<float>(std::min(255L, n / step)) / 255.0f;
      n += hist[i];
    }
    return lut;
  });
}

ImageRGB posterize(const ImageRGB& img, int bits) {
  if (bits < 0 || bits > 8) fail(ErrorCode::kInvalidParameter, "posterize bits must be in [0,8]");
  const int mask = (0xFF << (8 - bits)) & 0xFF;
  return map_u8(img, [mask](const std::array<int, 256>&, std::size_t) {
    std::array<float, 256> lut{};
    for (int i = 0; i < 256; ++i) lut[i] = static_cast<float>(i & mask) / 255.0f;
    return lut;
  });
}

ImageRGB solarize(const ImageRGB& img, double threshold) {
  check_rgb(img);
  ImageRGB out = like(img);
  const float t = static_cast<float>(threshold);
  auto src = img.pixels().data();
  auto dst = out.pixels().data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= t ? 1.0f - src[i] : src[i];
  return out;
}

ImageRGB rotate(const ImageRGB& img, double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(r);
  const double s = std::sin(r);
  return warp(img, {c, -s, s, c}, 0.0, 0.0);
}

ImageRGB shear_x(const ImageRGB& img, double factor) {
  return warp(img, {1.0, factor, 0.0, 1.0}, 0.0, 0.0);
}

ImageRGB shear_y(const ImageRGB& img, double factor) {
  return warp(img, {1.0, 0.0, factor, 1.0}, 0.0, 0.0);
}

ImageRGB translate_x(const ImageRGB& img, double pixels) {
  return warp(img, {1.0, 0.0, 0.0, 1.0}, pixels, 0.0);
}

ImageRGB translate_y(const ImageRGB& img, double pixels) {
  return warp(img, {1.0, 0.0, 0.0, 1.0}, 0.0, pixels);
}

ImageRGB translate(const ImageRGB& img, int dx, int dy) {
  check_rgb(img);
  ImageRGB out = like(img);
  const auto h = static_cast<int>(img.height());
  const auto w = static_cast<int>(img.width());
  const int x_begin = std::clamp(dx, 0, w);
  const int x_end = std::clamp(w + dx, 0, w);
  if (x_end <= x_begin) return out;
  for (std::size_t c = 0; c < 3; ++c) {
    for (int y = 0; y < h; ++y) {
      const int sy = y - dy;
      if (sy < 0 || sy >= h) continue;
      const float* src = img.pixels().raw() + (c * img.height() + static_cast<std::size_t>(sy)) * img.width();
      float* dst = &out.pixels().at(c, static_cast<std::size_t>(y), 0);
      std::copy(src + (x_begin - dx), src + (x_end - dx), dst + x_begin);
    }
  }
  return out;
}

Tensor foveation_mask(std::size_t height, std::size_t width, double fovea_y, double fovea_x,
                      double tau, double min_weight) {
  if (!(tau > 0.0)) fail(ErrorCode::kInvalidParameter, "foveation tau must be positive");
  if (!(min_weight >= 0.0 && min_weight <= 1.0)) {
    fail(ErrorCode::kInvalidParameter, "foveation floor must be in [0,1]");
  }
  Tensor mask({height, width});
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double d = std::hypot(static_cast<double>(y) - fovea_y, static_cast<double>(x) - fovea_x);
      mask[y * width + x] = static_cast<float>(std::max(min_weight, std::exp(-d / tau)));
    }
  }
  return mask;
}

}  // namespace styleaug
