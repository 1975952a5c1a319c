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

#include "styleaug/image.hpp"

#include <algorithm>
#include <cmath>

#include "styleaug/error.hpp"

namespace styleaug {

ImageRGB::ImageRGB(Tensor pixels, std::string source_id)
    : pixels_(std::move(pixels)), source_id_(std::move(source_id)) {
  if (pixels_.rank() != 3 || pixels_.dim(0) != 3) {
    fail(ErrorCode::kShapeError, "ImageRGB needs a [3,H,W] tensor, got " +
                                     shape_to_string(pixels_.shape()));
  }
}

ImageRGB::ImageRGB(std::size_t height, std::size_t width, std::string source_id)
    : ImageRGB(Tensor({3, height, width}), std::move(source_id)) {}

std::uint8_t to_u8(float v) {
  const float c = std::clamp(v, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

Hsv rgb_to_hsv(float r, float g, float b) {
  const float maxc = std::max({r, g, b});
  const float minc = std::min({r, g, b});
  const float delta = maxc - minc;
  Hsv out{0.0f, 0.0f, maxc};
  if (maxc > 0.0f) out.s = delta / maxc;
  if (delta > 0.0f) {
    float h;
    if (maxc == r) {
      h = (g - b) / delta;
    } else if (maxc == g) {
      h = (b - r) / delta + 2.0f;
    } else {
      h = (r - g) / delta + 4.0f;
    }
    h /= 6.0f;
    h -= std::floor(h);
    if (h >= 1.0f) h = 0.0f;
    out.h = h;
  }
  return out;
}

void hsv_to_rgb(const Hsv& hsv, float& r, float& g, float& b) {
  const float h6 = hsv.h * 6.0f;
  const float sector = std::floor(h6);
  const float f = h6 - sector;
  const float v = hsv.v, s = hsv.s;
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - s * f);
  const float t = v * (1.0f - s * (1.0f - f));
  switch (static_cast<int>(sector) % 6) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
}

Tensor rgb_to_hsv(const Tensor& rgb) {
  Tensor out(rgb.shape());
  const std::size_t n = rgb.dim(1) * rgb.dim(2);
  const float* r = rgb.raw();
  float* o = out.raw();
  for (std::size_t i = 0; i < n; ++i) {
    const Hsv hsv = rgb_to_hsv(r[i], r[n + i], r[2 * n + i]);
    o[i] = hsv.h;
    o[n + i] = hsv.s;
    o[2 * n + i] = hsv.v;
  }
  return out;
}

Tensor hsv_to_rgb(const Tensor& hsv) {
  Tensor out(hsv.shape());
  const std::size_t n = hsv.dim(1) * hsv.dim(2);
  const float* h = hsv.raw();
  float* o = out.raw();
  for (std::size_t i = 0; i < n; ++i) {
    hsv_to_rgb(Hsv{h[i], h[n + i], h[2 * n + i]}, o[i], o[n + i], o[2 * n + i]);
  }
  return out;
}

namespace {

struct AxisTaps {
  std::vector<std::size_t> lo, hi;
  std::vector<float> frac;
};

// Source taps for sampling `out` positions from the window [offset,
// offset + length) of an axis.
AxisTaps make_taps(std::size_t out, std::size_t offset, std::size_t length) {
  AxisTaps taps;
  taps.lo.resize(out);
  taps.hi.resize(out);
  taps.frac.resize(out);
  const double scale = static_cast<double>(length) / static_cast<double>(out);
  for (std::size_t i = 0; i < out; ++i) {
    double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(length - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(src));
    const std::size_t i1 = std::min(i0 + 1, length - 1);
    taps.lo[i] = offset + i0;
    taps.hi[i] = offset + i1;
    taps.frac[i] = static_cast<float>(src - static_cast<double>(i0));
  }
  return taps;
}

void check_box(const ImageRGB& image, const CropBox& box) {
  if (box.width <= 0 || box.height <= 0 || box.x < 0 || box.y < 0 ||
      static_cast<std::size_t>(box.x + box.width) > image.width() ||
      static_cast<std::size_t>(box.y + box.height) > image.height()) {
    fail(ErrorCode::kInvalidParameter,
         "crop box (" + std::to_string(box.x) + "," + std::to_string(box.y) + "," +
             std::to_string(box.width) + "," + std::to_string(box.height) +
             ") outside image " + std::to_string(image.width()) + "x" +
             std::to_string(image.height()));
  }
}

}  // namespace

ImageRGB resized_crop(const ImageRGB& image, const CropBox& box, std::size_t out_h,
                      std::size_t out_w) {
  check_box(image, box);
  if (out_h == 0 || out_w == 0) fail(ErrorCode::kShapeError, "resize target must be non-empty");
  const AxisTaps ty = make_taps(out_h, static_cast<std::size_t>(box.y), static_cast<std::size_t>(box.height));
  const AxisTaps tx = make_taps(out_w, static_cast<std::size_t>(box.x), static_cast<std::size_t>(box.width));
  const std::size_t w = image.width();
  ImageRGB out(out_h, out_w, image.source_id());
  for (std::size_t c = 0; c < 3; ++c) {
    const float* src = image.pixels().channel(c).data();
    float* dst = out.pixels().channel(c).data();
    for (std::size_t y = 0; y < out_h; ++y) {
      const float* r0 = src + ty.lo[y] * w;
      const float* r1 = src + ty.hi[y] * w;
      const float fy = ty.frac[y];
      float* drow = dst + y * out_w;
      for (std::size_t x = 0; x < out_w; ++x) {
        const float fx = tx.frac[x];
        const float top = r0[tx.lo[x]] + fx * (r0[tx.hi[x]] - r0[tx.lo[x]]);
        const float bottom = r1[tx.lo[x]] + fx * (r1[tx.hi[x]] - r1[tx.lo[x]]);
        drow[x] = top + fy * (bottom - top);
      }
    }
  }
  return out;
}

ImageRGB resize_bilinear(const ImageRGB& image, std::size_t out_h, std::size_t out_w) {
  return resized_crop(image,
                      CropBox{0, 0, static_cast<int>(image.width()), static_cast<int>(image.height())},
                      out_h, out_w);
}

ImageRGB crop(const ImageRGB& image, const CropBox& box) {
  check_box(image, box);
  const auto bw = static_cast<std::size_t>(box.width), bh = static_cast<std::size_t>(box.height);
  ImageRGB out(bh, bw, image.source_id());
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < bh; ++y) {
      for (std::size_t x = 0; x < bw; ++x) {
        out.at(c, y, x) = image.at(c, y + static_cast<std::size_t>(box.y), x + static_cast<std::size_t>(box.x));
      }
    }
  }
  return out;
}

ImageRGB hflip(const ImageRGB& image) {
  ImageRGB out = image;
  const std::size_t w = image.width();
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < image.height(); ++y) {
      float* row = &out.at(c, y, 0);
      std::reverse(row, row + w);
    }
  }
  return out;
}

ImageRGB center_crop(const ImageRGB& image, std::size_t out_h, std::size_t out_w) {
  if (out_h > image.height() || out_w > image.width()) {
    fail(ErrorCode::kImageTooSmall, "center_crop larger than image");
  }
  const auto top = static_cast<int>(std::lround((image.height() - out_h) / 2.0));
  const auto left = static_cast<int>(std::lround((image.width() - out_w) / 2.0));
  return crop(image, CropBox{left, top, static_cast<int>(out_w), static_cast<int>(out_h)});
}

ImageRGB validation_preprocess(const ImageRGB& image) {
  constexpr std::size_t kShort = 256, kCrop = 224;
  const std::size_t h = image.height(), w = image.width();
  std::size_t nh, nw;
  if (h <= w) {
    nh = kShort;
    nw = static_cast<std::size_t>(static_cast<double>(kShort) * w / h);
  } else {
    nw = kShort;
    nh = static_cast<std::size_t>(static_cast<double>(kShort) * h / w);
  }
  return center_crop(resize_bilinear(image, nh, nw), kCrop, kCrop);
}

Tensor block_average(const Tensor& input, std::size_t factor) {
  if (input.rank() != 3) fail(ErrorCode::kShapeMismatch, "block_average needs [C,H,W]");
  if (factor == 0 || input.dim(1) % factor || input.dim(2) % factor) {
    fail(ErrorCode::kShapeError, "block_average: dims " + shape_to_string(input.shape()) +
                                     " not divisible by " + std::to_string(factor));
  }
  const std::size_t c = input.dim(0), oh = input.dim(1) / factor, ow = input.dim(2) / factor;
  Tensor out({c, oh, ow});
  const float inv = 1.0f / static_cast<float>(factor * factor);
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        float s = 0.0f;
        for (std::size_t dy = 0; dy < factor; ++dy) {
          for (std::size_t dx = 0; dx < factor; ++dx) {
            s += input.at(ch, y * factor + dy, x * factor + dx);
          }
        }
        out.at(ch, y, x) = s * inv;
      }
    }
  }
  return out;
}

void clamp01_inplace(Tensor& t) {
  for (float& v : t.data()) v = std::clamp(v, 0.0f, 1.0f);
}

}  // namespace styleaug
