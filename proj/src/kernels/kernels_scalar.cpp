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
#include <cstddef>

#include "kernels_internal.hpp"

namespace styleaug::kernels {
namespace {

void conv3x3_scalar(const float* padded, std::size_t cin, std::size_t h,
                    std::size_t w, const float* weight, const float* bias,
                    std::size_t cout, float* out) {
  const std::size_t pw = w + 2;
  const std::size_t plane = (h + 2) * pw;
  for (std::size_t oc = 0; oc < cout; ++oc) {
    float* dst = out + oc * h * w;
    std::fill(dst, dst + h * w, bias[oc]);
    for (std::size_t ic = 0; ic < cin; ++ic) {
      const float* src = padded + ic * plane;
      const float* k = weight + (oc * cin + ic) * 9;
      for (std::size_t y = 0; y < h; ++y) {
        float* row = dst + y * w;
        for (std::size_t ky = 0; ky < 3; ++ky) {
          const float* in = src + (y + ky) * pw;
          const float k0 = k[ky * 3], k1 = k[ky * 3 + 1], k2 = k[ky * 3 + 2];
          for (std::size_t x = 0; x < w; ++x) {
            row[x] += k0 * in[x] + k1 * in[x + 1] + k2 * in[x + 2];
          }
        }
      }
    }
  }
}

void conv1x1_scalar(const float* input, std::size_t cin, std::size_t n,
                    const float* weight, const float* bias, std::size_t cout,
                    float* out) {
  for (std::size_t oc = 0; oc < cout; ++oc) {
    float* dst = out + oc * n;
    std::fill(dst, dst + n, bias[oc]);
    for (std::size_t ic = 0; ic < cin; ++ic) {
      const float k = weight[oc * cin + ic];
      const float* src = input + ic * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] += k * src[i];
    }
  }
}

void relu_scalar(float* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) data[i] = std::max(data[i], 0.0f);
}

void affine_scalar(const float* x, float scale, float shift, float* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * scale + shift;
}

void mix_clamp_scalar(const float* a, const float* b, float weight_a,
                      float* out, std::size_t n) {
  const float weight_b = 1.0f - weight_a;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::clamp(weight_a * a[i] + weight_b * b[i], 0.0f, 1.0f);
  }
}

void mix_weighted_clamp_scalar(const float* a, const float* b, const float* w,
                               float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::clamp(w[i] * a[i] + (1.0f - w[i]) * b[i], 0.0f, 1.0f);
  }
}

void maxpool2x2_scalar(const float* in, std::size_t h, std::size_t w,
                       float* out) {
  const std::size_t oh = h / 2, ow = w / 2;
  for (std::size_t y = 0; y < oh; ++y) {
    const float* r0 = in + 2 * y * w;
    const float* r1 = r0 + w;
    for (std::size_t x = 0; x < ow; ++x) {
      out[y * ow + x] = std::max(std::max(r0[2 * x], r0[2 * x + 1]),
                                 std::max(r1[2 * x], r1[2 * x + 1]));
    }
  }
}

double sum_scalar(const float* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_dev_scalar(const float* x, std::size_t n, double mean) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean;
    s += d * d;
  }
  return s;
}

double dot_scalar(const float* a, const float* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Isa::kScalar,         conv3x3_scalar,   conv1x1_scalar,
      relu_scalar,          affine_scalar,    mix_clamp_scalar,
      mix_weighted_clamp_scalar, maxpool2x2_scalar, sum_scalar,
      sum_sq_dev_scalar,    dot_scalar,       axpy_scalar,
  };
  return table;
}

}  // namespace styleaug::kernels
