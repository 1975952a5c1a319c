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

#include <arm_neon.h>

#include <algorithm>
#include <cstddef>

#include "kernels_internal.hpp"

namespace styleaug::kernels {
namespace {

void conv3x3_neon(const float* padded, std::size_t cin, std::size_t h,
                  std::size_t w, const float* weight, const float* bias,
                  std::size_t cout, float* out) {
  const std::size_t pw = w + 2;
  const std::size_t plane = (h + 2) * pw;
  for (std::size_t oc = 0; oc < cout; ++oc) {
    for (std::size_t y = 0; y < h; ++y) {
      float* dst = out + (oc * h + y) * w;
      std::size_t x = 0;
      for (; x + 4 <= w; x += 4) {
        float32x4_t acc = vdupq_n_f32(bias[oc]);
        for (std::size_t ic = 0; ic < cin; ++ic) {
          const float* src = padded + ic * plane + y * pw + x;
          const float* k = weight + (oc * cin + ic) * 9;
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) {
              acc = vfmaq_n_f32(acc, vld1q_f32(src + ky * pw + kx), k[ky * 3 + kx]);
            }
          }
        }
        vst1q_f32(dst + x, acc);
      }
      for (; x < w; ++x) {
        float s = bias[oc];
        for (std::size_t ic = 0; ic < cin; ++ic) {
          const float* src = padded + ic * plane + y * pw + x;
          const float* k = weight + (oc * cin + ic) * 9;
          for (int ky = 0; ky < 3; ++ky) {
            for (int kx = 0; kx < 3; ++kx) s += k[ky * 3 + kx] * src[ky * pw + kx];
          }
        }
        dst[x] = s;
      }
    }
  }
}

void relu_neon(float* data, std::size_t n) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(data + i, vmaxq_f32(vld1q_f32(data + i), zero));
  for (; i < n; ++i) data[i] = std::max(data[i], 0.0f);
}

void affine_neon(const float* x, float scale, float shift, float* out,
                 std::size_t n) {
  const float32x4_t b = vdupq_n_f32(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(out + i, vfmaq_n_f32(b, vld1q_f32(x + i), scale));
  for (; i < n; ++i) out[i] = x[i] * scale + shift;
}

void mix_clamp_neon(const float* a, const float* b, float weight_a, float* out,
                    std::size_t n) {
  const float weight_b = 1.0f - weight_a;
  const float32x4_t zero = vdupq_n_f32(0.0f);
  const float32x4_t one = vdupq_n_f32(1.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t v = vmulq_n_f32(vld1q_f32(b + i), weight_b);
    v = vfmaq_n_f32(v, vld1q_f32(a + i), weight_a);
    vst1q_f32(out + i, vminq_f32(vmaxq_f32(v, zero), one));
  }
  for (; i < n; ++i) out[i] = std::clamp(weight_a * a[i] + weight_b * b[i], 0.0f, 1.0f);
}

void axpy_neon(float alpha, const float* x, float* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(y + i, vfmaq_n_f32(vld1q_f32(y + i), vld1q_f32(x + i), alpha));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table = [] {
    KernelTable t = scalar_table();
    t.isa = Isa::kNeon;
    t.conv3x3 = conv3x3_neon;
    t.relu = relu_neon;
    t.affine = affine_neon;
    t.mix_clamp = mix_clamp_neon;
    t.axpy = axpy_neon;
    return t;
  }();
  return table;
}

}  // namespace styleaug::kernels
