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

#include <immintrin.h>

#include <algorithm>
#include <cstddef>
#include <vector>

#include "kernels_internal.hpp"

namespace styleaug::kernels {
namespace {

inline double hsum_pd(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Register-blocked micro-kernel: OC output channels x XV vectors of 8
// pixels, so every input vector load feeds OC fused multiply-adds. Weights
// come packed as [cin][9][OC]. The masked variant covers a row tail of
// fewer than 8 pixels.
template <int OC, int XV, bool kMasked = false>
inline void conv3x3_tile(const float* src, std::size_t cin, std::size_t plane, std::size_t pw,
                         const float* k, const float* bias, float* dst, std::size_t out_plane,
                         __m256i mask = _mm256_setzero_si256()) {
  __m256 acc[OC][XV];
  for (int j = 0; j < OC; ++j) {
    for (int v = 0; v < XV; ++v) acc[j][v] = _mm256_set1_ps(bias[j]);
  }
  for (std::size_t ic = 0; ic < cin; ++ic, src += plane, k += 9 * OC) {
#pragma GCC unroll 3
    for (int ky = 0; ky < 3; ++ky) {
#pragma GCC unroll 3
      for (int kx = 0; kx < 3; ++kx) {
        __m256 in[XV];
#pragma GCC unroll 4
        for (int v = 0; v < XV; ++v) {
          const float* p = src + ky * pw + kx + 8 * v;
          in[v] = kMasked ? _mm256_maskload_ps(p, mask) : _mm256_loadu_ps(p);
        }
#pragma GCC unroll 8
        for (int j = 0; j < OC; ++j) {
          const __m256 kv = _mm256_broadcast_ss(k + (ky * 3 + kx) * OC + j);
#pragma GCC unroll 4
          for (int v = 0; v < XV; ++v) acc[j][v] = _mm256_fmadd_ps(kv, in[v], acc[j][v]);
        }
      }
    }
  }
  for (int j = 0; j < OC; ++j) {
    for (int v = 0; v < XV; ++v) {
      float* p = dst + j * out_plane + 8 * v;
      if (kMasked) {
        _mm256_maskstore_ps(p, mask, acc[j][v]);
      } else {
        _mm256_storeu_ps(p, acc[j][v]);
      }
    }
  }
}

template <int OC>
void conv3x3_row(const float* padded, std::size_t cin, std::size_t h, std::size_t w,
                 const float* packed, const float* bias, std::size_t y, float* out) {
  const std::size_t pw = w + 2;
  const std::size_t plane = (h + 2) * pw;
  const std::size_t out_plane = h * w;
  const float* src = padded + y * pw;
  float* dst = out + y * w;
  std::size_t x = 0;
  for (; x + 24 <= w; x += 24) conv3x3_tile<OC, 3>(src + x, cin, plane, pw, packed, bias, dst + x, out_plane);
  for (; x + 16 <= w; x += 16) conv3x3_tile<OC, 2>(src + x, cin, plane, pw, packed, bias, dst + x, out_plane);
  for (; x + 8 <= w; x += 8) conv3x3_tile<OC, 1>(src + x, cin, plane, pw, packed, bias, dst + x, out_plane);
  if (x < w) {
    const auto tail = static_cast<int>(w - x);
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i mask = _mm256_cmpgt_epi32(_mm256_set1_epi32(tail), lane);
    conv3x3_tile<OC, 1, true>(src + x, cin, plane, pw, packed, bias, dst + x, out_plane, mask);
  }
}

void conv3x3_avx2(const float* padded, std::size_t cin, std::size_t h,
                  std::size_t w, const float* weight, const float* bias,
                  std::size_t cout, float* out) {
  // Output channels in groups of 4 plus one tail group of 1-3.
  struct Group {
    std::size_t oc0;
    std::size_t size;
  };
  std::vector<Group> groups;
  for (std::size_t oc = 0; oc < cout; oc += 4) groups.push_back({oc, std::min<std::size_t>(4, cout - oc)});
  std::vector<float> packed(cout * cin * 9);
  for (const Group& g : groups) {
    float* dst = packed.data() + g.oc0 * cin * 9;
    for (std::size_t ic = 0; ic < cin; ++ic) {
      for (std::size_t t = 0; t < 9; ++t) {
        for (std::size_t j = 0; j < g.size; ++j) {
          dst[(ic * 9 + t) * g.size + j] = weight[((g.oc0 + j) * cin + ic) * 9 + t];
        }
      }
    }
  }
  for (std::size_t y = 0; y < h; ++y) {
    for (const Group& g : groups) {
      const float* pk = packed.data() + g.oc0 * cin * 9;
      float* dst = out + g.oc0 * h * w;
      switch (g.size) {
        case 4: conv3x3_row<4>(padded, cin, h, w, pk, bias + g.oc0, y, dst); break;
        case 3: conv3x3_row<3>(padded, cin, h, w, pk, bias + g.oc0, y, dst); break;
        case 2: conv3x3_row<2>(padded, cin, h, w, pk, bias + g.oc0, y, dst); break;
        default: conv3x3_row<1>(padded, cin, h, w, pk, bias + g.oc0, y, dst); break;
      }
    }
  }
}

void conv1x1_avx2(const float* input, std::size_t cin, std::size_t n,
                  const float* weight, const float* bias, std::size_t cout,
                  float* out) {
  for (std::size_t oc = 0; oc < cout; ++oc) {
    float* dst = out + oc * n;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      __m256 acc = _mm256_set1_ps(bias[oc]);
      for (std::size_t ic = 0; ic < cin; ++ic) {
        acc = _mm256_fmadd_ps(_mm256_set1_ps(weight[oc * cin + ic]),
                              _mm256_loadu_ps(input + ic * n + i), acc);
      }
      _mm256_storeu_ps(dst + i, acc);
    }
    for (; i < n; ++i) {
      float s = bias[oc];
      for (std::size_t ic = 0; ic < cin; ++ic) s += weight[oc * cin + ic] * input[ic * n + i];
      dst[i] = s;
    }
  }
}

void relu_avx2(float* data, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(data + i, _mm256_max_ps(_mm256_loadu_ps(data + i), zero));
  }
  for (; i < n; ++i) data[i] = std::max(data[i], 0.0f);
}

void affine_avx2(const float* x, float scale, float shift, float* out,
                 std::size_t n) {
  const __m256 s = _mm256_set1_ps(scale);
  const __m256 b = _mm256_set1_ps(shift);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_fmadd_ps(_mm256_loadu_ps(x + i), s, b));
  }
  for (; i < n; ++i) out[i] = x[i] * scale + shift;
}

void mix_clamp_avx2(const float* a, const float* b, float weight_a, float* out,
                    std::size_t n) {
  const float weight_b = 1.0f - weight_a;
  const __m256 wa = _mm256_set1_ps(weight_a);
  const __m256 wb = _mm256_set1_ps(weight_b);
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_mul_ps(wb, _mm256_loadu_ps(b + i));
    v = _mm256_fmadd_ps(wa, _mm256_loadu_ps(a + i), v);
    _mm256_storeu_ps(out + i, _mm256_min_ps(_mm256_max_ps(v, zero), one));
  }
  for (; i < n; ++i) {
    out[i] = std::clamp(weight_a * a[i] + weight_b * b[i], 0.0f, 1.0f);
  }
}

void mix_weighted_clamp_avx2(const float* a, const float* b, const float* w,
                             float* out, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 wv = _mm256_loadu_ps(w + i);
    __m256 v = _mm256_mul_ps(_mm256_sub_ps(one, wv), _mm256_loadu_ps(b + i));
    v = _mm256_fmadd_ps(wv, _mm256_loadu_ps(a + i), v);
    _mm256_storeu_ps(out + i, _mm256_min_ps(_mm256_max_ps(v, zero), one));
  }
  for (; i < n; ++i) {
    out[i] = std::clamp(w[i] * a[i] + (1.0f - w[i]) * b[i], 0.0f, 1.0f);
  }
}

void maxpool2x2_avx2(const float* in, std::size_t h, std::size_t w,
                     float* out) {
  const std::size_t oh = h / 2, ow = w / 2;
  for (std::size_t y = 0; y < oh; ++y) {
    const float* r0 = in + 2 * y * w;
    const float* r1 = r0 + w;
    float* dst = out + y * ow;
    std::size_t x = 0;
    for (; x + 8 <= ow; x += 8) {
      const __m256 a = _mm256_max_ps(_mm256_loadu_ps(r0 + 2 * x),
                                     _mm256_loadu_ps(r1 + 2 * x));
      const __m256 b = _mm256_max_ps(_mm256_loadu_ps(r0 + 2 * x + 8),
                                     _mm256_loadu_ps(r1 + 2 * x + 8));
      const __m256 even = _mm256_shuffle_ps(a, b, _MM_SHUFFLE(2, 0, 2, 0));
      const __m256 odd = _mm256_shuffle_ps(a, b, _MM_SHUFFLE(3, 1, 3, 1));
      const __m256 m = _mm256_max_ps(even, odd);
      const __m256 ordered = _mm256_castpd_ps(_mm256_permute4x64_pd(
          _mm256_castps_pd(m), _MM_SHUFFLE(3, 1, 2, 0)));
      _mm256_storeu_ps(dst + x, ordered);
    }
    for (; x < ow; ++x) {
      dst[x] = std::max(std::max(r0[2 * x], r0[2 * x + 1]),
                        std::max(r1[2 * x], r1[2 * x + 1]));
    }
  }
}

double sum_avx2(const float* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    acc0 = _mm256_add_pd(acc0, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
    acc1 = _mm256_add_pd(acc1, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
  }
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_dev_avx2(const float* x, std::size_t n, double mean) {
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(v)), m);
    const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)), m);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = x[i] - mean;
    s += d * d;
  }
  return s;
}

double dot_avx2(const float* a, const float* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_loadu_ps(a + i);
    const __m256 vb = _mm256_loadu_ps(b + i);
    acc0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                           _mm256_cvtps_pd(_mm256_castps256_ps128(vb)), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                           _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)), acc1);
  }
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

void axpy_avx2(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 a = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(a, _mm256_loadu_ps(x + i),
                                            _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      Isa::kAvx2,         conv3x3_avx2,   conv1x1_avx2,
      relu_avx2,          affine_avx2,    mix_clamp_avx2,
      mix_weighted_clamp_avx2, maxpool2x2_avx2, sum_avx2,
      sum_sq_dev_avx2,    dot_avx2,       axpy_avx2,
  };
  return table;
}

}  // namespace styleaug::kernels
