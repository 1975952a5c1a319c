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

#ifndef STYLEAUG_KERNELS_HPP_
#define STYLEAUG_KERNELS_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

// Inner-loop kernels with one scalar reference implementation and optional
// SIMD variants. The variant is chosen once at startup from CPU features and
// can be overridden (tests, STYLEAUG_ISA environment variable).
namespace styleaug::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // padded: [cin][h+2][w+2], weight: [cout][cin][3][3], out: [cout][h][w].
  void (*conv3x3)(const float* padded, std::size_t cin, std::size_t h,
                  std::size_t w, const float* weight, const float* bias,
                  std::size_t cout, float* out);
  // input: [cin][n], weight: [cout][cin], out: [cout][n].
  void (*conv1x1)(const float* input, std::size_t cin, std::size_t n,
                  const float* weight, const float* bias, std::size_t cout,
                  float* out);
  void (*relu)(float* data, std::size_t n);
  // out = x * scale + shift
  void (*affine)(const float* x, float scale, float shift, float* out,
                 std::size_t n);
  // out = clamp(weight_a * a + (1 - weight_a) * b, 0, 1)
  void (*mix_clamp)(const float* a, const float* b, float weight_a, float* out,
                    std::size_t n);
  // Per-element weights: out = clamp(w * a + (1 - w) * b, 0, 1)
  void (*mix_weighted_clamp)(const float* a, const float* b, const float* w,
                             float* out, std::size_t n);
  // Single channel 2x2/stride 2 max pool; out is [h/2][w/2].
  void (*maxpool2x2)(const float* in, std::size_t h, std::size_t w, float* out);
  double (*sum)(const float* x, std::size_t n);
  double (*sum_sq_dev)(const float* x, std::size_t n, double mean);
  double (*dot)(const float* a, const float* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(float alpha, const float* x, float* y, std::size_t n);
};

const KernelTable& scalar_table();

bool isa_supported(Isa isa);
std::vector<Isa> supported_isas();

// Throws InvalidParameter when the ISA is not compiled in or not supported
// by the running CPU.
const KernelTable& table_for(Isa isa);

const KernelTable& active();
Isa active_isa();
void set_active_isa(Isa isa);

// Restores the previously active ISA on destruction. Test helper.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace styleaug::kernels

#endif  // STYLEAUG_KERNELS_HPP_
