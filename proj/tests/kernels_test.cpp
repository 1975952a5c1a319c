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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"
#include "test_util.hpp"

namespace styleaug {
namespace {

using kernels::Isa;
using kernels::KernelTable;

std::vector<float> random_vec(std::size_t n, std::uint64_t seed, float lo = -1.0f, float hi = 1.0f) {
  Rng rng(seed);
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(rng.uniform(lo, hi));
  return v;
}

std::vector<Isa> simd_isas() {
  std::vector<Isa> out;
  for (Isa isa : kernels::supported_isas()) {
    if (isa != Isa::kScalar) out.push_back(isa);
  }
  return out;
}

// Straight loop over (oc, y, x, ic, ky, kx) with double accumulation.
std::vector<double> conv3x3_oracle(const std::vector<float>& padded, std::size_t cin, std::size_t h,
                                   std::size_t w, const std::vector<float>& weight,
                                   const std::vector<float>& bias, std::size_t cout) {
  std::vector<double> out(cout * h * w);
  const std::size_t pw = w + 2;
  for (std::size_t oc = 0; oc < cout; ++oc)
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        double acc = bias[oc];
        for (std::size_t ic = 0; ic < cin; ++ic)
          for (std::size_t ky = 0; ky < 3; ++ky)
            for (std::size_t kx = 0; kx < 3; ++kx)
              acc += static_cast<double>(weight[((oc * cin + ic) * 3 + ky) * 3 + kx]) *
                     padded[(ic * (h + 2) + y + ky) * pw + x + kx];
        out[(oc * h + y) * w + x] = acc;
      }
  return out;
}

TEST(KernelDispatch, ScalarAlwaysSupported) {
  EXPECT_TRUE(kernels::isa_supported(Isa::kScalar));
  EXPECT_EQ(kernels::table_for(Isa::kScalar).isa, Isa::kScalar);
}

TEST(KernelDispatch, ScopedIsaRestoresPrevious) {
  const Isa before = kernels::active_isa();
  {
    kernels::ScopedIsa scoped(Isa::kScalar);
    EXPECT_EQ(kernels::active_isa(), Isa::kScalar);
  }
  EXPECT_EQ(kernels::active_isa(), before);
}

TEST(KernelDispatch, UnsupportedIsaRejected) {
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (!kernels::isa_supported(isa)) {
      EXPECT_THROW(kernels::table_for(isa), Error);
    }
  }
}

class ConvShapes : public ::testing::TestWithParam<std::tuple<int, int, int, int>> {};

TEST_P(ConvShapes, EveryIsaMatchesOracle) {
  const auto [cin, cout, h, w] = GetParam();
  const std::size_t ci = cin, co = cout, hh = h, ww = w;
  const auto padded = random_vec(ci * (hh + 2) * (ww + 2), 1);
  const auto weight = random_vec(co * ci * 9, 2);
  const auto bias = random_vec(co, 3);
  const auto expect = conv3x3_oracle(padded, ci, hh, ww, weight, bias, co);
  for (Isa isa : kernels::supported_isas()) {
    std::vector<float> out(co * hh * ww, -7.0f);
    kernels::table_for(isa).conv3x3(padded.data(), ci, hh, ww, weight.data(), bias.data(), co,
                                    out.data());
    for (std::size_t i = 0; i < out.size(); ++i) {
      ASSERT_NEAR(out[i], expect[i], 1e-5 * (1.0 + 9.0 * ci)) << kernels::isa_name(isa) << " i=" << i;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Kernels, ConvShapes,
                         ::testing::Values(std::tuple{1, 1, 1, 1}, std::tuple{3, 8, 7, 5},
                                           std::tuple{8, 4, 16, 16}, std::tuple{5, 9, 3, 41},
                                           std::tuple{16, 13, 9, 24}, std::tuple{2, 6, 11, 57}));

TEST(KernelEquivalence, Conv1x1) {
  const std::size_t cin = 7, cout = 5, n = 53;
  const auto in = random_vec(cin * n, 4);
  const auto wt = random_vec(cout * cin, 5);
  const auto b = random_vec(cout, 6);
  std::vector<float> ref(cout * n);
  kernels::scalar_table().conv1x1(in.data(), cin, n, wt.data(), b.data(), cout, ref.data());
  for (std::size_t oc = 0; oc < cout; ++oc) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = b[oc];
      for (std::size_t ic = 0; ic < cin; ++ic) acc += static_cast<double>(wt[oc * cin + ic]) * in[ic * n + i];
      ASSERT_NEAR(ref[oc * n + i], acc, 1e-5);
    }
  }
  for (Isa isa : simd_isas()) {
    std::vector<float> out(cout * n);
    kernels::table_for(isa).conv1x1(in.data(), cin, n, wt.data(), b.data(), cout, out.data());
    for (std::size_t i = 0; i < out.size(); ++i) ASSERT_NEAR(out[i], ref[i], 1e-5);
  }
}

TEST(KernelEquivalence, ElementwiseKernels) {
  for (std::size_t n : {1u, 7u, 8u, 31u, 64u, 1001u}) {
    const auto a = random_vec(n, 10 + n, 0.0f, 1.0f);
    const auto b = random_vec(n, 20 + n, 0.0f, 1.0f);
    const auto w = random_vec(n, 30 + n, 0.0f, 1.0f);
    const auto s = random_vec(n, 40 + n, -2.0f, 2.0f);
    const KernelTable& ref = kernels::scalar_table();
    for (Isa isa : simd_isas()) {
      const KernelTable& k = kernels::table_for(isa);
      std::vector<float> r1(s), r2(s);
      ref.relu(r1.data(), n);
      k.relu(r2.data(), n);
      EXPECT_EQ(r1, r2);

      std::vector<float> o1(n), o2(n);
      ref.affine(s.data(), 1.7f, -0.3f, o1.data(), n);
      k.affine(s.data(), 1.7f, -0.3f, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(o1[i], o2[i], 1e-6);

      ref.mix_clamp(a.data(), b.data(), 0.37f, o1.data(), n);
      k.mix_clamp(a.data(), b.data(), 0.37f, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(o1[i], o2[i], 1e-6);

      ref.mix_weighted_clamp(a.data(), b.data(), w.data(), o1.data(), n);
      k.mix_weighted_clamp(a.data(), b.data(), w.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(o1[i], o2[i], 1e-6);

      EXPECT_NEAR(ref.sum(s.data(), n), k.sum(s.data(), n), 1e-9 * n);
      EXPECT_NEAR(ref.sum_sq_dev(s.data(), n, 0.1), k.sum_sq_dev(s.data(), n, 0.1), 1e-9 * n);
      EXPECT_NEAR(ref.dot(a.data(), s.data(), n), k.dot(a.data(), s.data(), n), 1e-9 * n);

      std::vector<float> y1(b), y2(b);
      ref.axpy(-0.6f, s.data(), y1.data(), n);
      k.axpy(-0.6f, s.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(y1[i], y2[i], 1e-6);
    }
  }
}

TEST(KernelEquivalence, MixEndpointsExactOnEveryIsa) {
  const std::size_t n = 77;
  const auto a = random_vec(n, 50, 0.0f, 1.0f);
  const auto b = random_vec(n, 51, 0.0f, 1.0f);
  for (Isa isa : kernels::supported_isas()) {
    const KernelTable& k = kernels::table_for(isa);
    std::vector<float> out(n);
    k.mix_clamp(a.data(), b.data(), 1.0f, out.data(), n);
    EXPECT_EQ(out, a) << kernels::isa_name(isa);
    k.mix_clamp(a.data(), b.data(), 0.0f, out.data(), n);
    EXPECT_EQ(out, b) << kernels::isa_name(isa);
  }
}

TEST(KernelEquivalence, MaxPool) {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 6}, {8, 34}, {16, 48}, {6, 18}}) {
    const auto in = random_vec(h * w, h * 100 + w);
    std::vector<float> expect((h / 2) * (w / 2));
    for (std::size_t y = 0; y < h / 2; ++y)
      for (std::size_t x = 0; x < w / 2; ++x)
        expect[y * (w / 2) + x] = std::max({in[2 * y * w + 2 * x], in[2 * y * w + 2 * x + 1],
                                            in[(2 * y + 1) * w + 2 * x], in[(2 * y + 1) * w + 2 * x + 1]});
    for (Isa isa : kernels::supported_isas()) {
      std::vector<float> out(expect.size());
      kernels::table_for(isa).maxpool2x2(in.data(), h, w, out.data());
      EXPECT_EQ(out, expect) << kernels::isa_name(isa) << " " << h << "x" << w;
    }
  }
}

}  // namespace
}  // namespace styleaug
