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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "styleaug/error.hpp"
#include "styleaug/losses.hpp"
#include "styleaug/rng.hpp"

namespace styleaug {
namespace {

const double kLog3 = std::log(3.0);

std::vector<double> random_logits(Rng& rng, std::size_t k, double spread = 3.0) {
  std::vector<double> v(k);
  for (double& x : v) x = rng.normal() * spread;
  return v;
}

std::vector<double> random_distribution(Rng& rng, std::size_t k) {
  return softmax(random_logits(rng, k, 4.0));
}

// Straight-line loss in the same terms as the definition, used as the
// finite-difference target.
double reference_total(const std::vector<double>& z0, const std::vector<double>& z1,
                       const std::vector<double>& z2, std::size_t label, double lambda,
                       double smoothing) {
  auto sm = [](const std::vector<double>& z) {
    const double mx = *std::max_element(z.begin(), z.end());
    std::vector<double> e(z.size());
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += e[i] = std::exp(z[i] - mx);
    for (double& x : e) x /= s;
    return e;
  };
  const auto p0 = sm(z0), p1 = sm(z1), p2 = sm(z2);
  const double k = static_cast<double>(z0.size());
  double ce = 0.0, js = 0.0;
  for (std::size_t i = 0; i < z0.size(); ++i) {
    const double q = (i == label ? 1.0 - smoothing : 0.0) + smoothing / k;
    ce -= q * std::log(p0[i]);
    const double m = (p0[i] + p1[i] + p2[i]) / 3.0;
    for (const double p : {p0[i], p1[i], p2[i]}) js += p * std::log(p / m) / 3.0;
  }
  return ce + lambda * js;
}

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIoError;
}

TEST(Softmax, KnownCases) {
  const auto u = softmax(std::vector<double>{2.0, 2.0, 2.0, 2.0});
  for (double p : u) EXPECT_DOUBLE_EQ(p, 0.25);
  const auto big = softmax(std::vector<double>{1000.0, 0.0});
  EXPECT_DOUBLE_EQ(big[0], 1.0);
  EXPECT_EQ(big[1], std::exp(-1000.0));
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto z = random_logits(rng, 7, 1.0);
    const auto p = softmax(z);
    double s = 0.0;
    for (double x : z) s += std::exp(x);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(p[i], std::exp(z[i]) / s, 1e-7);
  }
  EXPECT_EQ(error_of([] { softmax(std::vector<double>{1.0}); }), ErrorCode::kShapeError);
}

TEST(CrossEntropy, KnownValues) {
  const std::vector<double> uniform(10, 0.1);
  for (double s : {0.0, 0.1, 0.5}) {
    EXPECT_NEAR(cross_entropy_smoothed(uniform, 3, s), std::log(10.0), 1e-12);
  }
  const std::vector<double> nearly{1.0 - 1e-9, 1e-9};
  EXPECT_NEAR(cross_entropy_smoothed(nearly, 0, 0.0), 1e-9, 1e-15);
  const std::vector<double> p{0.7, 0.3};
  EXPECT_NEAR(cross_entropy_smoothed(p, 0, 0.1),
              0.95 * -std::log(0.7) + 0.05 * -std::log(0.3), 1e-12);
  EXPECT_NEAR(cross_entropy_smoothed(p, 0, 0.1), 0.399040, 1e-6);
  EXPECT_EQ(error_of([] { cross_entropy_smoothed(std::vector<double>{0.7, 0.4}, 0, 0.1); }),
            ErrorCode::kInvalidDistribution);
  EXPECT_EQ(error_of([] { cross_entropy_smoothed(std::vector<double>{1.1, -0.1}, 0, 0.1); }),
            ErrorCode::kInvalidDistribution);
}

TEST(Jsd, KnownValues) {
  const std::vector<double> a{0.2, 0.3, 0.5};
  EXPECT_EQ(jsd3(a, a, a), 0.0);
  const std::vector<double> e0{1, 0, 0}, e1{0, 1, 0}, e2{0, 0, 1};
  EXPECT_NEAR(jsd3(e0, e1, e2), kLog3, 1e-9);
  const std::vector<double> h{0.5, 0.5}, d0{1, 0}, d1{0, 1};
  EXPECT_NEAR(jsd3(h, d0, d1), 2.0 / 3.0 * std::numbers::ln2, 1e-9);
  EXPECT_EQ(error_of([&] { jsd3(a, a, std::vector<double>{0.5, 0.6, 0.1}); }),
            ErrorCode::kInvalidDistribution);
}

TEST(Jsd, BoundedAndSymmetric) {
  Rng rng(2);
  for (int t = 0; t < 20000; ++t) {
    const std::size_t k = 2 + rng.below(9);
    const auto p0 = random_distribution(rng, k), p1 = random_distribution(rng, k),
               p2 = random_distribution(rng, k);
    const double j = jsd3(p0, p1, p2);
    ASSERT_GE(j, 0.0);
    ASSERT_LE(j, kLog3 + 1e-12);
    EXPECT_NEAR(jsd3(p2, p0, p1), j, 1e-14);
    EXPECT_NEAR(jsd3(p1, p2, p0), j, 1e-14);
    EXPECT_NEAR(jsd3(p1, p0, p2), j, 1e-14);
  }
}

TEST(CombinedLoss, ZeroLambdaIsPlainCrossEntropy) {
  Rng rng(3);
  LossConfig cfg;
  cfg.lambda = 0.0;
  const auto z0 = random_logits(rng, 10), z1 = random_logits(rng, 10), z2 = random_logits(rng, 10);
  const LossReport r = combined_loss(z0, z1, z2, 4, cfg);
  EXPECT_EQ(r.total, r.ce);
  for (double g : r.grad_aug1) EXPECT_EQ(g, 0.0);
  for (double g : r.grad_aug2) EXPECT_EQ(g, 0.0);
  EXPECT_NEAR(r.ce, cross_entropy_smoothed(softmax(z0), 4, 0.1), 1e-12);
}

TEST(CombinedLoss, IdenticalLogitsHaveNoConsistencyTerm) {
  Rng rng(4);
  const auto z = random_logits(rng, 10);
  const LossReport r = combined_loss(z, z, z, 2, LossConfig{});
  EXPECT_EQ(r.jsd, 0.0);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(r.grad_aug1[i], 0.0, 1e-15);
    EXPECT_NEAR(r.grad_aug2[i], 0.0, 1e-15);
  }
  LossConfig no_js;
  no_js.lambda = 0.0;
  const LossReport plain = combined_loss(z, z, z, 2, no_js);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(r.grad_orig[i], plain.grad_orig[i], 1e-15);
}

TEST(CombinedLoss, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  const LossConfig cfg;
  const double h = 1e-4;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::array<std::vector<double>, 3> z = {random_logits(rng, 10), random_logits(rng, 10),
                                            random_logits(rng, 10)};
    const std::size_t label = rng.below(10);
    const LossReport r = combined_loss(z[0], z[1], z[2], label, cfg);
    EXPECT_NEAR(r.total, reference_total(z[0], z[1], z[2], label, 12.0, 0.1), 1e-10);
    const std::array<const std::vector<double>*, 3> grads = {&r.grad_orig, &r.grad_aug1,
                                                             &r.grad_aug2};
    for (std::size_t v = 0; v < 3; ++v) {
      for (std::size_t i = 0; i < 10; ++i) {
        auto plus = z, minus = z;
        plus[v][i] += h;
        minus[v][i] -= h;
        const double fd = (reference_total(plus[0], plus[1], plus[2], label, 12.0, 0.1) -
                           reference_total(minus[0], minus[1], minus[2], label, 12.0, 0.1)) /
                          (2 * h);
        const double a = (*grads[v])[i];
        worst = std::max(worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-8}));
      }
    }
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(CombinedLoss, GradientsSumToZero) {
  Rng rng(6);
  for (int t = 0; t < 1000; ++t) {
    const auto z0 = random_logits(rng, 10), z1 = random_logits(rng, 10), z2 = random_logits(rng, 10);
    const LossReport r = combined_loss(z0, z1, z2, rng.below(10), LossConfig{});
    for (const auto* g : {&r.grad_orig, &r.grad_aug1, &r.grad_aug2}) {
      double s = 0.0;
      for (double x : *g) s += x;
      ASSERT_NEAR(s, 0.0, 1e-6);
    }
  }
}

TEST(CombinedLoss, SmallStepDoesNotIncreaseLoss) {
  Rng rng(7);
  const LossConfig cfg;
  for (int t = 0; t < 1000; ++t) {
    auto z0 = random_logits(rng, 10), z1 = random_logits(rng, 10), z2 = random_logits(rng, 10);
    const std::size_t label = rng.below(10);
    const LossReport r = combined_loss(z0, z1, z2, label, cfg);
    for (std::size_t i = 0; i < 10; ++i) {
      z0[i] -= 1e-3 * r.grad_orig[i];
      z1[i] -= 1e-3 * r.grad_aug1[i];
      z2[i] -= 1e-3 * r.grad_aug2[i];
    }
    ASSERT_LE(combined_loss(z0, z1, z2, label, cfg).total, r.total + 1e-12);
  }
}

TEST(CombinedLoss, BatchIsTheMeanOfRows) {
  Rng rng(8);
  const LossConfig cfg;
  const std::size_t n = 5, k = 10;
  std::vector<double> a(n * k), b(n * k), c(n * k);
  for (double* v : {a.data(), b.data(), c.data()})
    for (std::size_t i = 0; i < n * k; ++i) v[i] = rng.normal() * 2.0;
  const std::vector<std::size_t> labels{0, 3, 9, 3, 1};
  const LossReport batch = combined_loss_batch(a, b, c, labels, cfg);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const std::span<const double> ra(a.data() + r * k, k), rb(b.data() + r * k, k),
        rc(c.data() + r * k, k);
    const LossReport row = combined_loss(ra, rb, rc, labels[r], cfg);
    total += row.total;
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_NEAR(batch.grad_aug1[r * k + i], row.grad_aug1[i] / n, 1e-15);
    }
  }
  EXPECT_NEAR(batch.total, total / n, 1e-12);
  EXPECT_EQ(error_of([&] { combined_loss_batch({}, {}, {}, {}, cfg); }), ErrorCode::kEmptyInput);
}

TEST(CombinedLoss, TensorOverloadAndValidation) {
  Tensor z({10});
  for (std::size_t i = 0; i < 10; ++i) z[i] = static_cast<float>(i) * 0.3f;
  const LossReport r = combined_loss(z, z, z, 1, LossConfig{});
  EXPECT_NEAR(r.jsd, 0.0, 1e-15);
  LossConfig bad;
  bad.lambda = -1.0;
  EXPECT_EQ(error_of([&] { combined_loss(z, z, z, 1, bad); }), ErrorCode::kInvalidParameter);
  EXPECT_EQ(error_of([&] { combined_loss(z, z, z, 10, LossConfig{}); }),
            ErrorCode::kInvalidParameter);
  LossConfig four;
  four.num_classes = 4;
  EXPECT_EQ(error_of([&] { combined_loss(z, z, z, 1, four); }), ErrorCode::kShapeMismatch);
}

TEST(CrossEntropyWithGrad, MatchesSmoothedTarget) {
  const std::vector<double> z{0.5, -1.0, 2.0};
  std::vector<double> g(3);
  const double ce = cross_entropy_with_grad(z, 2, 0.1, g);
  const auto p = softmax(z);
  EXPECT_NEAR(ce, cross_entropy_smoothed(p, 2, 0.1), 1e-12);
  for (std::size_t i = 0; i < 3; ++i) {
    const double q = (i == 2 ? 0.9 : 0.0) + 0.1 / 3.0;
    EXPECT_NEAR(g[i], p[i] - q, 1e-12);
  }
}

}  // namespace
}  // namespace styleaug
