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

#include "styleaug/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "styleaug/error.hpp"

namespace styleaug {
namespace {

std::vector<double> to_double(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

double safe_log(double v) { return std::log(std::max(v, kLogFloor)); }

void check_label(std::size_t label, std::size_t k) {
  if (label >= k) {
    fail(ErrorCode::kInvalidParameter,
         "label " + std::to_string(label) + " outside " + std::to_string(k) + " classes");
  }
}

// Written as an offset from a so that three equal inputs give back a exactly.
double mixture(double a, double b, double c) { return a + ((b - a) + (c - a)) / 3.0; }

void check_sizes(std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) fail(ErrorCode::kShapeMismatch, "distributions differ in length");
}

// g_z = p * (g_p - <g_p, p>), the softmax Jacobian applied to g_p.
void through_softmax(std::span<const double> p, std::span<const double> gp, std::span<double> gz) {
  double inner = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) inner += gp[k] * p[k];
  for (std::size_t k = 0; k < p.size(); ++k) gz[k] = p[k] * (gp[k] - inner);
}

}  // namespace

void LossConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    fail(ErrorCode::kInvalidParameter, "lambda must be a finite non-negative number");
  }
  if (!(label_smoothing >= 0.0 && label_smoothing < 1.0)) {
    fail(ErrorCode::kInvalidParameter, "label smoothing must be in [0,1)");
  }
  if (num_classes < 2) fail(ErrorCode::kInvalidParameter, "need at least two classes");
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.size() < 2) fail(ErrorCode::kShapeError, "softmax needs at least two logits");
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp(logits[k] - top);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

Tensor softmax(const Tensor& logits) {
  const std::vector<double> p = softmax(to_double(logits));
  return Tensor(logits.shape(), std::vector<float>(p.begin(), p.end()));
}

void check_distribution(std::span<const double> p) {
  if (p.empty()) fail(ErrorCode::kInvalidDistribution, "empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorCode::kInvalidDistribution, "distribution has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-4) {
    fail(ErrorCode::kInvalidDistribution, "distribution sums to " + std::to_string(sum));
  }
}

double cross_entropy_smoothed(std::span<const double> probs, std::size_t label, double smoothing) {
  check_distribution(probs);
  check_label(label, probs.size());
  if (!(smoothing >= 0.0 && smoothing < 1.0)) {
    fail(ErrorCode::kInvalidParameter, "label smoothing must be in [0,1)");
  }
  const double off = smoothing / static_cast<double>(probs.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double q = off + (k == label ? 1.0 - smoothing : 0.0);
    if (q > 0.0) loss -= q * safe_log(probs[k]);
  }
  return loss;
}

double cross_entropy_smoothed(const Tensor& probs, std::size_t label, double smoothing) {
  return cross_entropy_smoothed(to_double(probs), label, smoothing);
}

double jsd3(std::span<const double> p0, std::span<const double> p1, std::span<const double> p2) {
  check_sizes(p0.size(), p1.size(), p2.size());
  check_distribution(p0);
  check_distribution(p1);
  check_distribution(p2);
  double total = 0.0;
  for (std::size_t k = 0; k < p0.size(); ++k) {
    const double m = mixture(p0[k], p1[k], p2[k]);
    const double log_m = safe_log(m);
    for (double p : {p0[k], p1[k], p2[k]}) {
      if (p > 0.0) total += p * (safe_log(p) - log_m);
    }
  }
  return std::max(0.0, total / 3.0);
}

double jsd3(const Tensor& p0, const Tensor& p1, const Tensor& p2) {
  return jsd3(to_double(p0), to_double(p1), to_double(p2));
}

void jsd3_logit_gradients(std::span<const double> p0, std::span<const double> p1,
                          std::span<const double> p2, std::span<double> g0,
                          std::span<double> g1, std::span<double> g2) {
  const std::size_t k = p0.size();
  check_sizes(k, p1.size(), p2.size());
  std::vector<double> gp(k);
  const std::span<const double> ps[3] = {p0, p1, p2};
  const std::span<double> gs[3] = {g0, g1, g2};
  std::vector<double> log_m(k);
  for (std::size_t j = 0; j < k; ++j) log_m[j] = safe_log(mixture(p0[j], p1[j], p2[j]));
  for (int i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < k; ++j) gp[j] = (safe_log(ps[i][j]) - log_m[j]) / 3.0;
    through_softmax(ps[i], gp, gs[i]);
  }
}

double cross_entropy_with_grad(std::span<const double> logits, std::size_t label,
                               double smoothing, std::span<double> grad) {
  const std::vector<double> p = softmax(logits);
  const double loss = cross_entropy_smoothed(p, label, smoothing);
  const double off = smoothing / static_cast<double>(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    grad[k] = p[k] - (off + (k == label ? 1.0 - smoothing : 0.0));
  }
  return loss;
}

LossReport combined_loss(std::span<const double> logits_orig, std::span<const double> logits_aug1,
                         std::span<const double> logits_aug2, std::size_t label,
                         const LossConfig& cfg) {
  cfg.validate();
  const std::size_t k = cfg.num_classes;
  if (logits_orig.size() != k || logits_aug1.size() != k || logits_aug2.size() != k) {
    fail(ErrorCode::kShapeMismatch, "logit vectors must have num_classes entries");
  }
  LossReport r;
  r.grad_orig.assign(k, 0.0);
  r.grad_aug1.assign(k, 0.0);
  r.grad_aug2.assign(k, 0.0);
  r.ce = cross_entropy_with_grad(logits_orig, label, cfg.label_smoothing, r.grad_orig);

  const std::vector<double> p0 = softmax(logits_orig);
  const std::vector<double> p1 = softmax(logits_aug1);
  const std::vector<double> p2 = softmax(logits_aug2);
  r.jsd = jsd3(p0, p1, p2);
  r.total = r.ce + cfg.lambda * r.jsd;
  if (cfg.lambda > 0.0) {
    std::vector<double> g0(k), g1(k), g2(k);
    jsd3_logit_gradients(p0, p1, p2, g0, g1, g2);
    for (std::size_t j = 0; j < k; ++j) {
      r.grad_orig[j] += cfg.lambda * g0[j];
      r.grad_aug1[j] = cfg.lambda * g1[j];
      r.grad_aug2[j] = cfg.lambda * g2[j];
    }
  }
  return r;
}

LossReport combined_loss(const Tensor& logits_orig, const Tensor& logits_aug1,
                         const Tensor& logits_aug2, std::size_t label, const LossConfig& cfg) {
  return combined_loss(to_double(logits_orig), to_double(logits_aug1), to_double(logits_aug2),
                       label, cfg);
}

LossReport combined_loss_batch(std::span<const double> logits_orig,
                               std::span<const double> logits_aug1,
                               std::span<const double> logits_aug2,
                               std::span<const std::size_t> labels, const LossConfig& cfg) {
  const std::size_t n = labels.size();
  const std::size_t k = cfg.num_classes;
  if (n == 0) fail(ErrorCode::kEmptyInput, "empty batch");
  if (logits_orig.size() != n * k || logits_aug1.size() != n * k || logits_aug2.size() != n * k) {
    fail(ErrorCode::kShapeMismatch, "batch logits must be N x num_classes");
  }
  LossReport r;
  r.grad_orig.assign(n * k, 0.0);
  r.grad_aug1.assign(n * k, 0.0);
  r.grad_aug2.assign(n * k, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LossReport one =
        combined_loss(logits_orig.subspan(i * k, k), logits_aug1.subspan(i * k, k),
                      logits_aug2.subspan(i * k, k), labels[i], cfg);
    r.ce += one.ce * inv_n;
    r.jsd += one.jsd * inv_n;
    for (std::size_t j = 0; j < k; ++j) {
      r.grad_orig[i * k + j] = one.grad_orig[j] * inv_n;
      r.grad_aug1[i * k + j] = one.grad_aug1[j] * inv_n;
      r.grad_aug2[i * k + j] = one.grad_aug2[j] * inv_n;
    }
  }
  r.total = r.ce + cfg.lambda * r.jsd;
  return r;
}

}  // namespace styleaug
