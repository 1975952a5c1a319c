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

#ifndef STYLEAUG_LOSSES_HPP_
#define STYLEAUG_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "styleaug/tensor.hpp"

namespace styleaug {

// Losses are evaluated in double precision; Tensor overloads convert at the
// boundary.

struct LossConfig {
  double lambda = 12.0;
  double label_smoothing = 0.1;
  std::size_t num_classes = 10;

  void validate() const;  // InvalidParameter
};

struct LossReport {
  double total = 0.0;
  double ce = 0.0;
  double jsd = 0.0;
  std::vector<double> grad_orig;
  std::vector<double> grad_aug1;
  std::vector<double> grad_aug2;
};

inline constexpr double kLogFloor = 1e-12;

std::vector<double> softmax(std::span<const double> logits);
Tensor softmax(const Tensor& logits);

// Throws InvalidDistribution if p has negative or non-finite entries or its
// sum deviates from 1 by more than 1e-4.
void check_distribution(std::span<const double> p);

// -sum_k q_k log p_k, q = (1 - s) * onehot(label) + s / K.
double cross_entropy_smoothed(std::span<const double> probs, std::size_t label, double smoothing);
double cross_entropy_smoothed(const Tensor& probs, std::size_t label, double smoothing);

// (KL(p0||M) + KL(p1||M) + KL(p2||M)) / 3 with M the mean distribution.
double jsd3(std::span<const double> p0, std::span<const double> p1, std::span<const double> p2);
double jsd3(const Tensor& p0, const Tensor& p1, const Tensor& p2);

// Gradients of the JSD term with respect to the three logit vectors.
void jsd3_logit_gradients(std::span<const double> p0, std::span<const double> p1,
                          std::span<const double> p2, std::span<double> g0,
                          std::span<double> g1, std::span<double> g2);

// ce(orig) + lambda * jsd3 with analytic logit gradients.
LossReport combined_loss(std::span<const double> logits_orig, std::span<const double> logits_aug1,
                         std::span<const double> logits_aug2, std::size_t label,
                         const LossConfig& cfg);
LossReport combined_loss(const Tensor& logits_orig, const Tensor& logits_aug1,
                         const Tensor& logits_aug2, std::size_t label, const LossConfig& cfg);

// Batch mean over rows of [N,K] logits; gradients are of the mean.
LossReport combined_loss_batch(std::span<const double> logits_orig,
                               std::span<const double> logits_aug1,
                               std::span<const double> logits_aug2,
                               std::span<const std::size_t> labels, const LossConfig& cfg);

// Plain smoothed cross-entropy on one logit vector, with its logit gradient.
double cross_entropy_with_grad(std::span<const double> logits, std::size_t label,
                               double smoothing, std::span<double> grad);

}  // namespace styleaug

#endif  // STYLEAUG_LOSSES_HPP_
