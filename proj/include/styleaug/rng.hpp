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

#ifndef STYLEAUG_RNG_HPP_
#define STYLEAUG_RNG_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace styleaug {

// Philox4x32-10 applied to counter words (counter, stream). Sequences depend
// only on integer arithmetic, so a seed yields the same draws everywhere.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Child generators depend only on (seed, stream path), never on how many
  // values the parent has produced.
  Rng fork(std::uint64_t id) const;
  Rng fork(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t seed() const { return seed_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform();                        // [0, 1)
  double uniform_open();                   // (0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  std::uint64_t below(std::uint64_t n);    // [0, n), unbiased
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // [lo, hi]
  bool bernoulli(double p);
  double normal();

 private:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

// Marsaglia-Tsang; shapes below 1 use the U^(1/a) boost.
double sample_gamma(Rng& rng, double shape);

// g1 / (g1 + g2) with g1 ~ Gamma(alpha), g2 ~ Gamma(beta).
double sample_beta(Rng& rng, double alpha, double beta);

// Symmetric Dirichlet(alpha) over k categories.
std::vector<double> sample_dirichlet(Rng& rng, double alpha, std::size_t k);

// Per-image generator derived from (global seed, image index, epoch).
Rng image_rng(std::uint64_t global_seed, std::uint64_t image_index, std::uint64_t epoch);

}  // namespace styleaug

#endif  // STYLEAUG_RNG_HPP_
