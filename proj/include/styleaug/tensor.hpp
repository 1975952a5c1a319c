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

#ifndef STYLEAUG_TENSOR_HPP_
#define STYLEAUG_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace styleaug {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Dense row-major float32 array. Ranks used here: 1 (vectors), 2 (matrices),
// 3 ([C,H,W] images and feature maps), 4 (conv kernels).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float* raw() { return data_.data(); }
  const float* raw() const { return data_.data(); }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // [C,H,W] accessors.
  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }
  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }
  std::span<float> channel(std::size_t c);
  std::span<const float> channel(std::size_t c) const;

  bool all_finite() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<float> data_;
};

enum class Padding { kReflection, kZero };

namespace ops {

// Stride-1 cross-correlation with "same" output size. Kernels are 3x3
// (padding applied, width 1) or 1x1 (no padding).
Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias,
              Padding padding = Padding::kReflection);

// Pads a [C,H,W] tensor by one pixel on every side.
Tensor pad1(const Tensor& input, Padding padding);

Tensor upsample_nearest2x(const Tensor& input);
Tensor maxpool2x2(const Tensor& input);

struct ChannelStats {
  Tensor mean;
  Tensor std;  // population standard deviation (divisor H*W)
};
ChannelStats channel_stats(const Tensor& input);

Tensor relu(const Tensor& input);
void relu_inplace(Tensor& t);
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, float factor);
Tensor concat_channels(const Tensor& a, const Tensor& b);
Tensor slice_channels(const Tensor& input, std::size_t begin, std::size_t end);

}  // namespace ops
}  // namespace styleaug

#endif  // STYLEAUG_TENSOR_HPP_
