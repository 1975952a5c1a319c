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

#include "styleaug/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "styleaug/error.hpp"
#include "styleaug/kernels.hpp"

namespace styleaug {

std::size_t shape_numel(const Shape& shape) {
  if (shape.empty()) return 0;
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

namespace {

void check_shape(const Shape& shape) {
  if (shape.empty()) fail(ErrorCode::kShapeError, "tensor shape must have rank >= 1");
  for (std::size_t d : shape) {
    if (d == 0) fail(ErrorCode::kShapeError, "zero dimension in shape " + shape_to_string(shape));
  }
}

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + ": expected rank " +
                                        std::to_string(rank) + ", got " +
                                        shape_to_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    fail(ErrorCode::kShapeMismatch, std::string(what) + ": " +
                                        shape_to_string(a.shape()) + " vs " +
                                        shape_to_string(b.shape()));
  }
}

// Mirror index for one-pixel padding; the edge pixel itself is not repeated.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  if (i < 0) return static_cast<std::size_t>(-i);
  if (i >= static_cast<std::ptrdiff_t>(n)) return 2 * n - 2 - static_cast<std::size_t>(i);
  return static_cast<std::size_t>(i);
}

}  // namespace

Tensor::Tensor(Shape shape, float fill) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_numel(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (shape_numel(shape_) != data_.size()) {
    fail(ErrorCode::kShapeMismatch, "data length " + std::to_string(data_.size()) +
                                        " does not match shape " + shape_to_string(shape_));
  }
}

std::span<float> Tensor::channel(std::size_t c) {
  const std::size_t plane = shape_[1] * shape_[2];
  return std::span<float>(data_).subspan(c * plane, plane);
}

std::span<const float> Tensor::channel(std::size_t c) const {
  const std::size_t plane = shape_[1] * shape_[2];
  return std::span<const float>(data_).subspan(c * plane, plane);
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

namespace ops {

Tensor pad1(const Tensor& input, Padding padding) {
  require_rank(input, 3, "pad1");
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t ph = h + 2, pw = w + 2;
  Tensor out({c, ph, pw});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* src = input.channel(ch).data();
    float* dst = out.channel(ch).data();
    for (std::size_t y = 0; y < ph; ++y) {
      const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) - 1;
      const bool row_out = sy < 0 || sy >= static_cast<std::ptrdiff_t>(h);
      if (padding == Padding::kZero && row_out) continue;
      const float* srow = src + reflect(sy, h) * w;
      float* drow = dst + y * pw;
      std::copy(srow, srow + w, drow + 1);
      if (padding == Padding::kReflection) {
        drow[0] = srow[reflect(-1, w)];
        drow[pw - 1] = srow[reflect(static_cast<std::ptrdiff_t>(w), w)];
      }
    }
  }
  return out;
}

Tensor conv2d(const Tensor& input, const Tensor& kernel, const Tensor& bias,
              Padding padding) {
  require_rank(input, 3, "conv2d input");
  require_rank(kernel, 4, "conv2d kernel");
  require_rank(bias, 1, "conv2d bias");
  const std::size_t cin = input.dim(0), h = input.dim(1), w = input.dim(2);
  const std::size_t cout = kernel.dim(0), kh = kernel.dim(2), kw = kernel.dim(3);
  if (kernel.dim(1) != cin) {
    fail(ErrorCode::kShapeMismatch, "conv2d: kernel expects " + std::to_string(kernel.dim(1)) +
                                        " input channels, got " + std::to_string(cin));
  }
  if (bias.dim(0) != cout) {
    fail(ErrorCode::kShapeMismatch, "conv2d: bias length " + std::to_string(bias.dim(0)) +
                                        " != output channels " + std::to_string(cout));
  }
  if (kh != kw || (kh != 3 && kh != 1)) {
    fail(ErrorCode::kShapeMismatch, "conv2d: only 3x3 and 1x1 kernels are supported, got " +
                                        shape_to_string(kernel.shape()));
  }
  Tensor out({cout, h, w});
  const auto& k = kernels::active();
  if (kh == 1) {
    k.conv1x1(input.raw(), cin, h * w, kernel.raw(), bias.raw(), cout, out.raw());
  } else {
    const Tensor padded = pad1(input, padding);
    k.conv3x3(padded.raw(), cin, h, w, kernel.raw(), bias.raw(), cout, out.raw());
  }
  return out;
}

Tensor upsample_nearest2x(const Tensor& input) {
  require_rank(input, 3, "upsample_nearest2x");
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  Tensor out({c, 2 * h, 2 * w});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* src = input.channel(ch).data();
    float* dst = out.channel(ch).data();
    for (std::size_t y = 0; y < h; ++y) {
      float* r0 = dst + (2 * y) * (2 * w);
      for (std::size_t x = 0; x < w; ++x) r0[2 * x] = r0[2 * x + 1] = src[y * w + x];
      std::copy(r0, r0 + 2 * w, r0 + 2 * w);
    }
  }
  return out;
}

Tensor maxpool2x2(const Tensor& input) {
  require_rank(input, 3, "maxpool2x2");
  const std::size_t c = input.dim(0), h = input.dim(1), w = input.dim(2);
  if (h < 2 || w < 2) fail(ErrorCode::kShapeError, "maxpool2x2 needs H,W >= 2");
  Tensor out({c, h / 2, w / 2});
  const auto& k = kernels::active();
  for (std::size_t ch = 0; ch < c; ++ch) {
    k.maxpool2x2(input.channel(ch).data(), h, w, out.channel(ch).data());
  }
  return out;
}

ChannelStats channel_stats(const Tensor& input) {
  require_rank(input, 3, "channel_stats");
  const std::size_t c = input.dim(0);
  const std::size_t n = input.dim(1) * input.dim(2);
  const auto& k = kernels::active();
  ChannelStats stats{Tensor({c}), Tensor({c})};
  for (std::size_t ch = 0; ch < c; ++ch) {
    const float* x = input.channel(ch).data();
    const double mean = k.sum(x, n) / static_cast<double>(n);
    const double var = k.sum_sq_dev(x, n, mean) / static_cast<double>(n);
    stats.mean[ch] = static_cast<float>(mean);
    stats.std[ch] = static_cast<float>(std::sqrt(var));
  }
  return stats;
}

Tensor relu(const Tensor& input) {
  Tensor out = input;
  relu_inplace(out);
  return out;
}

void relu_inplace(Tensor& t) { kernels::active().relu(t.raw(), t.size()); }

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  kernels::active().axpy(1.0f, b.raw(), out.raw(), out.size());
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

Tensor scale(const Tensor& a, float factor) {
  Tensor out(a.shape());
  kernels::active().affine(a.raw(), factor, 0.0f, out.raw(), a.size());
  return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  require_rank(a, 3, "concat_channels");
  require_rank(b, 3, "concat_channels");
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    fail(ErrorCode::kShapeMismatch, "concat_channels: spatial dims differ " +
                                        shape_to_string(a.shape()) + " vs " +
                                        shape_to_string(b.shape()));
  }
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(), out.data().begin() + a.size());
  return out;
}

Tensor slice_channels(const Tensor& input, std::size_t begin, std::size_t end) {
  require_rank(input, 3, "slice_channels");
  if (begin >= end || end > input.dim(0)) {
    fail(ErrorCode::kShapeMismatch, "slice_channels: bad range [" + std::to_string(begin) +
                                        "," + std::to_string(end) + ") for " +
                                        shape_to_string(input.shape()));
  }
  const std::size_t plane = input.dim(1) * input.dim(2);
  std::vector<float> data(input.data().begin() + begin * plane,
                          input.data().begin() + end * plane);
  return Tensor({end - begin, input.dim(1), input.dim(2)}, std::move(data));
}

}  // namespace ops
}  // namespace styleaug
