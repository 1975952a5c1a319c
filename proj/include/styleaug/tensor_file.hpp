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

#ifndef STYLEAUG_TENSOR_FILE_HPP_
#define STYLEAUG_TENSOR_FILE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "styleaug/tensor.hpp"

namespace styleaug {

inline constexpr std::array<char, 4> kTensorFileMagic = {'A', 'D', 'W', 'T'};
inline constexpr std::uint32_t kTensorFileVersion = 1;

// Little-endian named-tensor container:
//   "ADWT" | u32 version | u32 count |
//   count x (u16 name_len | name | u8 ndim | ndim x u32 dims | f32 data) |
//   3 x f32 input mean | 3 x f32 input std
struct TensorFile {
  std::vector<std::pair<std::string, Tensor>> entries;
  std::array<float, 3> input_mean{0.0f, 0.0f, 0.0f};
  std::array<float, 3> input_std{1.0f, 1.0f, 1.0f};
};

TensorFile parse_tensor_file(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_tensor_file(const TensorFile& file);

TensorFile read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const TensorFile& file, const std::filesystem::path& path);

}  // namespace styleaug

#endif  // STYLEAUG_TENSOR_FILE_HPP_
