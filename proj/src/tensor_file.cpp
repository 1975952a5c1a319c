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

#include "styleaug/tensor_file.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "styleaug/error.hpp"

namespace styleaug {
namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorCode::kTruncatedFile, std::string("file ends inside ") + what);
    }
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 4;
    return v;
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

TensorFile parse_tensor_file(std::span<const std::uint8_t> bytes) {
  const std::size_t head = std::min<std::size_t>(bytes.size(), 4);
  if (bytes.empty() || std::memcmp(bytes.data(), kTensorFileMagic.data(), head) != 0) {
    fail(ErrorCode::kBadMagic, "missing ADWT magic");
  }
  if (head < 4) fail(ErrorCode::kTruncatedFile, "file ends inside the magic");
  Reader r(bytes.subspan(4));
  const std::uint32_t version = r.u32("version");
  if (version != kTensorFileVersion) {
    fail(ErrorCode::kVersionUnsupported, "weight file version " + std::to_string(version) +
                                             " (supported: " + std::to_string(kTensorFileVersion) + ")");
  }
  const std::uint32_t count = r.u32("tensor count");
  TensorFile file;
  file.entries.reserve(std::min<std::uint32_t>(count, 4096));
  for (std::uint32_t t = 0; t < count; ++t) {
    const std::uint16_t name_len = r.u16("tensor name length");
    std::string name = r.str(name_len, "tensor name");
    const std::uint8_t ndim = r.u8("tensor rank");
    if (ndim == 0) fail(ErrorCode::kDecodeError, "tensor '" + name + "' has rank 0");
    Shape shape(ndim);
    std::size_t numel = 1;
    for (auto& d : shape) {
      d = r.u32("tensor dims");
      if (d == 0) fail(ErrorCode::kDecodeError, "tensor '" + name + "' has a zero dimension");
      numel *= d;
      if (numel > (std::size_t{1} << 34)) fail(ErrorCode::kDecodeError, "tensor '" + name + "' too large");
    }
    r.need(numel * 4, "tensor data");
    std::vector<float> data(numel);
    for (float& v : data) v = r.f32("tensor data");
    file.entries.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  for (float& v : file.input_mean) v = r.f32("metadata trailer");
  for (float& v : file.input_std) v = r.f32("metadata trailer");
  if (r.remaining() != 0) {
    fail(ErrorCode::kDecodeError, std::to_string(r.remaining()) + " unexpected bytes after trailer");
  }
  return file;
}

std::vector<std::uint8_t> serialize_tensor_file(const TensorFile& file) {
  std::vector<std::uint8_t> out(kTensorFileMagic.begin(), kTensorFileMagic.end());
  put_u32(out, kTensorFileVersion);
  put_u32(out, static_cast<std::uint32_t>(file.entries.size()));
  for (const auto& [name, tensor] : file.entries) {
    if (name.size() > 0xFFFF) fail(ErrorCode::kInvalidParameter, "tensor name too long");
    out.push_back(static_cast<std::uint8_t>(name.size()));
    out.push_back(static_cast<std::uint8_t>(name.size() >> 8));
    out.insert(out.end(), name.begin(), name.end());
    if (tensor.rank() > 255) fail(ErrorCode::kInvalidParameter, "tensor rank too large");
    out.push_back(static_cast<std::uint8_t>(tensor.rank()));
    for (std::size_t d : tensor.shape()) put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : tensor.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  for (float v : file.input_mean) put_u32(out, std::bit_cast<std::uint32_t>(v));
  for (float v : file.input_std) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open weight file " + path.string());
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
  return parse_tensor_file(bytes);
}

void write_tensor_file(const TensorFile& file, const std::filesystem::path& path) {
  const auto bytes = serialize_tensor_file(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace styleaug
