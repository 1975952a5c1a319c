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

#ifndef STYLEAUG_ERROR_HPP_
#define STYLEAUG_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace styleaug {

enum class ErrorCode {
  kShapeMismatch,
  kShapeError,
  kInvalidParameter,
  kDecodeError,
  kUnsupportedFormat,
  kIoError,
  kBadMagic,
  kVersionUnsupported,
  kManifestMismatch,
  kTruncatedFile,
  kWeightsMissing,
  kImageTooSmall,
  kBatchTooSmall,
  kInvalidDistribution,
  kEmptyInput,
  kMissingField,
  kInvalidRecord,
  kNoDecidableRecords,
  kDatasetTooSmall,
  kDivergenceDetected,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  std::string_view name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kShapeError: return "ShapeError";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kWeightsMissing: return "WeightsMissing";
    case ErrorCode::kImageTooSmall: return "ImageTooSmall";
    case ErrorCode::kBatchTooSmall: return "BatchTooSmall";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kInvalidRecord: return "InvalidRecord";
    case ErrorCode::kNoDecidableRecords: return "NoDecidableRecords";
    case ErrorCode::kDatasetTooSmall: return "DatasetTooSmall";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace styleaug

#endif  // STYLEAUG_ERROR_HPP_
