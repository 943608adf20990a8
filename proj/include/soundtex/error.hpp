// include/soundtex/error.hpp

// Copyright 2026  The soundtex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soundtex {

enum class Errc {
  kInvalidArgument,  // precondition violation
  kUnsupportedFormat,
  kCorruptFile,
  kEmptyAudio,
  kWindowFullyOutside,
  kChannelOutOfRange,
  kTooFewSamples,
  kTooFewDimensions,
  kNonFiniteInput,
  kDimensionMismatch,
  kIoError,
  kBadMagic,
  kVersionMismatch,
  kTruncatedFile,
  kParseError,
};

std::string_view ErrcName(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the Python module) can map it to an exit status or
/// exception type without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kUnsupportedFormat: return "UnsupportedFormat";
    case Errc::kCorruptFile: return "CorruptFile";
    case Errc::kEmptyAudio: return "EmptyAudio";
    case Errc::kWindowFullyOutside: return "WindowFullyOutside";
    case Errc::kChannelOutOfRange: return "ChannelOutOfRange";
    case Errc::kTooFewSamples: return "TooFewSamples";
    case Errc::kTooFewDimensions: return "TooFewDimensions";
    case Errc::kNonFiniteInput: return "NonFiniteInput";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kIoError: return "IoError";
    case Errc::kBadMagic: return "BadMagic";
    case Errc::kVersionMismatch: return "VersionMismatch";
    case Errc::kTruncatedFile: return "TruncatedFile";
    case Errc::kParseError: return "ParseError";
  }
  return "Unknown";
}

inline void Require(bool cond, const char* what) {
  if (!cond) throw Error(Errc::kInvalidArgument, what);
}

}  // namespace soundtex
