// Copyright 2026 The vowelzip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vowelzip {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto v = as_bytes(s);
  return {v.begin(), v.end()};
}

inline std::string to_string(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

/// Base class for every codec failure (bad framing, truncation, corrupt
/// codes).
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public CodecError {
 public:
  using CodecError::CodecError;
};

class TruncationError : public CodecError {
 public:
  using CodecError::CodecError;
};

class CorruptStreamError : public CodecError {
 public:
  CorruptStreamError(const std::string& what, std::size_t position)
      : CodecError(what), position_(position) {}

  /// Index of the offending code within the stream.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace vowelzip
