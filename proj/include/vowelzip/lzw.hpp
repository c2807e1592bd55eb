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

// LZW dictionary coder over bytes.
//
// The string table starts with the 256 single-byte strings. After every
// emitted code the encoder adds (current match + next byte), until the
// table holds 2^16 entries, at which point it freezes. There are no CLEAR
// or EOF codes.
//
// Container layout ("LZW1"):
//
//   offset 0   4 bytes   magic "LZW1"
//   offset 4   8 bytes   original length, unsigned little-endian
//   offset 12  ...       codes, MSB-first, zero-padded to a byte boundary
//
// Code i is written with min(16, bit_width(next_index)) bits, where
// next_index = min(256 + i, 2^16) is the table index the encoder would
// assign next when it emits code i. That is 9 bits at the start, growing by
// one exactly when next_index reaches 2^width.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vowelzip/bytes.hpp"

namespace vowelzip {

inline constexpr std::uint32_t kLzwAlphabetSize = 256;
inline constexpr std::uint32_t kLzwMaxEntries = 1u << 16;
inline constexpr unsigned kLzwMinWidth = 9;
inline constexpr unsigned kLzwMaxWidth = 16;
inline constexpr char kLzwMagic[4] = {'L', 'Z', 'W', '1'};
inline constexpr std::size_t kLzwHeaderSize = 12;

struct CodeStream {
  std::vector<std::uint32_t> codes;

  friend bool operator==(const CodeStream&, const CodeStream&) = default;
};

struct LzwOptions {
  /// Never freeze the table. Codes may then exceed 16 bits, so such streams
  /// can be measured and decoded but not packed into a container.
  bool unbounded_table = false;

  std::uint64_t table_limit() const noexcept {
    return unbounded_table ? UINT64_MAX : kLzwMaxEntries;
  }
};

/// Bit width of the i-th code in a container.
constexpr unsigned lzw_code_width(std::size_t index) noexcept {
  const std::uint64_t next =
      std::min<std::uint64_t>(kLzwAlphabetSize + std::uint64_t{index}, kLzwMaxEntries);
  return std::min<unsigned>(kLzwMaxWidth,
                            static_cast<unsigned>(std::bit_width(next)));
}

inline CodeStream lzw_compress(ByteView data, LzwOptions options = {}) {
  CodeStream out;
  if (data.empty()) return out;

  // (prefix code << 8 | byte) -> code
  std::unordered_map<std::uint64_t, std::uint32_t> table;
  table.reserve(std::min<std::size_t>(data.size(), kLzwMaxEntries) * 2);
  const std::uint64_t limit = options.table_limit();
  std::uint64_t next = kLzwAlphabetSize;

  std::uint32_t match = data[0];
  for (std::size_t i = 1; i < data.size(); ++i) {
    const std::uint64_t key = (std::uint64_t{match} << 8) | data[i];
    if (auto it = table.find(key); it != table.end()) {
      match = it->second;
      continue;
    }
    out.codes.push_back(match);
    if (next < limit) table.emplace(key, static_cast<std::uint32_t>(next++));
    match = data[i];
  }
  out.codes.push_back(match);
  return out;
}

inline Bytes lzw_decompress(const CodeStream& stream, LzwOptions options = {}) {
  // Each entry is its prefix entry plus one byte; first bytes are cached so
  // the KwKwK case needs no special lookup.
  struct Entry {
    std::uint32_t prefix;
    std::uint32_t length;
    std::uint8_t last;
    std::uint8_t first;
  };
  std::vector<Entry> table;
  table.reserve(kLzwAlphabetSize + stream.codes.size());
  for (std::uint32_t b = 0; b < kLzwAlphabetSize; ++b) {
    const auto byte = static_cast<std::uint8_t>(b);
    table.push_back({0, 1, byte, byte});
  }
  const std::uint64_t limit = options.table_limit();

  Bytes out;
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < stream.codes.size(); ++i) {
    const std::uint32_t code = stream.codes[i];
    // The entry created by this step is prev + first byte of the current
    // string. Its first byte is always prev's first byte; its last byte is
    // fixed up once the current code is known to be valid.
    const bool grows = i > 0 && table.size() < limit;
    if (grows) {
      const Entry& p = table[prev];
      table.push_back({prev, p.length + 1, 0, p.first});
    }
    if (code >= table.size()) {
      throw CorruptStreamError("lzw: code " + std::to_string(code) +
                                   " at position " + std::to_string(i) +
                                   " refers past the string table (size " +
                                   std::to_string(table.size()) + ")",
                               i);
    }
    if (grows) table.back().last = table[code].first;

    const Entry& e = table[code];
    const std::size_t end = out.size() + e.length;
    out.resize(end);
    std::size_t pos = end;
    for (std::uint32_t c = code;;) {
      out[--pos] = table[c].last;
      if (table[c].length == 1) break;
      c = table[c].prefix;
    }
    prev = code;
  }
  return out;
}

namespace detail {

class BitWriter {
 public:
  explicit BitWriter(Bytes& sink) : sink_(sink) {}

  void write(std::uint32_t value, unsigned width) {
    for (unsigned b = width; b-- > 0;) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((value >> b) & 1u));
      if (++filled_ == 8) {
        sink_.push_back(acc_);
        acc_ = 0;
        filled_ = 0;
      }
    }
  }

  void flush() {
    if (filled_ > 0) {
      sink_.push_back(static_cast<std::uint8_t>(acc_ << (8 - filled_)));
      acc_ = 0;
      filled_ = 0;
    }
  }

 private:
  Bytes& sink_;
  std::uint8_t acc_ = 0;
  unsigned filled_ = 0;
};

class BitReader {
 public:
  explicit BitReader(ByteView data) : data_(data) {}

  std::size_t remaining() const noexcept { return data_.size() * 8 - pos_; }

  std::uint32_t read(unsigned width) {
    std::uint32_t v = 0;
    for (unsigned b = 0; b < width; ++b, ++pos_) {
      const unsigned bit = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
      v = (v << 1) | bit;
    }
    return v;
  }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Throws std::invalid_argument if a code does not fit its scheduled width
/// (only possible for unbounded-table streams).
inline Bytes pack_container(const CodeStream& stream,
                            std::uint64_t original_length) {
  Bytes out;
  out.reserve(kLzwHeaderSize + stream.codes.size() * 2 + 1);
  out.insert(out.end(), std::begin(kLzwMagic), std::end(kLzwMagic));
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(original_length >> (8 * i)));
  }
  detail::BitWriter writer(out);
  for (std::size_t i = 0; i < stream.codes.size(); ++i) {
    const unsigned width = lzw_code_width(i);
    if (stream.codes[i] >> width) {
      throw std::invalid_argument("lzw: code " + std::to_string(stream.codes[i]) +
                                  " at position " + std::to_string(i) +
                                  " does not fit in " + std::to_string(width) +
                                  " bits");
    }
    writer.write(stream.codes[i], width);
  }
  writer.flush();
  return out;
}

struct LzwContainer {
  CodeStream stream;
  std::uint64_t original_length = 0;

  friend bool operator==(const LzwContainer&, const LzwContainer&) = default;
};

/// Reads codes until they account for exactly original_length bytes. The
/// string lengths are tracked alongside, replaying the table growth.
inline LzwContainer unpack_container(ByteView data) {
  if (data.size() < kLzwHeaderSize ||
      !std::equal(std::begin(kLzwMagic), std::end(kLzwMagic), data.begin())) {
    throw FormatError("lzw: missing LZW1 magic");
  }
  LzwContainer result;
  for (int i = 0; i < 8; ++i) {
    result.original_length |= std::uint64_t{data[4 + static_cast<std::size_t>(i)]}
                              << (8 * i);
  }

  std::vector<std::uint64_t> lengths(kLzwAlphabetSize, 1);
  detail::BitReader reader(data.subspan(kLzwHeaderSize));
  std::uint64_t produced = 0;
  std::uint32_t prev = 0;
  std::size_t bits = 0;
  for (std::size_t i = 0; produced < result.original_length; ++i) {
    const unsigned width = lzw_code_width(i);
    if (reader.remaining() < width) {
      throw TruncationError("lzw: payload ends after " + std::to_string(i) +
                            " codes (" + std::to_string(produced) + " of " +
                            std::to_string(result.original_length) +
                            " bytes decoded)");
    }
    const std::uint32_t code = reader.read(width);
    bits += width;
    if (i > 0 && lengths.size() < kLzwMaxEntries) {
      lengths.push_back(lengths[prev] + 1);
    }
    if (code >= lengths.size()) {
      throw CorruptStreamError("lzw: code " + std::to_string(code) +
                                   " at position " + std::to_string(i) +
                                   " refers past the string table",
                               i);
    }
    produced += lengths[code];
    result.stream.codes.push_back(code);
    prev = code;
  }
  if (produced != result.original_length) {
    throw CorruptStreamError("lzw: codes decode to " + std::to_string(produced) +
                                 " bytes, header says " +
                                 std::to_string(result.original_length),
                             result.stream.codes.size() - 1);
  }
  if ((bits + 7) / 8 != data.size() - kLzwHeaderSize) {
    throw FormatError("lzw: " +
                      std::to_string(data.size() - kLzwHeaderSize - (bits + 7) / 8) +
                      " trailing bytes after payload");
  }
  return result;
}

}  // namespace vowelzip
