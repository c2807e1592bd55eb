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

// Adaptive order-0 arithmetic coder (Witten/Neal/Cleary style, 32-bit
// integer range with underflow bit-following).
//
// Alphabet: 256 byte values plus an end-of-stream symbol, so the output
// needs no length header. Every count starts at 1 and grows by 32 after the
// symbol is coded; counts are halved (rounding up) whenever the total would
// reach 2^30.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "vowelzip/bytes.hpp"

namespace vowelzip {

inline constexpr std::size_t kAcSymbolCount = 257;
inline constexpr std::uint32_t kAcEndOfStream = 256;
inline constexpr std::uint32_t kAcIncrement = 32;
inline constexpr std::uint32_t kAcMaxTotal = 1u << 30;

/// Symbol counts with a Fenwick tree for O(log n) cumulative lookups.
class FrequencyModel {
 public:
  FrequencyModel() {
    counts_.fill(1);
    rebuild();
  }

  std::uint32_t count(std::uint32_t symbol) const { return counts_[symbol]; }
  std::uint32_t total() const noexcept { return total_; }
  std::span<const std::uint32_t, kAcSymbolCount> counts() const noexcept {
    return counts_;
  }

  /// Sum of counts of all symbols below `symbol`.
  std::uint32_t cumulative(std::uint32_t symbol) const {
    std::uint32_t sum = 0;
    for (std::size_t i = symbol; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  /// The symbol s with cumulative(s) <= target < cumulative(s) + count(s).
  std::uint32_t find(std::uint32_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = 256; step > 0; step >>= 1) {
      if (pos + step <= kAcSymbolCount && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return static_cast<std::uint32_t>(pos);
  }

  void update(std::uint32_t symbol) {
    counts_[symbol] += kAcIncrement;
    total_ += kAcIncrement;
    if (total_ >= kAcMaxTotal) {
      for (auto& c : counts_) c = (c + 1) / 2;
      rebuild();
    } else {
      for (std::size_t i = symbol + 1; i <= kAcSymbolCount; i += i & (~i + 1)) {
        tree_[i] += kAcIncrement;
      }
    }
  }

  friend bool operator==(const FrequencyModel& a, const FrequencyModel& b) {
    return a.counts_ == b.counts_;
  }

 private:
  void rebuild() {
    tree_.fill(0);
    total_ = 0;
    for (std::size_t s = 0; s < kAcSymbolCount; ++s) {
      total_ += counts_[s];
      for (std::size_t i = s + 1; i <= kAcSymbolCount; i += i & (~i + 1)) {
        tree_[i] += counts_[s];
      }
    }
  }

  std::array<std::uint32_t, kAcSymbolCount> counts_{};
  std::array<std::uint32_t, kAcSymbolCount + 1> tree_{};  // 1-based
  std::uint32_t total_ = 0;
};

namespace detail {
inline constexpr std::uint64_t kAcTop = 0xFFFFFFFFull;
inline constexpr std::uint64_t kAcHalf = 1ull << 31;
inline constexpr std::uint64_t kAcQuarter = 1ull << 30;
inline constexpr std::uint64_t kAcThreeQuarters = kAcHalf + kAcQuarter;
}  // namespace detail

class ArithmeticEncoder {
 public:
  void encode(std::uint32_t symbol) {
    narrow(model_.cumulative(symbol), model_.count(symbol));
    model_.update(symbol);
  }

  /// Codes the end-of-stream symbol and flushes. The encoder is spent
  /// afterwards.
  Bytes finish() && {
    narrow(model_.cumulative(kAcEndOfStream), model_.count(kAcEndOfStream));
    ++pending_;
    emit(low_ >= detail::kAcQuarter);
    if (filled_ > 0) out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - filled_)));
    return std::move(out_);
  }

  const FrequencyModel& model() const noexcept { return model_; }

 private:
  void narrow(std::uint32_t cum, std::uint32_t freq) {
    const std::uint64_t range = high_ - low_ + 1;
    const std::uint64_t total = model_.total();
    high_ = low_ + range * (cum + freq) / total - 1;
    low_ = low_ + range * cum / total;
    for (;;) {
      if (high_ < detail::kAcHalf) {
        emit(false);
      } else if (low_ >= detail::kAcHalf) {
        emit(true);
        low_ -= detail::kAcHalf;
        high_ -= detail::kAcHalf;
      } else if (low_ >= detail::kAcQuarter && high_ < detail::kAcThreeQuarters) {
        ++pending_;
        low_ -= detail::kAcQuarter;
        high_ -= detail::kAcQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
    }
  }

  void emit(bool bit) {
    put(bit);
    for (; pending_ > 0; --pending_) put(!bit);
  }

  void put(bool bit) {
    acc_ = static_cast<std::uint8_t>((acc_ << 1) | (bit ? 1 : 0));
    if (++filled_ == 8) {
      out_.push_back(acc_);
      acc_ = 0;
      filled_ = 0;
    }
  }

  FrequencyModel model_;
  std::uint64_t low_ = 0;
  std::uint64_t high_ = detail::kAcTop;
  std::uint64_t pending_ = 0;
  Bytes out_;
  std::uint8_t acc_ = 0;
  unsigned filled_ = 0;
};

class ArithmeticDecoder {
 public:
  /// A well-formed stream never needs more than 30 bits past its end (the
  /// decoder's 32-bit window minus the two termination bits). Reading beyond
  /// this many phantom zero bits means the stream was cut short.
  static constexpr std::size_t kMaxPhantomBits = 32;

  explicit ArithmeticDecoder(ByteView data) : data_(data) {
    for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | next_bit();
  }

  /// Returns the next symbol; kAcEndOfStream terminates the stream.
  std::uint32_t decode() {
    if (value_ < low_ || value_ > high_) {
      if (phantom_bits_ > 0) {
        throw TruncationError("ac: stream ends inside a symbol (" +
                              std::to_string(data_.size()) + " bytes)");
      }
      throw CodecError("ac: corrupt stream at bit " + std::to_string(bit_pos_));
    }
    const std::uint64_t range = high_ - low_ + 1;
    const std::uint64_t total = model_.total();
    const auto target =
        static_cast<std::uint32_t>(((value_ - low_ + 1) * total - 1) / range);
    const std::uint32_t symbol = model_.find(target);
    const std::uint64_t cum = model_.cumulative(symbol);
    high_ = low_ + range * (cum + model_.count(symbol)) / total - 1;
    low_ = low_ + range * cum / total;
    if (symbol == kAcEndOfStream) return symbol;
    model_.update(symbol);
    for (;;) {
      if (high_ < detail::kAcHalf) {
        // nothing to subtract
      } else if (low_ >= detail::kAcHalf) {
        low_ -= detail::kAcHalf;
        high_ -= detail::kAcHalf;
        value_ -= detail::kAcHalf;
      } else if (low_ >= detail::kAcQuarter && high_ < detail::kAcThreeQuarters) {
        low_ -= detail::kAcQuarter;
        high_ -= detail::kAcQuarter;
        value_ -= detail::kAcQuarter;
      } else {
        break;
      }
      low_ <<= 1;
      high_ = (high_ << 1) | 1;
      value_ = (value_ << 1) | next_bit();
    }
    return symbol;
  }

  const FrequencyModel& model() const noexcept { return model_; }

 private:
  std::uint64_t next_bit() {
    if (bit_pos_ < data_.size() * 8) {
      const std::uint64_t bit = (data_[bit_pos_ / 8] >> (7 - bit_pos_ % 8)) & 1u;
      ++bit_pos_;
      return bit;
    }
    if (++phantom_bits_ > kMaxPhantomBits) {
      throw TruncationError("ac: stream exhausted before end-of-stream symbol (" +
                            std::to_string(data_.size()) + " bytes)");
    }
    return 0;
  }

  ByteView data_;
  std::size_t bit_pos_ = 0;
  std::size_t phantom_bits_ = 0;
  FrequencyModel model_;
  std::uint64_t low_ = 0;
  std::uint64_t high_ = detail::kAcTop;
  std::uint64_t value_ = 0;
};

inline Bytes ac_compress(ByteView data) {
  ArithmeticEncoder enc;
  for (std::uint8_t b : data) enc.encode(b);
  return std::move(enc).finish();
}

inline Bytes ac_decompress(ByteView data) {
  ArithmeticDecoder dec(data);
  Bytes out;
  for (std::uint32_t s = dec.decode(); s != kAcEndOfStream; s = dec.decode()) {
    out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

}  // namespace vowelzip
