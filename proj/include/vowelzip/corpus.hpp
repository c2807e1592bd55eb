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

// Corpus ingestion, the vowel-removal transform and source/target pair
// datasets.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vowelzip {

/// Raised for malformed input files. Carries the 1-based line number when
/// the problem is tied to a line (0 otherwise).
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The ten ASCII vowels, both cases. 'y' is not a vowel here, nor are
/// accented letters.
struct VowelSet {
  static constexpr std::array<char, 10> kCharacters = {'a', 'e', 'i', 'o', 'u',
                                                       'A', 'E', 'I', 'O', 'U'};

  static constexpr bool contains(char c) noexcept {
    return std::find(kCharacters.begin(), kCharacters.end(), c) !=
           kCharacters.end();
  }

  static constexpr bool contains(char32_t c) noexcept {
    return c < 0x80 && contains(static_cast<char>(c));
  }
};

/// Number of Unicode scalar values in a UTF-8 string. Continuation bytes
/// are not counted, so malformed input degrades to a byte count of lead
/// bytes.
inline std::size_t utf8_length(std::string_view text) noexcept {
  return static_cast<std::size_t>(std::count_if(
      text.begin(), text.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
      }));
}

inline std::size_t count_vowels(std::string_view text) noexcept {
  return static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(),
                    [](char c) { return VowelSet::contains(c); }));
}

/// Deletes every VowelSet character. ASCII bytes never occur inside a UTF-8
/// multi-byte sequence, so working on bytes keeps all other code points
/// intact.
inline std::string remove_vowels(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!VowelSet::contains(c)) out.push_back(c);
  }
  return out;
}

/// Replaces TAB, LF and CR with a single space each so that a sentence fits
/// in one TSV field.
inline std::string sanitize_field(std::string_view text) {
  std::string out(text);
  std::replace_if(
      out.begin(), out.end(),
      [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

struct SentencePair {
  std::size_t id = 0;
  std::string source;  // devowelled
  std::string target;  // original

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct PairSet {
  std::vector<SentencePair> pairs;
  std::size_t empty_sources = 0;
};

struct SplitSpec {
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t test_size = 0;
};

struct CorpusSplit {
  std::vector<SentencePair> train;
  std::vector<SentencePair> val;
  std::vector<SentencePair> test;
};

/// Selects one TAB-separated field per record. A record with no TAB is a
/// single field, so plain-text input passes through with column 0.
inline std::vector<std::string> extract_english_column(
    const std::vector<std::string>& rows, std::size_t column) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string_view row = rows[i];
    std::size_t field = 0;
    std::size_t begin = 0;
    while (field < column) {
      std::size_t tab = row.find('\t', begin);
      if (tab == std::string_view::npos) {
        throw IngestError("line " + std::to_string(i + 1) + ": expected at least " +
                              std::to_string(column + 1) + " fields, found " +
                              std::to_string(field + 1),
                          i + 1);
      }
      begin = tab + 1;
      ++field;
    }
    std::size_t end = row.find('\t', begin);
    out.emplace_back(row.substr(begin, end == std::string_view::npos
                                           ? std::string_view::npos
                                           : end - begin));
  }
  return out;
}

inline PairSet build_pairs(const std::vector<std::string>& sentences) {
  PairSet set;
  set.pairs.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentencePair pair{i, remove_vowels(sentences[i]), sentences[i]};
    if (pair.source.empty()) ++set.empty_sources;
    set.pairs.push_back(std::move(pair));
  }
  return set;
}

/// Head-sequential split: train first, then validation, then test.
inline CorpusSplit split_corpus(const std::vector<SentencePair>& pairs,
                                const SplitSpec& spec) {
  const std::size_t requested = spec.train_size + spec.val_size + spec.test_size;
  if (requested > pairs.size()) {
    throw std::invalid_argument(
        "split requests " + std::to_string(requested) + " pairs (" +
        std::to_string(spec.train_size) + "+" + std::to_string(spec.val_size) +
        "+" + std::to_string(spec.test_size) + ") but only " +
        std::to_string(pairs.size()) + " are available");
  }
  auto it = pairs.begin();
  CorpusSplit split;
  split.train.assign(it, it + static_cast<std::ptrdiff_t>(spec.train_size));
  it += static_cast<std::ptrdiff_t>(spec.train_size);
  split.val.assign(it, it + static_cast<std::ptrdiff_t>(spec.val_size));
  it += static_cast<std::ptrdiff_t>(spec.val_size);
  split.test.assign(it, it + static_cast<std::ptrdiff_t>(spec.test_size));
  return split;
}

// ---------------------------------------------------------------------------
// File I/O

/// Reads LF-terminated lines; a trailing CR (CRLF files) is dropped.
inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path, 0);
  return read_lines(in);
}

/// `source<TAB>target` per line, LF endings, no header.
inline void write_pairs(std::ostream& out,
                        const std::vector<SentencePair>& pairs) {
  for (const auto& p : pairs) {
    out << p.source << '\t' << p.target << '\n';
  }
}

/// Pair ids are 0-based line indices.
inline std::vector<SentencePair> read_pairs(std::istream& in) {
  std::vector<SentencePair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw IngestError("line " + std::to_string(lineno) +
                            ": expected exactly two TAB-separated fields",
                        lineno);
    }
    pairs.push_back({lineno - 1, line.substr(0, tab), line.substr(tab + 1)});
  }
  return pairs;
}

inline std::vector<SentencePair> read_pairs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path, 0);
  try {
    return read_pairs(in);
  } catch (const IngestError& e) {
    throw IngestError(path + ": " + e.what(), e.line());
  }
}

}  // namespace vowelzip
