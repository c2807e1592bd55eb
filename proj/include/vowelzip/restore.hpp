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

// Vowel restorers: a frequency-lookup baseline keyed by consonant skeleton,
// and the JSON-lines prediction interchange used for external restorers.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "vowelzip/corpus.hpp"

namespace vowelzip {

/// Splits on every single space; consecutive spaces yield empty tokens so
/// that joining with ' ' reproduces the input exactly.
inline std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t sp = s.find(' ', begin);
    if (sp == std::string_view::npos) {
      out.push_back(s.substr(begin));
      return out;
    }
    out.push_back(s.substr(begin, sp - begin));
    begin = sp + 1;
  }
}

struct LookupEntry {
  std::string word;
  std::uint64_t count = 0;

  friend bool operator==(const LookupEntry&, const LookupEntry&) = default;
};

/// Consonant skeleton -> candidate words, ranked by count descending then
/// word ascending.
struct LookupRestorerModel {
  static constexpr std::string_view kVersion = "v1";

  std::map<std::string, std::vector<LookupEntry>> table;
  std::uint64_t trained_pairs = 0;

  const std::vector<LookupEntry>* candidates(std::string_view key) const {
    auto it = table.find(std::string(key));
    return it == table.end() ? nullptr : &it->second;
  }

  friend bool operator==(const LookupRestorerModel&, const LookupRestorerModel&) = default;
};

inline void rank_entries(std::vector<LookupEntry>& entries) {
  std::ranges::sort(entries, [](const LookupEntry& a, const LookupEntry& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
}

inline LookupRestorerModel train_lookup_restorer(const std::vector<SentencePair>& pairs) {
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>> counts;
  for (const auto& pair : pairs) {
    for (std::string_view token : split_spaces(pair.target)) {
      ++counts[remove_vowels(token)][std::string(token)];
    }
  }
  LookupRestorerModel model;
  model.trained_pairs = pairs.size();
  for (auto& [key, words] : counts) {
    auto& entries = model.table[key];
    entries.reserve(words.size());
    for (auto& [word, n] : words) entries.push_back({word, n});
    rank_entries(entries);
  }
  return model;
}

/// Each space-separated token is replaced by its top-ranked word; unknown
/// skeletons pass through unchanged.
inline std::string restore_sentence(const LookupRestorerModel& model, std::string_view source) {
  std::string out;
  out.reserve(source.size() * 3 / 2);
  bool first = true;
  for (std::string_view token : split_spaces(source)) {
    if (!first) out.push_back(' ');
    first = false;
    const auto* entries = model.candidates(token);
    if (entries && !entries->empty()) {
      out += entries->front().word;
    } else {
      out += token;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model file: a header line, then `key<TAB>word<TAB>count` sorted by key and
// rank.
//
//   #lookup-restorer<TAB>v1<TAB><trained_pairs>

inline void save_model(std::ostream& out, const LookupRestorerModel& model) {
  out << "#lookup-restorer\t" << LookupRestorerModel::kVersion << '\t'
      << model.trained_pairs << '\n';
  for (const auto& [key, entries] : model.table) {
    for (const auto& e : entries) out << key << '\t' << e.word << '\t' << e.count << '\n';
  }
}

inline LookupRestorerModel load_model(std::istream& in) {
  LookupRestorerModel model;
  std::string line;
  if (!std::getline(in, line)) throw IngestError("model: empty file", 1);
  const std::string prefix =
      "#lookup-restorer\t" + std::string(LookupRestorerModel::kVersion) + "\t";
  if (!line.starts_with(prefix)) {
    throw IngestError("model: line 1: expected '#lookup-restorer<TAB>v1<TAB>N' header", 1);
  }
  try {
    model.trained_pairs = std::stoull(line.substr(prefix.size()));
  } catch (const std::exception&) {
    throw IngestError("model: line 1: bad trained_pairs", 1);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw IngestError("model: line " + std::to_string(lineno) + ": expected 3 fields",
                        lineno);
    }
    std::string key = line.substr(0, t1);
    std::string word = line.substr(t1 + 1, t2 - t1 - 1);
    std::uint64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(t2 + 1), &used);
      if (used != line.size() - t2 - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw IngestError("model: line " + std::to_string(lineno) + ": bad count", lineno);
    }
    if (count == 0 || remove_vowels(word) != key) {
      throw IngestError("model: line " + std::to_string(lineno) + ": entry '" + word +
                            "' is inconsistent with key '" + key + "'",
                        lineno);
    }
    model.table[std::move(key)].push_back({std::move(word), count});
  }
  for (auto& [key, entries] : model.table) rank_entries(entries);
  return model;
}

// ---------------------------------------------------------------------------
// Prediction interchange: one JSON object per line,
//   {"id": <int>, "source": <devowelled text>, "prediction": <restored text>}

struct RestorationRecord {
  std::int64_t id = 0;
  std::string source;
  std::string prediction;

  friend bool operator==(const RestorationRecord&, const RestorationRecord&) = default;
};

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<RestorationRecord> read_predictions(std::istream& in) {
  std::vector<RestorationRecord> records;
  std::unordered_set<std::int64_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    RestorationRecord rec;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("id") || !j.contains("source") ||
          !j.contains("prediction") || !j["id"].is_number_integer() ||
          !j["source"].is_string() || !j["prediction"].is_string()) {
        throw std::invalid_argument("expected {\"id\": int, \"source\": str, \"prediction\": str}");
      }
      rec.id = j["id"].get<std::int64_t>();
      rec.source = j["source"].get<std::string>();
      rec.prediction = j["prediction"].get<std::string>();
    } catch (const std::exception& e) {
      throw IngestError("predictions: line " + std::to_string(lineno) + ": " + e.what(),
                        lineno);
    }
    if (!seen.insert(rec.id).second) {
      throw IntegrityError("predictions: line " + std::to_string(lineno) +
                           ": duplicate id " + std::to_string(rec.id));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

inline void write_predictions(std::ostream& out, const std::vector<RestorationRecord>& records) {
  for (const auto& r : records) {
    const nlohmann::ordered_json j = {{"id", r.id}, {"source", r.source}, {"prediction", r.prediction}};
    out << j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
  }
}

}  // namespace vowelzip
