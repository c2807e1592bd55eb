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

// Restoration quality metrics: corpus BLEU, greedy-matching BERTScore over a
// pluggable token embedder, and character error rate.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vowelzip {

/// Splits on runs of ASCII whitespace. Case is preserved.
inline std::vector<std::string> tokenize_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < s.size()) {
    while (i < s.size() && space(s[i])) ++i;
    const std::size_t begin = i;
    while (i < s.size() && !space(s[i])) ++i;
    if (i > begin) out.emplace_back(s.substr(begin, i - begin));
  }
  return out;
}

inline void require_same_size(std::size_t refs, std::size_t cands, std::string_view what) {
  if (refs != cands) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(refs) +
                                " references but " + std::to_string(cands) + " candidates");
  }
}

// ---------------------------------------------------------------------------
// BLEU

struct BleuConfig {
  std::size_t max_n = 4;
  std::vector<double> weights = {0.25, 0.25, 0.25, 0.25};
  double scale = 100.0;

  void validate() const {
    if (max_n < 1) throw std::invalid_argument("bleu: max_n must be >= 1");
    if (weights.size() != max_n) throw std::invalid_argument("bleu: need one weight per order");
    if (std::abs(std::accumulate(weights.begin(), weights.end(), 0.0) - 1.0) > 1e-9) {
      throw std::invalid_argument("bleu: weights must sum to 1");
    }
  }
};

/// Pooled corpus statistics: clipped matches and candidate n-gram totals
/// per order, plus total candidate/reference lengths in tokens.
struct BleuStats {
  std::vector<std::uint64_t> matches;
  std::vector<std::uint64_t> totals;
  std::uint64_t candidate_length = 0;
  std::uint64_t reference_length = 0;

  double precision(std::size_t n) const {
    return totals[n] == 0 ? 0.0
                          : static_cast<double>(matches[n]) / static_cast<double>(totals[n]);
  }

  double brevity_penalty() const {
    if (candidate_length == 0) return 0.0;
    if (candidate_length > reference_length) return 1.0;
    return std::exp(1.0 - static_cast<double>(reference_length) /
                              static_cast<double>(candidate_length));
  }
};

inline BleuStats bleu_stats(const std::vector<std::string>& references,
                            const std::vector<std::string>& candidates,
                            std::size_t max_n = 4) {
  require_same_size(references.size(), candidates.size(), "bleu");
  BleuStats st;
  st.matches.assign(max_n, 0);
  st.totals.assign(max_n, 0);

  // n-grams are keyed by their tokens joined with a separator that
  // whitespace tokenization can never produce.
  const auto count_ngrams = [](const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::string, std::uint64_t> counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string key = toks[i];
      for (std::size_t k = 1; k < n; ++k) {
        key += ' ';
        key += toks[i + k];
      }
      ++counts[key];
    }
    return counts;
  };

  for (std::size_t s = 0; s < references.size(); ++s) {
    const auto ref = tokenize_whitespace(references[s]);
    const auto cand = tokenize_whitespace(candidates[s]);
    st.reference_length += ref.size();
    st.candidate_length += cand.size();
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto ref_counts = count_ngrams(ref, n);
      for (const auto& [gram, c] : count_ngrams(cand, n)) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) st.matches[n - 1] += std::min(c, it->second);
        st.totals[n - 1] += c;
      }
    }
  }
  return st;
}

/// Corpus BLEU without smoothing: any zero n-gram precision gives 0.
inline double bleu_corpus(const std::vector<std::string>& references,
                          const std::vector<std::string>& candidates,
                          const BleuConfig& config = {}) {
  config.validate();
  if (references.empty()) throw std::invalid_argument("bleu: empty corpus");
  const BleuStats st = bleu_stats(references, candidates, config.max_n);
  if (st.candidate_length == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < config.max_n; ++n) {
    const double p = st.precision(n);
    if (p == 0.0) return 0.0;
    log_sum += config.weights[n] * std::log(p);
  }
  return config.scale * st.brevity_penalty() * std::exp(log_sum);
}

// ---------------------------------------------------------------------------
// BERTScore

using Vector = std::vector<double>;

/// Maps a token sequence to one fixed-dimension vector per token.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<Vector> embed(const std::vector<std::string>& tokens) const = 0;
};

/// Counts of hashed character trigrams (FNV-1a into 64 buckets) over the
/// token wrapped in boundary markers, L2-normalized. Purely lexical; it
/// exercises the matching math and carries no semantics.
class HashedTrigramEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDimension = 64;

  std::string name() const override { return "hashed-trigram-64"; }
  std::size_t dimension() const override { return kDimension; }

  std::vector<Vector> embed(const std::vector<std::string>& tokens) const override {
    std::vector<Vector> out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) out.push_back(embed_token(tok));
    return out;
  }

  static Vector embed_token(std::string_view token) {
    const std::string padded = "\x02" + std::string(token) + "\x03";
    // The empty token has only the two markers; hash them as one short gram.
    const std::size_t gram = std::min<std::size_t>(3, padded.size());
    Vector v(kDimension, 0.0);
    for (std::size_t i = 0; i + gram <= padded.size(); ++i) {
      std::uint32_t h = 2166136261u;
      for (std::size_t k = 0; k < gram; ++k) {
        h ^= static_cast<std::uint8_t>(padded[i + k]);
        h *= 16777619u;
      }
      v[h % kDimension] += 1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  }
};

inline double cosine(const Vector& a, const Vector& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct BertScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t scored = 0;
  std::size_t skipped = 0;  // sentences with an empty side
};

inline double harmonic_mean(double p, double r) {
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

/// Greedy matching per sentence, then plain means over the scored
/// sentences. F1 is averaged per sentence, not recomputed from the means.
inline BertScore bertscore_corpus(const std::vector<std::string>& references,
                                  const std::vector<std::string>& candidates,
                                  const Embedder& embedder) {
  require_same_size(references.size(), candidates.size(), "bertscore");
  BertScore out;
  for (std::size_t s = 0; s < references.size(); ++s) {
    const auto ref_toks = tokenize_whitespace(references[s]);
    const auto cand_toks = tokenize_whitespace(candidates[s]);
    if (ref_toks.empty() || cand_toks.empty()) {
      ++out.skipped;
      continue;
    }
    const auto ref = embedder.embed(ref_toks);
    const auto cand = embedder.embed(cand_toks);

    std::vector<double> best_for_ref(ref.size(), 0.0);
    double precision = 0.0;
    for (const auto& c : cand) {
      double best = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const double sim = cosine(ref[i], c);
        best = std::max(best, sim);
        best_for_ref[i] = std::max(best_for_ref[i], sim);
      }
      precision += best;
    }
    precision /= static_cast<double>(cand.size());
    const double recall = std::accumulate(best_for_ref.begin(), best_for_ref.end(), 0.0) /
                          static_cast<double>(ref.size());

    out.precision += precision;
    out.recall += recall;
    out.f1 += harmonic_mean(precision, recall);
    ++out.scored;
  }
  if (out.scored > 0) {
    const auto n = static_cast<double>(out.scored);
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Character error rate

/// Decodes UTF-8; each invalid byte becomes U+FFFD.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : (b >> 3) == 0x1E ? 4 : 0;
    char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto c = static_cast<unsigned char>(s[i + k]);
      ok = (c & 0xC0) == 0x80;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(U'\uFFFD');
      ++i;
    }
  }
  return out;
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Total edit distance over total reference length, in code points. An
/// all-empty reference corpus scores 0 when there are no edits and
/// infinity otherwise.
inline double char_error_rate(const std::vector<std::string>& references,
                              const std::vector<std::string>& candidates) {
  require_same_size(references.size(), candidates.size(), "cer");
  std::uint64_t edits = 0;
  std::uint64_t length = 0;
  for (std::size_t s = 0; s < references.size(); ++s) {
    const auto ref = decode_utf8(references[s]);
    edits += levenshtein(ref, decode_utf8(candidates[s]));
    length += ref.size();
  }
  if (length == 0) return edits == 0 ? 0.0 : HUGE_VAL;
  return static_cast<double>(edits) / static_cast<double>(length);
}

// ---------------------------------------------------------------------------

struct EvalReport {
  double bleu = 0.0;
  double bert_precision = 0.0;
  double bert_recall = 0.0;
  double bert_f1 = 0.0;
  double cer = 0.0;
  std::size_t sentence_count = 0;
  std::size_t bert_skipped = 0;
};

inline EvalReport evaluate(const std::vector<std::string>& references,
                           const std::vector<std::string>& candidates,
                           const Embedder& embedder, const BleuConfig& config = {}) {
  EvalReport r;
  r.bleu = bleu_corpus(references, candidates, config);
  const BertScore bs = bertscore_corpus(references, candidates, embedder);
  r.bert_precision = bs.precision;
  r.bert_recall = bs.recall;
  r.bert_f1 = bs.f1;
  r.bert_skipped = bs.skipped;
  r.cer = char_error_rate(references, candidates);
  r.sentence_count = references.size();
  return r;
}

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

/// `metric,value` CSV with 4-decimal values (counts are printed as
/// integers).
inline std::string render_eval_report(const EvalReport& r) {
  std::ostringstream out;
  out << "metric,value\n"
      << "bleu," << fixed4(r.bleu) << '\n'
      << "bert_precision," << fixed4(r.bert_precision) << '\n'
      << "bert_recall," << fixed4(r.bert_recall) << '\n'
      << "bert_f1," << fixed4(r.bert_f1) << '\n'
      << "cer," << fixed4(r.cer) << '\n'
      << "sentence_count," << r.sentence_count << '\n'
      << "bert_skipped," << r.bert_skipped << '\n';
  return out.str();
}

}  // namespace vowelzip
