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

#include "vowelzip/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>

#include "support/english_text.hpp"

namespace vowelzip {
namespace {

/// Looks tokens up in a fixed table; unknown tokens embed to zero.
class TableEmbedder final : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, Vector> table, std::size_t dim)
      : table_(std::move(table)), dim_(dim) {}

  std::string name() const override { return "table"; }
  std::size_t dimension() const override { return dim_; }
  std::vector<Vector> embed(const std::vector<std::string>& tokens) const override {
    std::vector<Vector> out;
    for (const auto& t : tokens) {
      auto it = table_.find(t);
      out.push_back(it == table_.end() ? Vector(dim_, 0.0) : it->second);
    }
    return out;
  }

 private:
  std::map<std::string, Vector> table_;
  std::size_t dim_;
};

// Brute-force corpus BLEU: n-grams as token vectors, clipping by explicit
// counting loops.
double brute_force_bleu(const std::vector<std::string>& refs,
                        const std::vector<std::string>& cands) {
  std::vector<double> match(4, 0), total(4, 0);
  double c = 0, r = 0;
  for (std::size_t s = 0; s < refs.size(); ++s) {
    const auto ref = tokenize_whitespace(refs[s]);
    const auto cand = tokenize_whitespace(cands[s]);
    c += static_cast<double>(cand.size());
    r += static_cast<double>(ref.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto grams = [n](const std::vector<std::string>& t) {
        std::vector<std::vector<std::string>> g;
        for (std::size_t i = 0; i + n <= t.size(); ++i) g.emplace_back(t.begin() + i, t.begin() + i + n);
        return g;
      };
      const auto cg = grams(cand);
      const auto rg = grams(ref);
      std::vector<bool> done(cg.size(), false);
      for (std::size_t i = 0; i < cg.size(); ++i) {
        if (done[i]) continue;
        double in_cand = 0, in_ref = 0;
        for (std::size_t j = i; j < cg.size(); ++j) {
          if (cg[j] == cg[i]) {
            ++in_cand;
            done[j] = true;
          }
        }
        for (const auto& g : rg) in_ref += g == cg[i];
        match[n - 1] += std::min(in_cand, in_ref);
        total[n - 1] += in_cand;
      }
    }
  }
  if (c == 0) return 0;
  double log_sum = 0;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0 || match[n] == 0) return 0;
    log_sum += 0.25 * std::log(match[n] / total[n]);
  }
  const double bp = c > r ? 1.0 : std::exp(1 - r / c);
  return 100 * bp * std::exp(log_sum);
}

TEST(TokenizeTest, WhitespaceRuns) {
  EXPECT_EQ(tokenize_whitespace("  The  cat\tsat\n"),
            (std::vector<std::string>{"The", "cat", "sat"}));
  EXPECT_TRUE(tokenize_whitespace(" \t ").empty());
}

TEST(BleuTest, HandDerivedExample) {
  // p = (5/5, 3/4, 2/3, 1/2); geometric mean 0.25^(1/4); BP = e^(1 - 6/5).
  const double hand = 100.0 * std::exp(1.0 - 6.0 / 5.0) * std::pow(0.25, 0.25);
  EXPECT_NEAR(hand, 57.89, 0.01);
  const double score = bleu_corpus({"the cat sat on the mat"}, {"the cat sat on mat"});
  EXPECT_NEAR(score, hand, 1e-9);

  const auto st = bleu_stats({"the cat sat on the mat"}, {"the cat sat on mat"});
  EXPECT_EQ(st.matches, (std::vector<std::uint64_t>{5, 3, 2, 1}));
  EXPECT_EQ(st.totals, (std::vector<std::uint64_t>{5, 4, 3, 2}));
}

TEST(BleuTest, PerfectAndDisjoint) {
  const std::vector<std::string> corpus = {"a b c d e", "one two three four"};
  EXPECT_DOUBLE_EQ(bleu_corpus(corpus, corpus), 100.0);
  EXPECT_DOUBLE_EQ(bleu_corpus({"a b c d"}, {"x y z w"}), 0.0);
}

TEST(BleuTest, EdgeCases) {
  EXPECT_DOUBLE_EQ(bleu_corpus({"a b c d"}, {""}), 0.0);
  EXPECT_DOUBLE_EQ(bleu_corpus({"a b c"}, {"a b c"}), 0.0);  // no 4-grams at all
  EXPECT_THROW(bleu_corpus({"a"}, {"a", "b"}), std::invalid_argument);
  EXPECT_THROW(bleu_corpus({}, {}), std::invalid_argument);
  EXPECT_THROW(bleu_corpus({"a"}, {"a"}, {.max_n = 2, .weights = {0.5, 0.6}}),
               std::invalid_argument);
  // Clipping: a candidate repeating a reference word gets credit once.
  const auto st = bleu_stats({"the cat"}, {"the the the"}, 1);
  EXPECT_EQ(st.matches[0], 1u);
  EXPECT_EQ(st.totals[0], 3u);
}

TEST(BleuTest, CaseSensitive) {
  const std::vector<std::string> ref = {"The cat sat on the mat"};
  EXPECT_LT(bleu_corpus(ref, {"the cat sat on the mat"}), 100.0);
}

TEST(BleuTest, MatchesBruteForceOracle) {
  testing::EnglishTextGenerator gen(1);
  testing::SplitMix64 rng(2);
  for (int iter = 0; iter < 40; ++iter) {
    auto refs = gen.sentences(1 + rng.below(20));
    std::vector<std::string> cands;
    for (const auto& r : refs) {
      // Perturb: drop or duplicate some tokens.
      std::string c;
      for (const auto& t : tokenize_whitespace(r)) {
        const auto u = rng.below(10);
        if (u == 0) continue;
        c += t + ' ';
        if (u == 1) c += t + ' ';
      }
      cands.push_back(c);
    }
    ASSERT_NEAR(bleu_corpus(refs, cands), brute_force_bleu(refs, cands), 1e-9);
  }
}

TEST(BleuTest, Properties) {
  testing::EnglishTextGenerator gen(3);
  testing::SplitMix64 rng(4);
  auto refs = gen.sentences(30);
  auto cands = gen.sentences(30);
  for (std::size_t i = 0; i < 30; i += 2) cands[i] = refs[i];
  const double base = bleu_corpus(refs, cands);
  EXPECT_GE(base, 0.0);
  EXPECT_LE(base, 100.0);

  // Same permutation of both sides.
  for (std::size_t i = refs.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(refs[i - 1], refs[j]);
    std::swap(cands[i - 1], cands[j]);
  }
  EXPECT_NEAR(bleu_corpus(refs, cands), base, 1e-9);

  // Brevity penalty never increases as candidates shrink below reference
  // length.
  std::vector<std::string> shorter = refs;
  double last_bp = 2.0;
  for (int round = 0; round < 5; ++round) {
    for (auto& s : shorter) {
      auto toks = tokenize_whitespace(s);
      if (toks.size() > 1) toks.pop_back();
      s.clear();
      for (const auto& t : toks) s += t + ' ';
    }
    const double bp = bleu_stats(refs, shorter).brevity_penalty();
    EXPECT_LE(bp, last_bp);
    EXPECT_LE(bp, 1.0);
    last_bp = bp;
  }
}

TEST(BertScoreTest, HandDerivedGreedyMatch) {
  const TableEmbedder emb({{"x", {1, 0}}, {"y", {0, 1}}}, 2);
  const auto s = bertscore_corpus({"x"}, {"x y"}, emb);
  EXPECT_NEAR(s.precision, 0.5, 1e-12);
  EXPECT_NEAR(s.recall, 1.0, 1e-12);
  EXPECT_NEAR(s.f1, 2 * 0.5 * 1.0 / 1.5, 1e-12);
  EXPECT_NEAR(s.f1, 0.6667, 1e-4);
}

TEST(BertScoreTest, IdenticalAndOrthogonal) {
  const HashedTrigramEmbedder trigram;
  const auto same = bertscore_corpus({"the old man left"}, {"the old man left"}, trigram);
  EXPECT_NEAR(same.precision, 1.0, 1e-12);
  EXPECT_NEAR(same.recall, 1.0, 1e-12);
  EXPECT_NEAR(same.f1, 1.0, 1e-12);

  const TableEmbedder emb({{"x", {1, 0}}, {"y", {0, 1}}}, 2);
  const auto orth = bertscore_corpus({"x"}, {"y"}, emb);
  EXPECT_EQ(orth.precision, 0.0);
  EXPECT_EQ(orth.recall, 0.0);
  EXPECT_EQ(orth.f1, 0.0);
}

TEST(BertScoreTest, F1IsPerSentenceMean) {
  const TableEmbedder emb({{"x", {1, 0}}, {"y", {0, 1}}}, 2);
  // Sentence 1: P=0.5 R=1 F=2/3. Sentence 2: P=1 R=1 F=1.
  const auto s = bertscore_corpus({"x", "y"}, {"x y", "y"}, emb);
  EXPECT_NEAR(s.precision, 0.75, 1e-12);
  EXPECT_NEAR(s.recall, 1.0, 1e-12);
  EXPECT_NEAR(s.f1, (2.0 / 3.0 + 1.0) / 2.0, 1e-12);
  EXPECT_EQ(s.scored, 2u);
}

TEST(BertScoreTest, EmptySentencesAreSkipped) {
  const HashedTrigramEmbedder emb;
  const auto s = bertscore_corpus({"a b", "", "c"}, {"a b", "x", ""}, emb);
  EXPECT_EQ(s.skipped, 2u);
  EXPECT_EQ(s.scored, 1u);
  EXPECT_NEAR(s.f1, 1.0, 1e-12);
  EXPECT_THROW(bertscore_corpus({"a"}, {}, emb), std::invalid_argument);
}

TEST(BertScoreTest, PrecisionRecallSwap) {
  testing::EnglishTextGenerator gen(5);
  const HashedTrigramEmbedder emb;
  const auto refs = gen.sentences(100);
  const auto cands = gen.sentences(100);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto fwd = bertscore_corpus({refs[i]}, {cands[i]}, emb);
    const auto back = bertscore_corpus({cands[i]}, {refs[i]}, emb);
    ASSERT_NEAR(fwd.precision, back.recall, 1e-12);
    ASSERT_NEAR(fwd.recall, back.precision, 1e-12);
  }
}

TEST(HashedTrigramEmbedderTest, UnitNonNegativeDeterministic) {
  const HashedTrigramEmbedder emb;
  EXPECT_EQ(emb.dimension(), 64u);
  const auto v = emb.embed({"hello", "a", "", "caf\xC3\xA9"});
  ASSERT_EQ(v.size(), 4u);
  for (const auto& x : v) {
    ASSERT_EQ(x.size(), 64u);
    double norm = 0;
    for (double c : x) {
      EXPECT_GE(c, 0.0);
      EXPECT_TRUE(std::isfinite(c));
      norm += c * c;
    }
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
  EXPECT_EQ(emb.embed({"hello"})[0], v[0]);
  EXPECT_LT(cosine(v[0], HashedTrigramEmbedder::embed_token("help")), 1.0);
}

TEST(CharErrorRateTest, Examples) {
  EXPECT_DOUBLE_EQ(char_error_rate({"abc"}, {"abc"}), 0.0);
  EXPECT_DOUBLE_EQ(char_error_rate({"abc"}, {"ab"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(char_error_rate({"abc"}, {"abd"}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(char_error_rate({"caf\xC3\xA9"}, {"cafe"}), 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(char_error_rate({"ab", "cd"}, {"ab", "c"}), 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(char_error_rate({""}, {""}), 0.0);
  EXPECT_TRUE(std::isinf(char_error_rate({""}, {"x"})));
  EXPECT_THROW(char_error_rate({"a"}, {}), std::invalid_argument);
}

TEST(CharErrorRateTest, LevenshteinMatchesRecursiveOracle) {
  testing::SplitMix64 rng(6);
  const auto random_word = [&] {
    std::u32string s;
    for (std::size_t i = rng.below(7); i > 0; --i) s.push_back(U'a' + static_cast<char32_t>(rng.below(3)));
    return s;
  };
  std::function<std::size_t(std::u32string_view, std::u32string_view)> oracle =
      [&](std::u32string_view a, std::u32string_view b) -> std::size_t {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    const std::size_t sub = oracle(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
    return std::min({sub, oracle(a.substr(1), b) + 1, oracle(a, b.substr(1)) + 1});
  };
  for (int iter = 0; iter < 300; ++iter) {
    const auto a = random_word();
    const auto b = random_word();
    const auto c = random_word();
    ASSERT_EQ(levenshtein(a, b), oracle(a, b));
    ASSERT_EQ(levenshtein(a, a), 0u);
    ASSERT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST(Utf8DecodeTest, InvalidBytesBecomeReplacement) {
  EXPECT_EQ(decode_utf8("a\xC3\xA9"), U"aé");
  EXPECT_EQ(decode_utf8("\xFF" "a"), U"\uFFFD" "a");
  EXPECT_EQ(decode_utf8("\xC3"), U"\uFFFD");
}

TEST(EvalReportTest, Render) {
  const auto r = evaluate({"the cat sat on the mat"}, {"the cat sat on mat"}, HashedTrigramEmbedder{});
  EXPECT_EQ(r.sentence_count, 1u);
  const std::string csv = render_eval_report(r);
  EXPECT_EQ(csv.rfind("metric,value\nbleu,57.8930\n", 0), 0u) << csv;
  EXPECT_NE(csv.find("cer,0.1818\n"), std::string::npos) << csv;  // 4 deletions / 22 chars
}

}  // namespace
}  // namespace vowelzip
