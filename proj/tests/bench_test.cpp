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

#include "vowelzip/bench.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

#include "support/english_text.hpp"

namespace vowelzip {
namespace {

bool have_command(const std::string& name) {
  return std::system(("command -v " + name + " > /dev/null 2>&1").c_str()) == 0;
}

TEST(CompressionRatioTest, Quotient) {
  EXPECT_DOUBLE_EQ(compression_ratio(100, 25), 4.0);
  EXPECT_DOUBLE_EQ(compression_ratio(13, 13), 1.0);
  EXPECT_THROW(compression_ratio(5, 0), std::domain_error);
}

TEST(CompressorSpecTest, Validation) {
  EXPECT_NO_THROW(CompressorSpec::builtin_lzw().validate());
  EXPECT_NO_THROW(CompressorSpec::external("cat", "cat {in} > {out}").validate());
  EXPECT_THROW((CompressorSpec{"x", CompressorKind::kExternal, {}, {}}).validate(),
               std::invalid_argument);
  EXPECT_THROW((CompressorSpec{"x", CompressorKind::kBuiltinAc, "cat {in}", {}}).validate(),
               std::invalid_argument);
  EXPECT_THROW(CompressorSpec::external("x", "cat {in}").validate(), std::invalid_argument);
}

TEST(MeasureTest, LzwSymbolCount) {
  const auto r = measure(CompressorSpec::builtin_lzw(), "AAA", Mode::kRaw);
  EXPECT_EQ(r.original_bytes, 3u);
  EXPECT_EQ(r.original_chars, 3u);
  ASSERT_TRUE(r.compressed_symbols.has_value());
  EXPECT_EQ(*r.compressed_symbols, 2u);
  ASSERT_TRUE(r.ratio_symbols.has_value());
  EXPECT_DOUBLE_EQ(*r.ratio_symbols, 1.5);
  EXPECT_EQ(r.compressed_bytes, 15u);  // 12-byte header + two 9-bit codes
  EXPECT_DOUBLE_EQ(r.ratio_bytes, 3.0 / 15.0);
}

TEST(MeasureTest, DevowelUsesPreTransformLength) {
  const auto r = measure(CompressorSpec::builtin_lzw(), "Hello", Mode::kDevowel);
  EXPECT_EQ(r.original_bytes, 5u);
  EXPECT_EQ(r.transformed_bytes, 3u);
  EXPECT_EQ(*r.compressed_symbols, 3u);  // "Hll" has no repeats
  EXPECT_DOUBLE_EQ(*r.ratio_symbols, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.ratio_bytes, 5.0 / static_cast<double>(r.compressed_bytes));
}

TEST(MeasureTest, AcHasNoSymbolCount) {
  const auto r = measure(CompressorSpec::builtin_ac(), "banana", Mode::kRaw, {}, "fruit");
  EXPECT_EQ(r.compressor, "ac");
  EXPECT_EQ(r.corpus_id, "fruit");
  EXPECT_EQ(r.compressed_bytes, 6u);
  EXPECT_FALSE(r.compressed_symbols.has_value());
  EXPECT_FALSE(r.ratio_symbols.has_value());
}

TEST(MeasureTest, EmptyCorpusRejected) {
  EXPECT_THROW(measure(CompressorSpec::builtin_lzw(), "", Mode::kRaw), MeasurementError);
}

TEST(MeasureTest, AllVowelCorpusHasNothingToCompress) {
  EXPECT_THROW(measure(CompressorSpec::builtin_ac(), "aeiou", Mode::kDevowel), MeasurementError);
}

TEST(MeasureTest, PerSentenceSumsStreams) {
  const std::string text = "AAA\nABABABA";
  const auto r = measure(CompressorSpec::builtin_lzw(), text, Mode::kRaw, {.per_sentence = true});
  EXPECT_EQ(*r.compressed_symbols, 2u + 4u);
  EXPECT_EQ(r.compressed_bytes, 15u + 17u);  // 4 codes * 9 bits -> 5 bytes
  EXPECT_EQ(r.original_bytes, text.size());
}

TEST(MeasureTest, PaperModeNeverWorseThanFrozenTable) {
  testing::EnglishTextGenerator gen(1);
  const std::string text = gen.text(64 * 1024);
  const auto frozen = measure(CompressorSpec::builtin_lzw(), text, Mode::kRaw);
  const auto paper = measure(CompressorSpec::builtin_lzw(), text, Mode::kRaw, {.paper_mode = true});
  // 64 KiB never fills the table, so both count the same codes.
  EXPECT_EQ(*paper.compressed_symbols, *frozen.compressed_symbols);
  EXPECT_EQ(paper.compressed_bytes, frozen.compressed_bytes);
}

TEST(MeasureTest, PaperModeSymbolRatioGrowsWithPrefix) {
  testing::EnglishTextGenerator gen(2);
  const std::string text = gen.text(512 * 1024);
  double last = 0;
  for (std::size_t n : {32u * 1024, 128u * 1024, 512u * 1024}) {
    const auto r = measure(CompressorSpec::builtin_lzw(), std::string_view(text).substr(0, n),
                           Mode::kDevowel, {.paper_mode = true});
    EXPECT_GT(*r.ratio_symbols, last) << n;
    last = *r.ratio_symbols;
  }
}

TEST(MeasureTest, DevowelDominanceOnEnglish) {
  testing::EnglishTextGenerator gen(3);
  const std::string text = gen.text(64 * 1024);
  std::vector<CompressorSpec> specs = {CompressorSpec::builtin_lzw(), CompressorSpec::builtin_ac()};
  if (have_command("gzip")) specs.push_back(*known_external("gzip"));
  for (const auto& spec : specs) {
    const auto raw = measure(spec, text, Mode::kRaw);
    const auto dev = measure(spec, text, Mode::kDevowel);
    EXPECT_GT(dev.ratio_bytes, raw.ratio_bytes) << spec.name;
  }
}

TEST(MeasureTest, ExternalCompressor) {
  const auto spec = CompressorSpec::external("copy", "cat {in} > {out}", "cat {in} > {out}");
  const auto r = measure(spec, "hello world", Mode::kRaw);
  EXPECT_EQ(r.compressed_bytes, 11u);
  EXPECT_DOUBLE_EQ(r.ratio_bytes, 1.0);
  const auto d = measure(spec, "hello world", Mode::kDevowel);
  EXPECT_EQ(d.compressed_bytes, 8u);
}

TEST(MeasureTest, ExternalFailuresCarryDiagnostics) {
  try {
    measure(CompressorSpec::external("missing", "nonexistent-cmd-xyz {in} {out}"), "abc",
            Mode::kRaw);
    FAIL() << "expected MeasurementError";
  } catch (const MeasurementError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("missing"), std::string::npos);
    EXPECT_NE(msg.find("status"), std::string::npos);
  }
  EXPECT_THROW(measure(CompressorSpec::external("empty", ": {in} > {out}"), "abc", Mode::kRaw),
               MeasurementError);
  // Decompression that does not reproduce the input.
  EXPECT_THROW(measure(CompressorSpec::external("lossy", "cat {in} > {out}",
                                                "echo nope > {out}; : {in}"),
                       "abc", Mode::kRaw),
               MeasurementError);
}

TEST(MeasureTest, KnownExternals) {
  for (const char* name : {"gzip", "lzma", "zlib"}) {
    const auto spec = known_external(name);
    ASSERT_TRUE(spec.has_value()) << name;
    EXPECT_NO_THROW(spec->validate());
  }
  EXPECT_FALSE(known_external("zstd").has_value());
  if (!have_command("gzip")) GTEST_SKIP() << "gzip not on PATH";
  const auto r = measure(*known_external("gzip"), std::string(4000, 'x'), Mode::kRaw);
  EXPECT_GT(r.ratio_bytes, 50.0);
}

TEST(MeasureAllTest, CrossProductInDeclaredOrder) {
  const auto reports =
      measure_all({CompressorSpec::builtin_lzw(), CompressorSpec::builtin_ac()}, "some text here",
                  {Mode::kRaw, Mode::kDevowel});
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(reports[0].compressor, "lzw");
  EXPECT_EQ(reports[0].mode, Mode::kRaw);
  EXPECT_EQ(reports[1].mode, Mode::kDevowel);
  EXPECT_EQ(reports[2].compressor, "ac");
}

TEST(RenderReportTest, HeaderOnly) {
  EXPECT_EQ(render_report({}, ReportFormat::kCsv),
            "corpus,compressor,mode,original_bytes,original_chars,compressed_bytes,"
            "compressed_symbols,ratio_bytes,ratio_symbols\n");
}

TEST(RenderReportTest, ThreeDecimals) {
  CompressionReport r;
  r.corpus_id = "c";
  r.compressor = "ac";
  r.original_bytes = 100;
  r.original_chars = 100;
  r.compressed_bytes = 25;
  r.ratio_bytes = 4.0;
  const std::string csv = render_report({r}, ReportFormat::kCsv);
  EXPECT_NE(csv.find("\nc,ac,raw,100,100,25,,4.000,\n"), std::string::npos) << csv;
}

TEST(RenderReportTest, DeterministicOrder) {
  CompressionReport raw;
  raw.corpus_id = "c";
  raw.compressor = "lzw";
  raw.ratio_bytes = 1;
  CompressionReport dev = raw;
  dev.mode = Mode::kDevowel;
  CompressionReport other = raw;
  other.compressor = "ac";
  const std::string csv = render_report({dev, raw, other}, ReportFormat::kCsv);
  const auto p_ac = csv.find("c,ac,raw");
  const auto p_raw = csv.find("c,lzw,raw");
  const auto p_dev = csv.find("c,lzw,devowel");
  ASSERT_NE(p_dev, std::string::npos);
  EXPECT_LT(p_ac, p_raw);
  EXPECT_LT(p_raw, p_dev);
}

TEST(RenderReportTest, Markdown) {
  const auto r = measure(CompressorSpec::builtin_lzw(), "AAA", Mode::kRaw);
  const std::string md = render_report({r}, ReportFormat::kMarkdown);
  EXPECT_EQ(md.rfind("| corpus | compressor | mode |", 0), 0u);
  EXPECT_NE(md.find("| corpus | lzw | raw | 3 | 3 | 15 | 2 | 0.200 | 1.500 |"), std::string::npos)
      << md;
}

}  // namespace
}  // namespace vowelzip
