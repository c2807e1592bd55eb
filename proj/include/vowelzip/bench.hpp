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

// Compressor registry and compression-ratio measurement.
//
// A ratio is always original length / compressed length, where the
// original length is taken BEFORE devowelling. Devowel mode is therefore
// credited for the bytes the lossy transform removed.
//
// Report columns (CSV and markdown share them):
//
//   corpus             corpus identifier
//   compressor         CompressorSpec::name
//   mode               raw | devowel
//   original_bytes     UTF-8 bytes of the untransformed corpus
//   original_chars     Unicode scalar values of the untransformed corpus
//   compressed_bytes   compressor output size (LZW: full LZW1 container)
//   compressed_symbols LZW code count; empty for other compressors
//   ratio_bytes        original_bytes / compressed_bytes
//   ratio_symbols      original_chars / compressed_symbols; empty if n/a

#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "vowelzip/arith.hpp"
#include "vowelzip/bytes.hpp"
#include "vowelzip/corpus.hpp"
#include "vowelzip/lzw.hpp"

namespace vowelzip {

class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CompressorKind { kBuiltinLzw, kBuiltinAc, kExternal };

enum class Mode { kRaw, kDevowel };

inline std::string_view to_string(Mode mode) {
  return mode == Mode::kRaw ? "raw" : "devowel";
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  if (s == "raw") return Mode::kRaw;
  if (s == "devowel") return Mode::kDevowel;
  return std::nullopt;
}

/// An external compressor is a shell command template; `{in}` and `{out}`
/// are replaced by quoted file paths. An optional decompression template
/// lets the harness verify losslessness for external tools too.
struct CompressorSpec {
  std::string name;
  CompressorKind kind = CompressorKind::kBuiltinLzw;
  std::optional<std::string> external_command;
  std::optional<std::string> external_decompress_command;

  static CompressorSpec builtin_lzw() { return {"lzw", CompressorKind::kBuiltinLzw, {}, {}}; }
  static CompressorSpec builtin_ac() { return {"ac", CompressorKind::kBuiltinAc, {}, {}}; }
  static CompressorSpec external(std::string name, std::string command,
                                 std::optional<std::string> decompress = {}) {
    return {std::move(name), CompressorKind::kExternal, std::move(command),
            std::move(decompress)};
  }

  void validate() const {
    if (name.empty()) throw std::invalid_argument("compressor name is empty");
    if (kind == CompressorKind::kExternal) {
      if (!external_command) {
        throw std::invalid_argument("compressor '" + name +
                                    "': external kind needs a command template");
      }
      for (const auto* tmpl : {&*external_command,
                               external_decompress_command ? &*external_decompress_command
                                                           : nullptr}) {
        if (tmpl && (tmpl->find("{in}") == std::string::npos ||
                     tmpl->find("{out}") == std::string::npos)) {
          throw std::invalid_argument("compressor '" + name + "': template '" + *tmpl +
                                      "' must contain {in} and {out}");
        }
      }
    } else if (external_command || external_decompress_command) {
      throw std::invalid_argument("compressor '" + name +
                                  "': builtin kinds take no command template");
    }
  }
};

/// Templates for the off-the-shelf baselines, relying on gzip, xz and
/// python3 being on PATH.
inline std::optional<CompressorSpec> known_external(std::string_view name) {
  if (name == "gzip") {
    return CompressorSpec::external("gzip", "gzip -9 -n -c {in} > {out}",
                                    "gzip -d -c {in} > {out}");
  }
  if (name == "lzma") {
    return CompressorSpec::external("lzma", "xz --format=lzma -9 -c {in} > {out}",
                                    "xz --format=lzma -d -c {in} > {out}");
  }
  if (name == "zlib") {
    return CompressorSpec::external(
        "zlib",
        "python3 -c \"import sys,zlib;open(sys.argv[2],'wb').write(zlib.compress("
        "open(sys.argv[1],'rb').read(),9))\" {in} {out}",
        "python3 -c \"import sys,zlib;open(sys.argv[2],'wb').write(zlib.decompress("
        "open(sys.argv[1],'rb').read()))\" {in} {out}");
  }
  return std::nullopt;
}

struct MeasureOptions {
  /// Count LZW symbols with an unbounded string table.
  bool paper_mode = false;
  /// Compress each LF-separated line as its own stream and sum the sizes.
  bool per_sentence = false;
};

struct CompressionReport {
  std::string corpus_id;
  std::string compressor;
  Mode mode = Mode::kRaw;
  std::uint64_t original_bytes = 0;
  std::uint64_t original_chars = 0;
  std::uint64_t transformed_bytes = 0;  // bytes actually fed to the compressor
  std::uint64_t compressed_bytes = 0;
  std::optional<std::uint64_t> compressed_symbols;
  double ratio_bytes = 0.0;
  std::optional<double> ratio_symbols;
};

inline double compression_ratio(std::uint64_t original_length,
                                std::uint64_t compressed_length) {
  if (compressed_length == 0) {
    throw std::domain_error("compression ratio: compressed length is 0");
  }
  return static_cast<double>(original_length) / static_cast<double>(compressed_length);
}

namespace detail {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate = base / ("vowelzip-" + std::to_string(::getpid()) + "-" +
                               std::to_string(rd()));
      if (std::filesystem::create_directory(candidate)) {
        path_ = std::move(candidate);
        return;
      }
    }
    throw MeasurementError("cannot create a temporary directory in " + base.string());
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

inline std::string substitute(std::string tmpl, std::string_view key,
                              const std::string& value) {
  for (std::size_t pos = tmpl.find(key); pos != std::string::npos;
       pos = tmpl.find(key, pos + value.size())) {
    tmpl.replace(pos, key.size(), value);
  }
  return tmpl;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void dump(const std::filesystem::path& p, std::string_view data) {
  std::ofstream out(p, std::ios::binary);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw MeasurementError("cannot write " + p.string());
}

/// Runs `tmpl` with {in}/{out} bound to the given files; returns the output
/// file's contents. Non-zero exit or empty output is an error that carries
/// the command's stderr.
inline std::string run_external(const std::string& name, const std::string& tmpl,
                                const std::filesystem::path& in,
                                const std::filesystem::path& out,
                                const std::filesystem::path& err) {
  std::string cmd = substitute(tmpl, "{in}", shell_quote(in.string()));
  cmd = substitute(cmd, "{out}", shell_quote(out.string()));
  cmd = "( " + cmd + " ) 2> " + shell_quote(err.string());
  const int status = std::system(cmd.c_str());
  const int code = status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : 128);
  if (code != 0) {
    throw MeasurementError("compressor '" + name + "': command `" + tmpl +
                           "` exited with status " + std::to_string(code) +
                           ": " + slurp(err));
  }
  std::string result = slurp(out);
  if (result.empty()) {
    throw MeasurementError("compressor '" + name + "': command `" + tmpl +
                           "` produced no output: " + slurp(err));
  }
  return result;
}

struct StreamSize {
  std::uint64_t bytes = 0;
  std::optional<std::uint64_t> symbols;
};

inline StreamSize compress_verified(const CompressorSpec& spec, std::string_view text,
                                    const MeasureOptions& options) {
  const ByteView data = as_bytes(text);
  switch (spec.kind) {
    case CompressorKind::kBuiltinLzw: {
      const CodeStream stream = lzw_compress(data);
      const Bytes packed = pack_container(stream, data.size());
      const LzwContainer back = unpack_container(packed);
      if (!std::ranges::equal(lzw_decompress(back.stream), data)) {
        throw MeasurementError("lzw: roundtrip mismatch");
      }
      StreamSize size{packed.size(), stream.codes.size()};
      if (options.paper_mode) {
        const LzwOptions unbounded{.unbounded_table = true};
        const CodeStream wide = lzw_compress(data, unbounded);
        if (!std::ranges::equal(lzw_decompress(wide, unbounded), data)) {
          throw MeasurementError("lzw (unbounded table): roundtrip mismatch");
        }
        size.symbols = wide.codes.size();
      }
      return size;
    }
    case CompressorKind::kBuiltinAc: {
      const Bytes packed = ac_compress(data);
      if (!std::ranges::equal(ac_decompress(packed), data)) {
        throw MeasurementError("ac: roundtrip mismatch");
      }
      return {packed.size(), std::nullopt};
    }
    case CompressorKind::kExternal: {
      TempDir dir;
      const auto in = dir.path() / "input";
      const auto out = dir.path() / "output";
      const auto err = dir.path() / "stderr";
      dump(in, text);
      const std::string packed = run_external(spec.name, *spec.external_command, in, out, err);
      if (spec.external_decompress_command) {
        const auto back = dir.path() / "roundtrip";
        if (run_external(spec.name, *spec.external_decompress_command, out, back, err) !=
            text) {
          throw MeasurementError("compressor '" + spec.name + "': roundtrip mismatch");
        }
      }
      return {packed.size(), std::nullopt};
    }
  }
  throw std::logic_error("unknown compressor kind");
}

}  // namespace detail

/// Measures one (compressor, mode) cell. The whole corpus is one stream
/// unless options.per_sentence is set. Every builtin result is decoded and
/// compared with its input before the report is produced.
inline CompressionReport measure(const CompressorSpec& spec, std::string_view corpus_text,
                                 Mode mode, const MeasureOptions& options = {},
                                 std::string corpus_id = "corpus") {
  spec.validate();
  if (corpus_text.empty()) throw MeasurementError("measure: corpus is empty");

  CompressionReport r;
  r.corpus_id = std::move(corpus_id);
  r.compressor = spec.name;
  r.mode = mode;
  r.original_bytes = corpus_text.size();
  r.original_chars = utf8_length(corpus_text);

  const std::string text =
      mode == Mode::kDevowel ? remove_vowels(corpus_text) : std::string(corpus_text);
  r.transformed_bytes = text.size();

  detail::StreamSize total;
  if (options.per_sentence) {
    std::size_t begin = 0;
    while (begin <= text.size()) {
      std::size_t end = text.find('\n', begin);
      if (end == std::string::npos) end = text.size();
      const std::string_view line(text.data() + begin, end - begin);
      if (!line.empty()) {
        const auto s = detail::compress_verified(spec, line, options);
        total.bytes += s.bytes;
        if (s.symbols) total.symbols = total.symbols.value_or(0) + *s.symbols;
      }
      begin = end + 1;
    }
  } else if (!text.empty()) {
    total = detail::compress_verified(spec, text, options);
  }

  if (total.bytes == 0) {
    throw MeasurementError("measure: '" + spec.name + "' produced no compressed data");
  }
  r.compressed_bytes = total.bytes;
  r.ratio_bytes = compression_ratio(r.original_bytes, r.compressed_bytes);
  if (total.symbols && *total.symbols > 0) {
    r.compressed_symbols = total.symbols;
    r.ratio_symbols = compression_ratio(r.original_chars, *total.symbols);
  }
  return r;
}

/// Measures every (compressor, mode) cell concurrently. The result order is
/// the order of `specs` x `modes`, independent of completion order.
inline std::vector<CompressionReport> measure_all(const std::vector<CompressorSpec>& specs,
                                                  std::string_view corpus_text,
                                                  const std::vector<Mode>& modes,
                                                  const MeasureOptions& options = {},
                                                  const std::string& corpus_id = "corpus") {
  std::vector<std::future<CompressionReport>> cells;
  for (const auto& spec : specs) {
    for (Mode mode : modes) {
      cells.push_back(std::async(std::launch::async, [&, mode] {
        return measure(spec, corpus_text, mode, options, corpus_id);
      }));
    }
  }
  std::vector<CompressionReport> reports;
  reports.reserve(cells.size());
  for (auto& cell : cells) reports.push_back(cell.get());
  return reports;
}

enum class ReportFormat { kCsv, kMarkdown };

namespace detail {

inline std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Rows are sorted by corpus, compressor name, then mode (raw first).
inline std::string render_report(std::vector<CompressionReport> reports, ReportFormat format) {
  std::ranges::stable_sort(reports, [](const auto& a, const auto& b) {
    return std::tie(a.corpus_id, a.compressor, a.mode) <
           std::tie(b.corpus_id, b.compressor, b.mode);
  });

  static constexpr std::array<std::string_view, 9> kColumns = {
      "corpus",         "compressor",       "mode",
      "original_bytes", "original_chars",   "compressed_bytes",
      "compressed_symbols", "ratio_bytes",  "ratio_symbols"};

  std::ostringstream out;
  const auto emit_row = [&](const std::vector<std::string>& cells) {
    if (format == ReportFormat::kCsv) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "," : "") << detail::csv_field(cells[i]);
      }
    } else {
      out << '|';
      for (const auto& c : cells) out << ' ' << c << " |";
    }
    out << '\n';
  };

  emit_row({kColumns.begin(), kColumns.end()});
  if (format == ReportFormat::kMarkdown) {
    out << '|';
    for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i < 3 ? " --- |" : " ---: |");
    out << '\n';
  }
  for (const auto& r : reports) {
    emit_row({r.corpus_id, r.compressor, std::string(to_string(r.mode)),
              std::to_string(r.original_bytes), std::to_string(r.original_chars),
              std::to_string(r.compressed_bytes),
              r.compressed_symbols ? std::to_string(*r.compressed_symbols) : "",
              detail::fixed3(r.ratio_bytes),
              r.ratio_symbols ? detail::fixed3(*r.ratio_symbols) : ""});
  }
  return out.str();
}

}  // namespace vowelzip
