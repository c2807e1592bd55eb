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

// `vowelzip` command line: prepare, bench, train-baseline, restore,
// evaluate and sweep.
//
// Exit status: 0 success, 1 input error (bad flag, unreadable or malformed
// file, failing external compressor), 2 internal error.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vowelzip/bench.hpp"
#include "vowelzip/corpus.hpp"
#include "vowelzip/metrics.hpp"
#include "vowelzip/restore.hpp"

namespace vowelzip::cli {

/// Input problems detected by the CLI itself (as opposed to the library).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::vector<std::size_t> parse_sizes(const std::string& s, const std::string& flag) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || item[0] == '-') {
      throw UsageError(flag + ": '" + item + "' is not a non-negative integer");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return in;
}

inline void write_file(const std::string& path, const std::string& contents) {
  auto out = open_output(path);
  out << contents;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

inline std::vector<SentencePair> load_pairs(const std::string& path,
                                            std::optional<std::size_t> limit) {
  auto pairs = read_pairs(path);
  if (limit && pairs.size() > *limit) pairs.resize(*limit);
  return pairs;
}

inline LookupRestorerModel load_model_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_model(in);
  } catch (const IngestError& e) {
    throw IngestError(path + ": " + e.what(), e.line());
  }
}

inline std::vector<RestorationRecord> restore_all(const LookupRestorerModel& model,
                                                  const std::vector<SentencePair>& pairs) {
  std::vector<RestorationRecord> records;
  records.reserve(pairs.size());
  for (const auto& p : pairs) {
    records.push_back({static_cast<std::int64_t>(p.id), p.source,
                       restore_sentence(model, p.source)});
  }
  return records;
}

}  // namespace detail

struct PrepareArgs {
  std::string input;
  std::string output;
  std::optional<std::size_t> column;
  std::optional<std::size_t> limit;
  std::string split;
};

inline void run_prepare(const PrepareArgs& a, std::ostream& out) {
  std::optional<SplitSpec> split;
  if (!a.split.empty()) {
    const auto sizes = detail::parse_sizes(a.split, "--split");
    if (sizes.size() != 3) throw UsageError("--split: expected TRAIN,VAL,TEST");
    split = SplitSpec{sizes[0], sizes[1], sizes[2]};
  }

  std::vector<std::string> lines = read_lines(a.input);
  if (a.column) {
    try {
      lines = extract_english_column(lines, *a.column);
    } catch (const IngestError& e) {
      throw IngestError(a.input + ": " + e.what(), e.line());
    }
  }
  if (a.limit && lines.size() > *a.limit) lines.resize(*a.limit);
  for (auto& l : lines) l = sanitize_field(l);

  const PairSet set = build_pairs(lines);
  if (split) {
    const CorpusSplit parts = split_corpus(set.pairs, *split);
    for (const auto& [suffix, part] :
         {std::pair{".train.tsv", &parts.train}, std::pair{".val.tsv", &parts.val},
          std::pair{".test.tsv", &parts.test}}) {
      auto f = detail::open_output(a.output + suffix);
      write_pairs(f, *part);
    }
  } else {
    auto f = detail::open_output(a.output);
    write_pairs(f, set.pairs);
  }
  out << "pairs=" << set.pairs.size() << " empty_sources=" << set.empty_sources << '\n';
}

struct BenchArgs {
  std::string pairs;
  std::string input;
  std::string codecs = "lzw,ac";
  std::string modes = "raw,devowel";
  std::string report;
  std::string format = "csv";
  std::vector<std::string> externals;
  std::string corpus_id;
  std::optional<std::size_t> limit;
  bool paper_mode = false;
  bool per_sentence = false;
};

inline void run_bench(const BenchArgs& a, std::ostream& out) {
  // Resolve everything before touching the corpus.
  std::vector<CompressorSpec> custom;
  for (const auto& e : a.externals) {
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--external: expected NAME=TEMPLATE, got '" + e + "'");
    }
    custom.push_back(CompressorSpec::external(e.substr(0, eq), e.substr(eq + 1)));
  }
  std::vector<CompressorSpec> specs;
  for (const auto& name : detail::split_list(a.codecs)) {
    auto it = std::ranges::find(custom, name, &CompressorSpec::name);
    if (it != custom.end()) {
      specs.push_back(*it);
    } else if (name == "lzw") {
      specs.push_back(CompressorSpec::builtin_lzw());
    } else if (name == "ac") {
      specs.push_back(CompressorSpec::builtin_ac());
    } else if (auto known = known_external(name)) {
      specs.push_back(*known);
    } else {
      throw UsageError("--codecs: unknown compressor '" + name + "'");
    }
    try {
      specs.back().validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--external: ") + e.what());
    }
  }
  if (specs.empty()) throw UsageError("--codecs: empty list");
  std::vector<Mode> modes;
  for (const auto& m : detail::split_list(a.modes)) {
    auto mode = parse_mode(m);
    if (!mode) throw UsageError("--modes: unknown mode '" + m + "' (raw|devowel)");
    modes.push_back(*mode);
  }
  if (modes.empty()) throw UsageError("--modes: empty list");
  ReportFormat format = ReportFormat::kCsv;
  if (a.format == "markdown") {
    format = ReportFormat::kMarkdown;
  } else if (a.format != "csv") {
    throw UsageError("--format: expected csv or markdown");
  }
  if (a.pairs.empty() == a.input.empty()) {
    throw UsageError("bench: give exactly one of --pairs or --input");
  }

  // The corpus is the original (target) text, one sentence per line.
  std::vector<std::string> sentences;
  std::string path = a.pairs.empty() ? a.input : a.pairs;
  if (!a.pairs.empty()) {
    for (auto& p : detail::load_pairs(a.pairs, a.limit)) sentences.push_back(std::move(p.target));
  } else {
    sentences = read_lines(a.input);
    if (a.limit && sentences.size() > *a.limit) sentences.resize(*a.limit);
  }
  std::string text;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) text += '\n';
    text += sentences[i];
  }
  if (text.empty()) throw UsageError(path + ": corpus is empty");

  const std::string corpus_id =
      a.corpus_id.empty() ? std::filesystem::path(path).stem().string() : a.corpus_id;
  const MeasureOptions options{.paper_mode = a.paper_mode, .per_sentence = a.per_sentence};
  const auto reports = measure_all(specs, text, modes, options, corpus_id);
  const std::string rendered = render_report(reports, format);
  if (a.report.empty()) {
    out << rendered;
  } else {
    detail::write_file(a.report, rendered);
  }
}

struct TrainArgs {
  std::string pairs;
  std::string model;
  std::optional<std::size_t> limit;
};

inline void run_train(const TrainArgs& a, std::ostream& out) {
  const auto pairs = detail::load_pairs(a.pairs, a.limit);
  const auto model = train_lookup_restorer(pairs);
  auto f = detail::open_output(a.model);
  save_model(f, model);
  out << "trained_pairs=" << model.trained_pairs << " keys=" << model.table.size() << '\n';
}

struct RestoreArgs {
  std::string model;
  std::string pairs;
  std::string sources;
  std::string output;
  std::optional<std::size_t> limit;
};

inline void run_restore(const RestoreArgs& a, std::ostream& out) {
  if (a.pairs.empty() == a.sources.empty()) {
    throw UsageError("restore: give exactly one of --pairs or --sources");
  }
  const auto model = detail::load_model_file(a.model);
  std::vector<SentencePair> inputs;
  if (!a.pairs.empty()) {
    inputs = detail::load_pairs(a.pairs, a.limit);
  } else {
    auto lines = read_lines(a.sources);
    if (a.limit && lines.size() > *a.limit) lines.resize(*a.limit);
    for (std::size_t i = 0; i < lines.size(); ++i) inputs.push_back({i, lines[i], {}});
  }
  const auto records = detail::restore_all(model, inputs);
  auto f = detail::open_output(a.output);
  write_predictions(f, records);
  out << "restored=" << records.size() << '\n';
}

struct EvaluateArgs {
  std::string pairs;
  std::string predictions;
  std::string report;
};

inline EvalReport evaluate_predictions(const std::vector<SentencePair>& pairs,
                                       const std::vector<RestorationRecord>& records,
                                       const std::string& predictions_path) {
  std::vector<std::string> refs;
  std::vector<std::string> cands;
  for (const auto& r : records) {
    if (r.id < 0 || static_cast<std::uint64_t>(r.id) >= pairs.size()) {
      throw IngestError(predictions_path + ": id " + std::to_string(r.id) +
                            " has no matching pair (" + std::to_string(pairs.size()) +
                            " pairs)",
                        0);
    }
    refs.push_back(pairs[static_cast<std::size_t>(r.id)].target);
    cands.push_back(r.prediction);
  }
  if (refs.empty()) throw UsageError(predictions_path + ": no predictions");
  return evaluate(refs, cands, HashedTrigramEmbedder{});
}

inline void run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto pairs = read_pairs(a.pairs);
  auto in = detail::open_input(a.predictions);
  std::vector<RestorationRecord> records;
  try {
    records = read_predictions(in);
  } catch (const IngestError& e) {
    throw IngestError(a.predictions + ": " + e.what(), e.line());
  }
  const std::string rendered = render_eval_report(evaluate_predictions(pairs, records, a.predictions));
  if (a.report.empty()) {
    out << rendered;
  } else {
    detail::write_file(a.report, rendered);
  }
}

struct SweepArgs {
  std::string pairs;
  std::string test_pairs;
  std::string sizes;
  std::optional<std::size_t> test_size;
  std::string restorer = "baseline";
  std::string report;
};

struct SweepRow {
  std::size_t corpus_size = 0;
  EvalReport eval;
};

/// Trains on nested head prefixes of `train` and scores each model on the
/// same `test` set.
inline std::vector<SweepRow> sweep(const std::vector<SentencePair>& train,
                                   const std::vector<SentencePair>& test,
                                   const std::vector<std::size_t>& sizes) {
  std::vector<std::string> refs;
  for (const auto& p : test) refs.push_back(p.target);
  std::vector<SweepRow> rows;
  for (std::size_t n : sizes) {
    const std::vector<SentencePair> prefix(train.begin(),
                                           train.begin() + static_cast<std::ptrdiff_t>(n));
    const auto model = train_lookup_restorer(prefix);
    std::vector<std::string> cands;
    for (const auto& p : test) cands.push_back(restore_sentence(model, p.source));
    rows.push_back({n, evaluate(refs, cands, HashedTrigramEmbedder{})});
  }
  return rows;
}

inline std::string render_sweep(const std::string& method, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,corpus_size,bleu,bert_precision,bert_recall,bert_f1\n";
  for (const auto& r : rows) {
    out << method << ',' << r.corpus_size << ',' << fixed4(r.eval.bleu) << ','
        << fixed4(r.eval.bert_precision) << ',' << fixed4(r.eval.bert_recall) << ','
        << fixed4(r.eval.bert_f1) << '\n';
  }
  return out.str();
}

inline void run_sweep(const SweepArgs& a, std::ostream& out) {
  if (a.restorer != "baseline") {
    throw UsageError("--restorer: only 'baseline' is built in (got '" + a.restorer + "')");
  }
  auto sizes = detail::parse_sizes(a.sizes, "--sizes");
  if (!std::ranges::is_sorted(sizes)) throw UsageError("--sizes: must be non-decreasing");
  if (!a.test_pairs.empty() && a.test_size) {
    throw UsageError("sweep: --test-pairs and --test-size are exclusive");
  }

  const auto pairs = read_pairs(a.pairs);
  std::vector<SentencePair> train;
  std::vector<SentencePair> test;
  if (!a.test_pairs.empty()) {
    const auto split = split_corpus(pairs, {sizes.back(), 0, 0});
    train = split.train;
    test = read_pairs(a.test_pairs);
  } else {
    // Held-out test set: the pairs right after the largest prefix.
    const std::size_t remaining = pairs.size() > sizes.back() ? pairs.size() - sizes.back() : 0;
    const std::size_t n_test = a.test_size.value_or(remaining);
    const auto split = split_corpus(pairs, {sizes.back(), 0, n_test});
    train = split.train;
    test = split.test;
  }
  if (test.empty()) throw UsageError("sweep: test set is empty");

  const std::string rendered = render_sweep(a.restorer, sweep(train, test, sizes));
  if (a.report.empty()) {
    out << rendered;
  } else {
    detail::write_file(a.report, rendered);
  }
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"vowelzip: devowelling text compression and restoration toolkit", "vowelzip"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "build source/target pairs from raw text");
  prepare->add_option("--input", prep.input, "plain text or TSV, one sentence per line")->required();
  prepare->add_option("--output", prep.output, "pair TSV (prefix when --split is given)")->required();
  prepare->add_option("--column", prep.column, "0-based TSV column holding English text");
  prepare->add_option("--limit", prep.limit, "keep only the first N sentences");
  prepare->add_option("--split", prep.split,
                      "TRAIN,VAL,TEST head-sequential sizes; writes OUTPUT.{train,val,test}.tsv");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "measure compression ratios");
  bench_cmd->add_option("--pairs", bench.pairs, "pair TSV; targets form the corpus");
  bench_cmd->add_option("--input", bench.input, "plain text corpus, one sentence per line");
  bench_cmd->add_option("--codecs", bench.codecs, "lzw,ac,gzip,zlib,lzma or --external names")
      ->capture_default_str();
  bench_cmd->add_option("--modes", bench.modes, "raw,devowel")->capture_default_str();
  bench_cmd->add_option("--report", bench.report, "output report (stdout if omitted)");
  bench_cmd->add_option("--format", bench.format, "csv or markdown")->capture_default_str();
  bench_cmd->add_option("--external", bench.externals,
                        "NAME=TEMPLATE external compressor; TEMPLATE uses {in} and {out}");
  bench_cmd->add_option("--corpus-id", bench.corpus_id, "corpus column value (default: file stem)");
  bench_cmd->add_option("--limit", bench.limit, "use only the first N sentences");
  bench_cmd->add_flag("--paper-mode", bench.paper_mode,
                      "count LZW symbols with an unbounded string table");
  bench_cmd->add_flag("--per-sentence", bench.per_sentence,
                      "compress each sentence separately and sum the sizes");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-baseline", "train the lookup restorer");
  train_cmd->add_option("--pairs", train.pairs, "training pair TSV")->required();
  train_cmd->add_option("--model", train.model, "output model TSV")->required();
  train_cmd->add_option("--limit", train.limit, "train on the first N pairs only");

  RestoreArgs restore;
  auto* restore_cmd = app.add_subcommand("restore", "restore vowels with a lookup model");
  restore_cmd->add_option("--model", restore.model, "model TSV")->required();
  restore_cmd->add_option("--pairs", restore.pairs, "pair TSV; sources are restored");
  restore_cmd->add_option("--sources", restore.sources, "devowelled text, one sentence per line");
  restore_cmd->add_option("--output", restore.output, "prediction JSON-lines")->required();
  restore_cmd->add_option("--limit", restore.limit, "restore the first N sentences only");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "score predictions against pair targets");
  eval_cmd->add_option("--pairs", eval.pairs, "reference pair TSV (ids are line numbers from 0)")
      ->required();
  eval_cmd->add_option("--predictions", eval.predictions, "prediction JSON-lines")->required();
  eval_cmd->add_option("--report", eval.report, "metric,value CSV (stdout if omitted)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "corpus-size ablation for a restorer");
  sweep_cmd->add_option("--pairs", sw.pairs, "pair TSV; training prefixes come from its head")
      ->required();
  sweep_cmd->add_option("--sizes", sw.sizes, "comma-separated training sizes")->required();
  sweep_cmd->add_option("--test-pairs", sw.test_pairs, "separate held-out pair TSV");
  sweep_cmd->add_option("--test-size", sw.test_size,
                        "held-out pairs after the largest prefix (default: all remaining)");
  sweep_cmd->add_option("--restorer", sw.restorer, "restorer to sweep")->capture_default_str();
  sweep_cmd->add_option("--report", sw.report, "output CSV (stdout if omitted)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("vowelzip");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*prepare) run_prepare(prep, out);
    if (*bench_cmd) run_bench(bench, out);
    if (*train_cmd) run_train(train, out);
    if (*restore_cmd) run_restore(restore, out);
    if (*eval_cmd) run_evaluate(eval, out);
    if (*sweep_cmd) run_sweep(sw, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const MeasurementError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace vowelzip::cli
