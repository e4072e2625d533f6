// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "crstrie/crstrie.hpp"

namespace {

using namespace crstrie;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kInvariant = 3 };

struct Options {
  std::uint32_t seed = 5489;
  std::size_t count = 1000;
  std::size_t length = 16;
  unsigned depth = 8;
  unsigned merge_levels = 3;
  std::vector<unsigned> parallelism{1};
  bool verify = false;
  bool json = false;
  std::string format = "text";
  std::string input;
  std::string output;
  std::string patterns;
  std::string corpus;
  unsigned reps = 10;
  double synthetic_mb = 0;
  std::size_t chunk = std::size_t{1} << 16;
};

PatternFormat pattern_format(const std::string& name) {
  if (name == "text") return PatternFormat::kText;
  if (name == "binary") return PatternFormat::kBinary;
  throw ConfigError("unknown pattern format: " + name);
}

CompileConfig compile_config(const Options& o) {
  CompileConfig cfg{o.depth, o.merge_levels, true};
  cfg.validate();
  return cfg;
}

/// Writes to the -o file when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot open for writing: " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
};

void write_match(std::ostream& os, const MatchRecord& r, bool json) {
  if (json) {
    nlohmann::json j{{"position", r.position}, {"depth", r.depth}, {"ids", r.pattern_ids}};
    if (r.prefix_only) j["prefix_only"] = true;
    os << j.dump() << '\n';
    return;
  }
  os << r.position << '\t' << r.depth << '\t';
  for (std::size_t i = 0; i < r.pattern_ids.size(); ++i) os << (i ? "," : "") << r.pattern_ids[i];
  os << '\n';
}

int cmd_compile(const Options& o) {
  const PatternSet ps(load_patterns(o.input, pattern_format(o.format)));
  const auto stages = compile_stages(ps, compile_config(o));
  const CrsTrie crs = encode_crs(stages.compiled);
  save_crs(crs, o.output);
  if (o.json) {
    std::cout << nlohmann::json{{"patterns", ps.size()},
                                {"nodes", stages.compiled.size()},
                                {"nnz", crs.nnz()},
                                {"storage_cost", storage_cost(crs)}}
                     .dump()
              << '\n';
  } else {
    std::cerr << ps.size() << " patterns, " << stages.full.size() << " -> " << stages.compiled.size()
              << " nodes, nnz " << crs.nnz() << ", storage " << storage_cost(crs) << " words\n";
  }
  return kOk;
}

int cmd_scan(const Options& o) {
  const CrsTrie crs = load_crs(o.input);
  const TextBuffer text = TextBuffer::load(o.corpus);
  ScanConfig cfg{o.parallelism.front(), o.chunk, o.verify};
  std::vector<MatchRecord> records;
  if (o.verify) {
    if (o.patterns.empty()) throw ConfigError("--verify needs --patterns");
    const PatternSet ps(load_patterns(o.patterns, pattern_format(o.format)), crs.alphabet_size);
    records = match_all(crs, text.view(), cfg, ps);
  } else {
    records = match_all(crs, text.view(), cfg);
  }
  Output out(o.output);
  for (const auto& r : records) write_match(out.stream(), r, o.json);
  out.finish();
  return kOk;
}

int cmd_bench_compress(const Options& o) {
  const auto r = run_compression_bench(o.corpus, o.count, o.length, o.seed, compile_config(o));
  Output out(o.output);
  if (o.json)
    out.stream() << to_json(r).dump(2) << '\n';
  else
    print_table(out.stream(), r);
  out.finish();
  return kOk;
}

int cmd_bench_throughput(const Options& o) {
  ThroughputOptions t;
  t.count = o.count;
  t.length = o.length;
  t.seed = o.seed;
  t.compile = compile_config(o);
  t.parallelism = o.parallelism;
  t.repetitions = o.reps;
  t.synthetic_bytes = static_cast<std::size_t>(o.synthetic_mb * 1e6);
  const auto r = run_throughput_bench(o.corpus, t);
  Output out(o.output);
  if (o.json)
    out.stream() << to_json(r).dump(2) << '\n';
  else
    print_table(out.stream(), r);
  out.finish();
  return kOk;
}

int cmd_dump_occupancy(const Options& o) {
  const CrsTrie crs = load_crs(o.input);
  Output out(o.output);
  dump_occupancy(crs, out.stream());
  out.finish();
  return kOk;
}

int cmd_sample_patterns(const Options& o) {
  const TextBuffer corpus = TextBuffer::load(o.corpus);
  const PatternSet ps = sample_patterns(corpus.view(), o.count, o.length, o.seed);
  const std::vector<std::string> pats(ps.patterns().begin(), ps.patterns().end());
  Output out(o.output);
  if (pattern_format(o.format) == PatternFormat::kText)
    write_text_patterns(out.stream(), pats);
  else
    write_binary_patterns(out.stream(), pats);
  out.finish();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crstrie: compressed bitmap-trie multi-pattern matcher"};
  app.require_subcommand(1);
  Options o;

  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "MT19937 seed")->capture_default_str(); };
  auto sampling = [&](CLI::App* c) {
    seed(c);
    c->add_option("--count", o.count, "number of patterns")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--length", o.length, "pattern length in bytes")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto compiling = [&](CLI::App* c) {
    c->add_option("--depth", o.depth, "truncation depth")->capture_default_str();
    c->add_option("--merge-levels", o.merge_levels, "levels eligible for suffix merging")->capture_default_str();
  };
  auto output = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "output file (default stdout)"); };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "pattern file format")
        ->check(CLI::IsMember({"text", "binary"}))
        ->capture_default_str();
  };
  auto json = [&](CLI::App* c) { c->add_flag("--json", o.json, "JSON output"); };
  auto corpus = [&](CLI::App* c, const char* name) {
    c->add_option(name, o.corpus, "corpus or text file")->required();
  };

  auto* compile = app.add_subcommand("compile", "compile a pattern file into a .crst trie");
  compile->add_option("patterns", o.input, "pattern file")->required();
  compile->add_option("-o,--output", o.output, ".crst output path")->required();
  compiling(compile);
  format(compile);
  json(compile);

  auto* scan = app.add_subcommand("scan", "scan a text with a .crst trie");
  scan->add_option("trie", o.input, ".crst file")->required();
  corpus(scan, "text");
  scan->add_option("--parallelism", o.parallelism, "worker threads")->expected(1)->check(CLI::PositiveNumber);
  scan->add_option("--chunk", o.chunk, "positions per work item")->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_flag("--verify", o.verify, "resolve matches to pattern ids");
  scan->add_option("--patterns", o.patterns, "pattern file used to compile the trie (for --verify)");
  format(scan);
  json(scan);
  output(scan);

  auto* bench_compress = app.add_subcommand("bench-compress", "per-stage compression report");
  corpus(bench_compress, "corpus");
  sampling(bench_compress);
  compiling(bench_compress);
  json(bench_compress);
  output(bench_compress);

  auto* bench_throughput = app.add_subcommand("bench-throughput", "scan throughput per parallelism level");
  corpus(bench_throughput, "corpus");
  sampling(bench_throughput);
  compiling(bench_throughput);
  bench_throughput->add_option("--parallelism", o.parallelism, "parallelism levels, e.g. 1,2,8")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_throughput->add_option("--reps", o.reps, "repetitions per level")->capture_default_str();
  bench_throughput->add_option("--synthetic-mb", o.synthetic_mb, "scan a synthetic text of this many MB");
  json(bench_throughput);
  output(bench_throughput);

  auto* dump = app.add_subcommand("dump-occupancy", "CSV of the non-zero cells of a .crst trie");
  dump->add_option("trie", o.input, ".crst file")->required();
  output(dump);

  auto* sample = app.add_subcommand("sample-patterns", "draw patterns from a corpus");
  corpus(sample, "corpus");
  sampling(sample);
  format(sample);
  output(sample);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) return cmd_compile(o);
    if (*scan) return cmd_scan(o);
    if (*bench_compress) return cmd_bench_compress(o);
    if (*bench_throughput) return cmd_bench_throughput(o);
    if (*dump) return cmd_dump_occupancy(o);
    if (*sample) return cmd_sample_patterns(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EncodingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
