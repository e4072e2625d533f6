// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "crstrie/compiler.hpp"
#include "crstrie/crs.hpp"
#include "crstrie/error.hpp"
#include "crstrie/matcher.hpp"
#include "crstrie/pattern_set.hpp"

namespace crstrie {

/// Consecutive duplicate draws tolerated before sampling gives up.
inline constexpr std::size_t kMaxSampleRetries = 10000;

/**
 * Draws `count` distinct substrings of `length` bytes. Offsets are
 * successive 32-bit MT19937 outputs modulo the number of start positions;
 * a duplicate draw is discarded and replaced by the next output.
 */
inline PatternSet sample_patterns(std::string_view corpus, std::size_t count, std::size_t length,
                                  std::uint32_t seed) {
  if (count < 1) throw ConfigError("pattern count must be at least 1");
  if (length < 1) throw ConfigError("pattern length must be at least 1");
  if (corpus.size() < length)
    throw ConfigError("corpus (" + std::to_string(corpus.size()) + " bytes) shorter than pattern length " +
                      std::to_string(length));
  const std::uint64_t span = corpus.size() - length + 1;
  std::mt19937 gen(seed);
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  out.reserve(count);
  while (out.size() < count) {
    std::size_t retries = 0;
    for (;;) {
      const auto off = static_cast<std::size_t>(gen() % span);
      const auto candidate = corpus.substr(off, length);
      if (seen.insert(candidate).second) {
        out.emplace_back(candidate);
        break;
      }
      if (++retries > kMaxSampleRetries)
        throw ConfigError("could not draw " + std::to_string(count) + " distinct patterns of length " +
                          std::to_string(length));
    }
  }
  return PatternSet(std::move(out), 256);
}

/// Concatenates MT19937-chosen corpus lines until `target_bytes` is reached.
inline std::string synthesize_text(std::string_view corpus, std::size_t target_bytes, std::uint32_t seed) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < corpus.size();) {
    auto nl = corpus.find('\n', pos);
    if (nl == std::string_view::npos) nl = corpus.size() - 1;
    lines.push_back(corpus.substr(pos, nl - pos + 1));
    pos = nl + 1;
  }
  if (lines.empty()) throw ConfigError("cannot synthesize text from an empty corpus");
  std::mt19937 gen(seed);
  std::string out;
  out.reserve(target_bytes + 1024);
  while (out.size() < target_bytes) out += lines[gen() % lines.size()];
  out.resize(target_bytes);
  return out;
}

// ---------------------------------------------------------------------------
// Compression report

struct StageCount {
  std::string stage;
  std::size_t nodes = 0;  ///< rows; for the CRS stage, rows of the encoded matrix
  std::size_t elements = 0;  ///< 32-bit words
  std::size_t bytes = 0;
};

struct CompressionReport {
  std::string corpus;
  std::size_t corpus_bytes = 0;
  std::size_t pattern_count = 0;
  std::size_t pattern_length = 0;
  std::uint32_t seed = 0;
  CompileConfig config;
  /// original, truncated, merged (suffix + leaf), crs
  std::vector<StageCount> stages;
  std::size_t nnz = 0;
  std::vector<std::string> assumptions;

  const StageCount& stage(std::string_view name) const {
    for (const auto& s : stages)
      if (s.stage == name) return s;
    throw ConfigError("no stage named " + std::string(name));
  }
  double ratio(std::string_view num, std::string_view den) const {
    return static_cast<double>(stage(num).elements) / static_cast<double>(stage(den).elements);
  }
};

inline StageCount trie_stage(std::string name, const LevelizedTrie& t) {
  return {std::move(name), t.size(), t.size() * kNodeColumns, t.size() * kNodeBytes};
}

inline CompressionReport compression_report(const PatternSet& patterns, const CompileConfig& cfg) {
  const auto s = compile_stages(patterns, cfg);
  const CrsTrie crs = encode_crs(s.compiled);
  CompressionReport r;
  r.pattern_count = patterns.size();
  r.pattern_length = patterns.longest();
  r.config = cfg;
  r.stages.push_back(trie_stage("original", s.full));
  r.stages.push_back(trie_stage("truncated", s.truncated));
  r.stages.push_back(trie_stage("merged", s.compiled));
  const std::size_t elements = storage_cost(crs);
  r.stages.push_back({"crs", crs.rows, elements, elements * sizeof(std::uint32_t)});
  r.nnz = crs.nnz();
  return r;
}

/// Benchmark patterns must be long enough for truncation to engage.
inline void check_bench_length(std::size_t length, const CompileConfig& cfg) {
  if (length < cfg.truncation_depth)
    throw ConfigError("pattern length " + std::to_string(length) + " is shorter than truncation depth " +
                      std::to_string(cfg.truncation_depth));
}

inline CompressionReport run_compression_bench(const std::string& corpus_path, std::size_t count,
                                               std::size_t length, std::uint32_t seed, const CompileConfig& cfg) {
  check_bench_length(length, cfg);
  const TextBuffer corpus = TextBuffer::load(corpus_path);
  const PatternSet patterns = sample_patterns(corpus.view(), count, length, seed);
  CompressionReport r = compression_report(patterns, cfg);
  r.corpus = corpus_path;
  r.corpus_bytes = corpus.size();
  r.pattern_length = length;
  r.seed = seed;
  r.assumptions = {"pattern count and length are configuration choices, not fixed by the method",
                   "element unit is a 32-bit word; bytes = elements x 4"};
  return r;
}

inline nlohmann::json to_json(const CompressionReport& r) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"stage", s.stage}, {"nodes", s.nodes}, {"elements", s.elements}, {"bytes", s.bytes}});
  nlohmann::json ratios = nlohmann::json::object();
  for (std::size_t i = 1; i < r.stages.size(); ++i) {
    ratios[r.stages[i].stage + "/" + r.stages[i - 1].stage] = r.ratio(r.stages[i].stage, r.stages[i - 1].stage);
    if (i > 1) ratios[r.stages[i].stage + "/original"] = r.ratio(r.stages[i].stage, "original");
  }
  return {{"corpus", r.corpus},
          {"corpus_bytes", r.corpus_bytes},
          {"patterns", r.pattern_count},
          {"pattern_length", r.pattern_length},
          {"seed", r.seed},
          {"truncation_depth", r.config.truncation_depth},
          {"merge_levels", r.config.merge_levels},
          {"nnz", r.nnz},
          {"stages", stages},
          {"ratios", ratios},
          {"assumptions", r.assumptions}};
}

inline void print_table(std::ostream& os, const CompressionReport& r) {
  os << "corpus: " << r.corpus << " (" << r.corpus_bytes << " bytes)\n"
     << "patterns: " << r.pattern_count << " x " << r.pattern_length << " bytes, seed " << r.seed
     << ", depth " << r.config.truncation_depth << ", merge levels " << r.config.merge_levels << "\n\n";
  os << std::left << std::setw(11) << "stage" << std::right << std::setw(10) << "nodes" << std::setw(12)
     << "elements" << std::setw(12) << "bytes" << std::setw(11) << "vs prev" << std::setw(11) << "vs orig"
     << '\n';
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    const auto& s = r.stages[i];
    os << std::left << std::setw(11) << s.stage << std::right << std::setw(10) << s.nodes << std::setw(12)
       << s.elements << std::setw(12) << s.bytes << std::fixed << std::setprecision(3);
    if (i == 0)
      os << std::setw(11) << "-" << std::setw(11) << "-";
    else
      os << std::setw(11) << r.ratio(s.stage, r.stages[i - 1].stage) << std::setw(11)
         << r.ratio(s.stage, "original");
    os << '\n';
  }
  os << "\nnnz = " << r.nnz << ", crs elements = 2*nnz + n + 1\n";
  for (const auto& a : r.assumptions) os << "assumption: " << a << '\n';
}

// ---------------------------------------------------------------------------
// Throughput report

struct ThroughputLevel {
  unsigned parallelism = 1;
  double median_seconds = 0;
  double gbps = 0;
  std::size_t matches = 0;
};

struct ThroughputReport {
  std::size_t text_bytes = 0;
  std::size_t pattern_count = 0;
  unsigned repetitions = 0;
  std::vector<ThroughputLevel> levels;

  double speedup(unsigned parallelism) const {
    const ThroughputLevel* base = nullptr;
    const ThroughputLevel* at = nullptr;
    for (const auto& l : levels) {
      if (l.parallelism == 1) base = &l;
      if (l.parallelism == parallelism) at = &l;
    }
    if (!base || !at) throw ConfigError("speedup needs both parallelism 1 and " + std::to_string(parallelism));
    return base->median_seconds / at->median_seconds;
  }
};

inline double gbps(std::size_t bytes, double seconds) { return static_cast<double>(bytes) * 8.0 / seconds / 1e9; }

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

/// Times match_all at each parallelism level; match counts must agree.
inline ThroughputReport measure_throughput(const CrsTrie& crs, std::string_view text,
                                           const std::vector<unsigned>& parallelism, unsigned repetitions,
                                           std::size_t chunk_size = std::size_t{1} << 16) {
  if (parallelism.empty()) throw ConfigError("parallelism list is empty");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  ThroughputReport report;
  report.text_bytes = text.size();
  report.repetitions = repetitions;
  for (unsigned p : parallelism) {
    ScanConfig cfg{p, chunk_size, false};
    std::vector<double> times;
    std::size_t matches = 0;
    for (unsigned i = 0; i < repetitions; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto records = match_all(crs, text, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
      matches = records.size();
    }
    const double m = median(times);
    report.levels.push_back({p, m, gbps(text.size(), m), matches});
  }
  for (const auto& l : report.levels)
    if (l.matches != report.levels.front().matches)
      throw InvariantError("match counts differ across parallelism levels");
  return report;
}

struct ThroughputOptions {
  std::size_t count = 1000;
  std::size_t length = 16;
  std::uint32_t seed = 5489;
  CompileConfig compile;
  std::vector<unsigned> parallelism{1};
  unsigned repetitions = 10;
  /// Zero scans the corpus itself; otherwise a synthetic text of this size.
  std::size_t synthetic_bytes = 0;
};

inline ThroughputReport run_throughput_bench(const std::string& corpus_path, const ThroughputOptions& opt) {
  check_bench_length(opt.length, opt.compile);
  const TextBuffer corpus = TextBuffer::load(corpus_path);
  const PatternSet patterns = sample_patterns(corpus.view(), opt.count, opt.length, opt.seed);
  const CrsTrie crs = encode_crs(compile(patterns, opt.compile));
  ThroughputReport r;
  if (opt.synthetic_bytes > 0) {
    const std::string text = synthesize_text(corpus.view(), opt.synthetic_bytes, opt.seed);
    r = measure_throughput(crs, text, opt.parallelism, opt.repetitions);
  } else {
    r = measure_throughput(crs, corpus.view(), opt.parallelism, opt.repetitions);
  }
  r.pattern_count = patterns.size();
  return r;
}

inline nlohmann::json to_json(const ThroughputReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"parallelism", l.parallelism},
                      {"median_seconds", l.median_seconds},
                      {"gbps", l.gbps},
                      {"matches", l.matches}});
  return {{"text_bytes", r.text_bytes},
          {"patterns", r.pattern_count},
          {"repetitions", r.repetitions},
          {"levels", levels}};
}

inline void print_table(std::ostream& os, const ThroughputReport& r) {
  os << "text: " << r.text_bytes << " bytes, patterns: " << r.pattern_count << ", median of " << r.repetitions
     << " runs\n\n";
  os << std::setw(12) << "parallelism" << std::setw(14) << "seconds" << std::setw(10) << "Gbps" << std::setw(12)
     << "matches" << std::setw(10) << "speedup" << '\n';
  const double base = r.levels.front().median_seconds;
  for (const auto& l : r.levels)
    os << std::setw(12) << l.parallelism << std::fixed << std::setprecision(6) << std::setw(14) << l.median_seconds
       << std::setprecision(3) << std::setw(10) << l.gbps << std::setw(12) << l.matches << std::setprecision(2)
       << std::setw(10) << base / l.median_seconds << '\n';
}

// ---------------------------------------------------------------------------
// Occupancy dump: "# rows=<n> cols=9", a header line, then one row,col,value
// line per non-zero cell in row-major order.

inline void dump_occupancy(const CrsTrie& crs, std::ostream& out) {
  out << "# rows=" << crs.rows << " cols=" << kNodeColumns << "\nrow,col,value\n";
  for (std::uint32_t r = 0; r < crs.rows; ++r)
    for (auto i = crs.row_ptr[r]; i < crs.row_ptr[r + 1]; ++i)
      out << r << ',' << unsigned{crs.col_ind[i]} << ',' << crs.val[i] << '\n';
}

inline void dump_occupancy(const CrsTrie& crs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  dump_occupancy(crs, out);
  if (!out) throw IoError("write failed: " + path);
}

inline DenseNodeMatrix load_occupancy(std::istream& in) {
  std::string line;
  std::size_t rows = 0, cols = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "# rows=%zu cols=%zu", &rows, &cols) != 2)
    throw FormatError("occupancy dump: missing dimension line");
  if (cols != kNodeColumns) throw FormatError("occupancy dump: expected 9 columns");
  if (!std::getline(in, line) || line != "row,col,value") throw FormatError("occupancy dump: missing header");
  DenseNodeMatrix m;
  m.rows = rows;
  m.cells.assign(rows * cols, 0);
  while (std::getline(in, line)) {
    std::size_t r = 0, c = 0;
    unsigned long v = 0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lu", &r, &c, &v) != 3) throw FormatError("occupancy dump: bad line");
    if (r >= rows || c >= cols) throw FormatError("occupancy dump: cell outside matrix");
    m.cell(r, c) = static_cast<std::uint32_t>(v);
  }
  return m;
}

}  // namespace crstrie
