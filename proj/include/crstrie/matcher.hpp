// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "crstrie/crs.hpp"
#include "crstrie/error.hpp"
#include "crstrie/pattern_set.hpp"

// Failure-less matching: every text position starts its own walk from the
// root and stops at the first match node or the first mismatch. Walks never
// depend on each other, so positions are split into chunks and handed to
// worker threads without any overlap between chunks.

namespace crstrie {

/// Immutable text to scan.
class TextBuffer {
 public:
  TextBuffer() = default;
  explicit TextBuffer(std::string bytes) : bytes_(std::move(bytes)) {}

  static TextBuffer load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    return TextBuffer(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
  }

  std::string_view view() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }

 private:
  std::string bytes_;
};

struct MatchRecord {
  std::uint64_t position = 0;
  std::uint32_t depth = 0;
  /// Verified pattern ids, ascending; empty when verification is off.
  std::vector<PatternId> pattern_ids;
  /// Set by verification when no full pattern occurs at `position`.
  bool prefix_only = false;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct ScanConfig {
  unsigned parallelism = 1;
  std::size_t chunk_size = std::size_t{1} << 16;
  bool verify = false;

  void validate() const {
    if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (chunk_size < 1) throw ConfigError("chunk size must be at least 1");
  }
};

namespace detail {

// Depth of the first match node on the walk from `start`, or 0. `examined`
// receives the number of text bytes read.
inline std::uint32_t walk(const CrsTrie& crs, std::string_view text, std::size_t start,
                          std::size_t* examined = nullptr) {
  NodeIndex node = 0;
  std::size_t i = start;
  std::uint32_t depth = 0;
  while (i < text.size()) {
    const auto next = child_lookup_crs(crs, node, static_cast<std::uint8_t>(text[i++]));
    if (!next) break;
    node = *next;
    ++depth;
    if (crs.match_flags[node]) {
      if (examined) *examined = i - start;
      return depth;
    }
  }
  if (examined) *examined = i - start;
  return 0;
}

}  // namespace detail

inline std::optional<MatchRecord> match_at(const CrsTrie& crs, std::string_view text, std::size_t start) {
  if (const auto depth = detail::walk(crs, text, start); depth > 0)
    return MatchRecord{start, depth, {}, false};
  return std::nullopt;
}

/**
 * Resolves a record to the patterns that occur in full at its position.
 *
 * The walk is continued past the record's node down to the deepest node on
 * the text's path; every pattern indexed on a match node along the way is a
 * candidate and is confirmed against the original bytes.
 */
inline MatchRecord verify(MatchRecord record, const CrsTrie& crs, const PatternSet& patterns,
                          std::string_view text) {
  const auto pos = static_cast<std::size_t>(record.position);
  const std::string_view tail = text.substr(pos);
  std::vector<PatternId> ids;
  NodeIndex node = 0;
  const auto end = crs.end_node();
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const auto next = child_lookup_crs(crs, node, static_cast<std::uint8_t>(tail[i]));
    if (!next) break;
    node = *next;
    if (crs.match_flags[node]) {
      if (auto it = crs.pattern_index.find(node); it != crs.pattern_index.end()) {
        for (PatternId id : it->second)
          if (tail.starts_with(patterns[id])) ids.push_back(id);
      }
    }
    if (end && node == *end) break;
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  record.pattern_ids = std::move(ids);
  record.prefix_only = record.pattern_ids.empty();
  return record;
}

namespace detail {

inline void scan_range(const CrsTrie& crs, std::string_view text, std::size_t begin, std::size_t end,
                       const PatternSet* patterns, std::vector<MatchRecord>& out) {
  for (std::size_t s = begin; s < end; ++s) {
    const auto depth = walk(crs, text, s);
    if (depth == 0) continue;
    MatchRecord rec{s, depth, {}, false};
    if (patterns) rec = verify(std::move(rec), crs, *patterns, text);
    out.push_back(std::move(rec));
  }
}

inline std::vector<MatchRecord> match_all_impl(const CrsTrie& crs, std::string_view text,
                                               const ScanConfig& cfg, const PatternSet* patterns) {
  cfg.validate();
  const std::size_t chunks = (text.size() + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<std::vector<MatchRecord>> results(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * cfg.chunk_size;
    scan_range(crs, text, begin, std::min(text.size(), begin + cfg.chunk_size), patterns, results[c]);
  };

  const std::size_t workers = std::min<std::size_t>(cfg.parallelism, chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c; (c = next.fetch_add(1, std::memory_order_relaxed)) < chunks;) run_chunk(c);
      });
  }  // jthreads join here

  std::size_t total = 0;
  for (const auto& r : results) total += r.size();
  std::vector<MatchRecord> out;
  out.reserve(total);
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Scans every start position; records come back sorted by position.
inline std::vector<MatchRecord> match_all(const CrsTrie& crs, std::string_view text, const ScanConfig& cfg) {
  if (cfg.verify) throw ConfigError("verification needs the original pattern set");
  return detail::match_all_impl(crs, text, cfg, nullptr);
}

inline std::vector<MatchRecord> match_all(const CrsTrie& crs, std::string_view text, const ScanConfig& cfg,
                                          const PatternSet& patterns) {
  return detail::match_all_impl(crs, text, cfg, cfg.verify ? &patterns : nullptr);
}

}  // namespace crstrie
