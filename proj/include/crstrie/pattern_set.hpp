// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crstrie/error.hpp"

namespace crstrie {

using PatternId = std::uint32_t;

/**
 * Deduplicated byte-string patterns over an alphabet of `alphabet_size`
 * symbols (bytes 0 .. alphabet_size-1).
 *
 * Pattern ids are positions in the deduplicated list; the first occurrence
 * of a duplicate keeps its place.
 */
class PatternSet {
 public:
  explicit PatternSet(std::vector<std::string> patterns, unsigned alphabet_size = 256)
      : alphabet_size_(alphabet_size) {
    if (alphabet_size < 2 || alphabet_size > 256)
      throw ConfigError("alphabet size must be in [2, 256], got " + std::to_string(alphabet_size));
    if (patterns.empty()) throw ConfigError("pattern set is empty");

    std::unordered_set<std::string_view> seen;
    seen.reserve(patterns.size());
    patterns_.reserve(patterns.size());
    for (auto& p : patterns) {
      if (p.empty()) throw ConfigError("patterns must be at least one byte long");
      for (unsigned char c : p)
        if (c >= alphabet_size)
          throw EncodingError("pattern byte " + std::to_string(c) + " outside alphabet of size " +
                              std::to_string(alphabet_size));
      if (seen.contains(p)) continue;
      patterns_.push_back(std::move(p));
      seen.insert(patterns_.back());  // reserve() above keeps the views valid
    }
    for (const auto& p : patterns_) longest_ = std::max(longest_, p.size());
  }

  std::span<const std::string> patterns() const noexcept { return patterns_; }
  const std::string& operator[](PatternId id) const { return patterns_.at(id); }
  std::size_t size() const noexcept { return patterns_.size(); }
  unsigned alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t longest() const noexcept { return longest_; }

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::vector<std::string> patterns_;
  unsigned alphabet_size_;
  std::size_t longest_ = 0;
};

/**
 * Levels kept by default: the smallest d with alphabet^d >= 2^64 (8 for
 * bytes, 32 for DNA), capped at the longest pattern.
 */
inline unsigned default_truncation_depth(unsigned alphabet_size, std::size_t longest) {
  if (alphabet_size < 2) throw ConfigError("alphabet size must be at least 2");
  unsigned d = 0;
  unsigned __int128 reach = 1;
  const unsigned __int128 target = static_cast<unsigned __int128>(1) << 64;
  while (reach < target) {
    reach *= alphabet_size;
    ++d;
  }
  if (longest > 0 && longest < d) d = static_cast<unsigned>(longest);
  return std::max(d, 1u);
}

struct CompileConfig {
  unsigned truncation_depth = 8;
  /// Deepest levels eligible for suffix merging.
  unsigned merge_levels = 3;
  bool verify_matches = true;

  static CompileConfig defaults_for(const PatternSet& patterns) {
    CompileConfig cfg;
    cfg.truncation_depth = default_truncation_depth(patterns.alphabet_size(), patterns.longest());
    cfg.merge_levels = std::min(cfg.merge_levels, cfg.truncation_depth);
    return cfg;
  }

  void validate() const {
    if (truncation_depth < 1) throw ConfigError("truncation depth must be at least 1");
    if (merge_levels > truncation_depth)
      throw ConfigError("merge levels (" + std::to_string(merge_levels) +
                        ") exceed truncation depth (" + std::to_string(truncation_depth) + ")");
  }
};

}  // namespace crstrie
