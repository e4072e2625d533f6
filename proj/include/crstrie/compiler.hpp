// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "crstrie/error.hpp"
#include "crstrie/levelized_trie.hpp"
#include "crstrie/pattern_set.hpp"
#include "crstrie/trie_node.hpp"

// Pattern compilation: breadth-first construction, truncation, suffix
// merging and leaf merging. Every transformation after construction goes
// through detail::relayout, which re-emits a trie from a partition of its
// rows into equivalence classes.

namespace crstrie {

namespace detail {

inline constexpr std::uint32_t kNoClass = std::numeric_limits<std::uint32_t>::max();

inline void sort_unique(std::vector<PatternId>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

/// Child rows of `node` in label order.
inline std::vector<NodeIndex> children_of(const LevelizedTrie& trie, NodeIndex node) {
  std::vector<NodeIndex> out;
  out.reserve(trie.nodes[node].child_count());
  trie.nodes[node].for_each_label([&](std::uint8_t c) { out.push_back(*child_lookup(trie, node, c)); });
  return out;
}

/**
 * Places a child block inside the level being assembled and returns its
 * start position. A block already present as a contiguous run is reused; a
 * block whose head matches the tail of the level is appended with overlap.
 */
class LevelAssembler {
 public:
  std::size_t place(std::span<const std::uint32_t> block) {
    if (block.size() == 1) {
      if (auto it = first_pos_.find(block[0]); it != first_pos_.end()) return it->second;
    } else if (auto hit = std::search(seq_.begin(), seq_.end(), block.begin(), block.end());
               hit != seq_.end()) {
      return static_cast<std::size_t>(hit - seq_.begin());
    }
    std::size_t overlap = std::min(block.size() - 1, seq_.size());
    for (; overlap > 0; --overlap)
      if (std::equal(block.begin(), block.begin() + overlap, seq_.end() - overlap)) break;
    const std::size_t start = seq_.size() - overlap;
    for (std::size_t i = overlap; i < block.size(); ++i) push(block[i]);
    return start;
  }

  const std::vector<std::uint32_t>& sequence() const noexcept { return seq_; }

 private:
  void push(std::uint32_t cls) {
    first_pos_.try_emplace(cls, seq_.size());
    seq_.push_back(cls);
  }

  std::vector<std::uint32_t> seq_;
  std::unordered_map<std::uint32_t, std::size_t> first_pos_;
};

/**
 * Rebuilds a levelized trie in which rows sharing a class are
 * interchangeable. Rows of `end_class` collapse into a single trailing end
 * node wherever a parent's children all belong to it; rows unreachable from
 * the root are dropped. Pattern ids of a class are the union of its members.
 */
inline LevelizedTrie relayout(const LevelizedTrie& in, std::span<const std::uint32_t> cls,
                              std::optional<std::uint32_t> end_class) {
  const std::uint32_t class_count = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<NodeIndex> rep(class_count, kNoClass);
  for (NodeIndex r = 0; r < in.size(); ++r)
    if (rep[cls[r]] == kNoClass) rep[cls[r]] = r;

  std::vector<std::vector<PatternId>> class_ids(class_count);
  for (const auto& [node, ids] : in.pattern_index)
    class_ids[cls[node]].insert(class_ids[cls[node]].end(), ids.begin(), ids.end());
  for (auto& ids : class_ids) sort_unique(ids);

  std::vector<std::vector<std::uint32_t>> child_classes(class_count);
  std::vector<bool> expanded(class_count, false);
  auto blocks_of = [&](std::uint32_t c) -> const std::vector<std::uint32_t>& {
    if (!expanded[c]) {
      for (NodeIndex child : children_of(in, rep[c])) child_classes[c].push_back(cls[child]);
      expanded[c] = true;
    }
    return child_classes[c];
  };

  LevelizedTrie out;
  out.alphabet_size = in.alphabet_size;
  std::vector<std::uint32_t> row_class;
  auto emit = [&](std::uint32_t c) {
    TrieNode n;
    n.bitmap = in.nodes[rep[c]].bitmap;
    out.nodes.push_back(n);
    row_class.push_back(c);
  };

  emit(cls[0]);
  out.level_starts.push_back(0);
  std::vector<NodeIndex> end_pointing;
  NodeIndex level_begin = 0;
  auto level_end = static_cast<NodeIndex>(out.nodes.size());
  while (level_begin < level_end) {
    LevelAssembler next;
    for (NodeIndex r = level_begin; r < level_end; ++r) {
      const auto& block = blocks_of(row_class[r]);
      if (block.empty()) continue;
      if (end_class && std::all_of(block.begin(), block.end(), [&](auto c) { return c == *end_class; })) {
        end_pointing.push_back(r);
        continue;
      }
      out.nodes[r].first_child_offset = level_end + static_cast<NodeIndex>(next.place(block));
    }
    if (next.sequence().empty()) break;
    out.level_starts.push_back(level_end);
    for (auto c : next.sequence()) emit(c);
    level_begin = level_end;
    level_end = static_cast<NodeIndex>(out.nodes.size());
  }
  if (!end_pointing.empty()) {
    const auto end = static_cast<NodeIndex>(out.nodes.size());
    out.level_starts.push_back(end);
    emit(*end_class);
    for (auto r : end_pointing) out.nodes[r].first_child_offset = end;
    out.has_end_node = true;
  }

  out.match_flags.resize(out.nodes.size());
  for (NodeIndex r = 0; r < out.nodes.size(); ++r) {
    const auto c = row_class[r];
    out.match_flags[r] = in.match_flags[rep[c]];
    if (!class_ids[c].empty()) out.pattern_index.emplace(r, class_ids[c]);
  }
  return out;
}

inline std::vector<std::uint32_t> identity_classes(std::size_t n) {
  std::vector<std::uint32_t> cls(n);
  std::iota(cls.begin(), cls.end(), 0u);
  return cls;
}

struct SubtreeKey {
  bool match = false;
  std::array<std::uint32_t, kBitmapWords> bitmap{};
  std::vector<std::uint32_t> children;

  friend bool operator==(const SubtreeKey&, const SubtreeKey&) = default;
};

struct SubtreeKeyHash {
  std::size_t operator()(const SubtreeKey& k) const noexcept {
    std::uint64_t h = k.match ? 0x9e3779b97f4a7c15ull : 0x7f4a7c159e3779b9ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (auto w : k.bitmap) mix(w);
    for (auto c : k.children) mix(c);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// Breadth-first construction: level k holds the distinct k-byte prefixes
/// in byte order, so each node's children are consecutive.
inline LevelizedTrie build_trie(const PatternSet& patterns) {
  if (patterns.size() == 0) throw ConfigError("pattern set is empty");
  const auto& p = patterns.patterns();
  std::vector<PatternId> order(p.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](PatternId a, PatternId b) { return p[a] < p[b]; });

  struct Range {
    std::size_t lo, hi;
  };

  LevelizedTrie t;
  t.alphabet_size = patterns.alphabet_size();
  t.nodes.emplace_back();
  t.match_flags.push_back(false);
  t.level_starts.push_back(0);

  std::vector<Range> level{{0, order.size()}};
  for (std::size_t depth = 0;; ++depth) {
    const NodeIndex level_start = t.level_starts.back();
    const auto next_start = static_cast<NodeIndex>(level_start + level.size());
    std::vector<Range> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const NodeIndex node = level_start + static_cast<NodeIndex>(i);
      auto [lo, hi] = level[i];
      // Sorted order puts the pattern equal to this prefix first.
      for (; lo < hi && p[order[lo]].size() == depth; ++lo) {
        t.match_flags[node] = true;
        t.pattern_index[node].push_back(order[lo]);
      }
      if (lo < hi) t.nodes[node].first_child_offset = next_start + static_cast<NodeIndex>(next.size());
      while (lo < hi) {
        const auto c = static_cast<std::uint8_t>(p[order[lo]][depth]);
        std::size_t end = lo;
        while (end < hi && static_cast<std::uint8_t>(p[order[end]][depth]) == c) ++end;
        t.nodes[node].set_child(c);
        next.push_back({lo, end});
        lo = end;
      }
    }
    if (next.empty()) break;
    t.level_starts.push_back(next_start);
    t.nodes.resize(t.nodes.size() + next.size());
    t.match_flags.resize(t.nodes.size(), false);
    level = std::move(next);
  }
  return t;
}

/**
 * Keeps levels 0..depth. Nodes on level `depth` lose their children and
 * become match nodes carrying the ids of every pattern below them.
 */
inline LevelizedTrie truncate(const LevelizedTrie& trie, unsigned depth) {
  if (depth < 1) throw ConfigError("truncation depth must be at least 1");
  if (trie.height() <= depth) return trie;

  std::vector<std::vector<PatternId>> below(trie.size());
  for (const auto& [node, ids] : trie.pattern_index) below[node] = ids;
  for (std::size_t k = trie.height(); k > depth; --k) {
    for (NodeIndex r = trie.level_begin(k - 1); r < trie.level_end(k - 1); ++r) {
      for (NodeIndex child : detail::children_of(trie, r))
        below[r].insert(below[r].end(), below[child].begin(), below[child].end());
      detail::sort_unique(below[r]);
    }
  }

  LevelizedTrie cut = trie;
  cut.pattern_index.clear();
  for (NodeIndex r = 0; r < trie.level_end(depth); ++r) {
    if (trie.level_of(r) == depth) {
      cut.nodes[r] = TrieNode{};
      cut.match_flags[r] = true;
      if (!below[r].empty()) cut.pattern_index.emplace(r, below[r]);
    } else if (auto it = trie.pattern_index.find(r); it != trie.pattern_index.end()) {
      cut.pattern_index.insert(*it);
    }
  }
  // Rows of the old end node stay shared if anything above the cut still uses it.
  std::optional<std::uint32_t> end_class;
  if (trie.has_end_node) {
    const NodeIndex end = *trie.end_node();
    if (auto it = trie.pattern_index.find(end); it != trie.pattern_index.end())
      cut.pattern_index.insert(*it);
    end_class = end;
  }
  return detail::relayout(cut, detail::identity_classes(cut.size()), end_class);
}

/**
 * Shares identical subtrees within the deepest `merge_levels` levels.
 * Two nodes are identical when their match flag, bitmap and (already
 * merged) children agree; the hash table confirms full equality.
 */
inline LevelizedTrie merge_suffixes(const LevelizedTrie& trie, unsigned merge_levels) {
  if (merge_levels == 0 || trie.level_count() < 2) return trie;
  const std::size_t first = std::max<std::size_t>(
      1, trie.level_count() > merge_levels ? trie.level_count() - merge_levels : 1);

  std::vector<std::uint32_t> cls(trie.size(), detail::kNoClass);
  std::uint32_t next_class = 0;
  std::optional<std::uint32_t> end_class;
  if (trie.has_end_node) {
    end_class = next_class++;
    cls[*trie.end_node()] = *end_class;
  }

  std::unordered_map<detail::SubtreeKey, std::uint32_t, detail::SubtreeKeyHash> seen;
  for (std::size_t k = trie.level_count(); k-- > first;) {
    for (NodeIndex r = trie.level_begin(k); r < trie.level_end(k); ++r) {
      if (cls[r] != detail::kNoClass) continue;
      detail::SubtreeKey key{trie.match_flags[r], trie.nodes[r].bitmap, {}};
      for (NodeIndex child : detail::children_of(trie, r)) key.children.push_back(cls[child]);
      auto [it, inserted] = seen.try_emplace(std::move(key), next_class);
      if (inserted) ++next_class;
      cls[r] = it->second;
    }
  }
  for (auto& c : cls)
    if (c == detail::kNoClass) c = next_class++;
  return detail::relayout(trie, cls, end_class);
}

/**
 * Replaces childless nodes by one shared end node appended as the last
 * level. A childless node whose siblings have children keeps a zero row in
 * its parent's block, since rank addressing needs one row per child.
 */
inline LevelizedTrie merge_leaves(const LevelizedTrie& trie) {
  std::vector<std::uint32_t> cls(trie.size());
  std::uint32_t next_class = 1;
  for (NodeIndex r = 0; r < trie.size(); ++r) cls[r] = trie.nodes[r].is_childless() ? 0 : next_class++;
  return detail::relayout(trie, cls, 0u);
}

/// Every intermediate product of compilation, for reporting.
struct CompileStages {
  LevelizedTrie full;
  LevelizedTrie truncated;
  LevelizedTrie suffix_merged;
  LevelizedTrie compiled;
};

inline CompileStages compile_stages(const PatternSet& patterns, const CompileConfig& cfg) {
  cfg.validate();
  CompileStages s;
  s.full = build_trie(patterns);
  s.truncated = truncate(s.full, cfg.truncation_depth);
  s.suffix_merged = merge_suffixes(s.truncated, cfg.merge_levels);
  s.compiled = merge_leaves(s.suffix_merged);
  return s;
}

inline LevelizedTrie compile(const PatternSet& patterns, const CompileConfig& cfg) {
  cfg.validate();
  return merge_leaves(merge_suffixes(truncate(build_trie(patterns), cfg.truncation_depth), cfg.merge_levels));
}

}  // namespace crstrie
