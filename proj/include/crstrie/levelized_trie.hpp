// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crstrie/error.hpp"
#include "crstrie/pattern_set.hpp"
#include "crstrie/trie_node.hpp"

namespace crstrie {

/// Node index -> ids of the patterns whose compiled prefix ends there.
using PatternIndex = std::map<NodeIndex, std::vector<PatternId>>;

/**
 * Breadth-first, row-major bitmap trie.
 *
 * Level k occupies [level_starts[k], level_starts[k+1]). Match flags live
 * beside the nodes so that each node stays 36 bytes. After leaf merging the
 * last row is the shared end node: all-zero bitmap, zero offset, and any
 * node whose offset names it resolves every set byte to it.
 */
struct LevelizedTrie {
  std::vector<TrieNode> nodes;
  std::vector<NodeIndex> level_starts;
  std::vector<bool> match_flags;
  PatternIndex pattern_index;
  unsigned alphabet_size = 256;
  bool has_end_node = false;

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t level_count() const noexcept { return level_starts.size(); }
  std::size_t height() const noexcept { return level_starts.empty() ? 0 : level_starts.size() - 1; }

  NodeIndex level_begin(std::size_t k) const { return level_starts[k]; }
  NodeIndex level_end(std::size_t k) const {
    return k + 1 < level_starts.size() ? level_starts[k + 1] : static_cast<NodeIndex>(nodes.size());
  }
  std::size_t level_of(NodeIndex n) const {
    auto it = std::upper_bound(level_starts.begin(), level_starts.end(), n);
    return static_cast<std::size_t>(it - level_starts.begin()) - 1;
  }

  std::optional<NodeIndex> end_node() const noexcept {
    if (nodes.size() > 1 && nodes.back().is_childless()) return static_cast<NodeIndex>(nodes.size() - 1);
    return std::nullopt;
  }

  bool is_match(NodeIndex n) const { return match_flags[n]; }

  void validate() const;

  friend bool operator==(const LevelizedTrie&, const LevelizedTrie&) = default;
};

inline std::optional<NodeIndex> child_lookup(const LevelizedTrie& trie, NodeIndex node, std::uint8_t c) {
  const TrieNode& n = trie.nodes[node];
  return resolve_child(trie.end_node(), n.first_child_offset, n.has_child(c), n.rank(c));
}

inline void LevelizedTrie::validate() const {
  auto fail = [](const std::string& what) { throw InvariantError("levelized trie: " + what); };
  if (nodes.empty()) fail("no nodes");
  if (match_flags.size() != nodes.size()) fail("match flag count differs from node count");
  if (level_starts.empty() || level_starts[0] != 0) fail("level_starts must begin at 0");
  for (std::size_t k = 1; k < level_starts.size(); ++k)
    if (level_starts[k] <= level_starts[k - 1]) fail("level_starts not strictly increasing");
  if (level_starts.back() >= nodes.size()) fail("empty last level");

  const auto end = end_node();
  const auto total = static_cast<std::uint64_t>(nodes.size());
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const TrieNode& n = nodes[i];
    if (n.is_childless()) {
      if (!match_flags[i]) fail("childless node " + std::to_string(i) + " is not a match");
      continue;
    }
    const bool to_end = end && n.first_child_offset == *end;
    if (!to_end && std::uint64_t{n.first_child_offset} + n.child_count() > total)
      fail("children of node " + std::to_string(i) + " run past the array");
    const std::size_t next_level = level_of(i) + 1;
    n.for_each_label([&](std::uint8_t c) {
      const NodeIndex child = *child_lookup(*this, i, c);
      if (end && child == *end) return;
      if (child >= nodes.size() || level_of(child) != next_level)
        fail("child of node " + std::to_string(i) + " is not in the next level");
    });
  }
  if (has_end_node) {
    if (!end) fail("end node flagged but last row has children");
    if (nodes.back().first_child_offset != 0) fail("end node offset must be zero");
    if (level_starts.back() != *end) fail("end node must form the last level alone");
  }
  for (const auto& [node, ids] : pattern_index) {
    if (node >= nodes.size()) fail("pattern index names a missing node");
    if (!match_flags[node]) fail("pattern index names a non-match node");
  }
}

}  // namespace crstrie
