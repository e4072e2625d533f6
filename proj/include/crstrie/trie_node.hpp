// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace crstrie {

using NodeIndex = std::uint32_t;

inline constexpr std::size_t kBitmapWords = 8;
/// Columns of the node matrix: eight bitmap words, then the offset.
inline constexpr std::size_t kNodeColumns = kBitmapWords + 1;
inline constexpr std::size_t kOffsetColumn = kBitmapWords;
inline constexpr std::size_t kNodeBytes = kNodeColumns * sizeof(std::uint32_t);

/**
 * Bitmapped trie node.
 *
 * Bit b of word w marks a child labelled with byte 32*w + b. Children are
 * stored consecutively, in ascending byte order, starting at
 * first_child_offset; the child for byte c sits at
 * first_child_offset + (number of set bits below c).
 */
struct TrieNode {
  std::array<std::uint32_t, kBitmapWords> bitmap{};
  std::uint32_t first_child_offset = 0;

  static constexpr std::size_t word_of(std::uint8_t c) noexcept { return c >> 5; }
  static constexpr std::uint32_t mask_of(std::uint8_t c) noexcept { return 1u << (c & 31); }

  bool has_child(std::uint8_t c) const noexcept { return bitmap[word_of(c)] & mask_of(c); }
  void set_child(std::uint8_t c) noexcept { bitmap[word_of(c)] |= mask_of(c); }

  unsigned child_count() const noexcept {
    unsigned n = 0;
    for (auto w : bitmap) n += std::popcount(w);
    return n;
  }

  bool is_childless() const noexcept {
    for (auto w : bitmap)
      if (w) return false;
    return true;
  }

  // Number of set bits strictly below c.
  unsigned rank(std::uint8_t c) const noexcept {
    const std::size_t w = word_of(c);
    unsigned r = std::popcount(bitmap[w] & (mask_of(c) - 1));
    for (std::size_t i = 0; i < w; ++i) r += std::popcount(bitmap[i]);
    return r;
  }

  /// Plain rank rule: offset + rank(c), or nothing when bit c is clear.
  std::optional<NodeIndex> child_index(std::uint8_t c) const noexcept {
    if (!has_child(c)) return std::nullopt;
    return first_child_offset + rank(c);
  }

  template <class F>
  void for_each_label(F&& f) const {
    for (std::size_t w = 0; w < kBitmapWords; ++w) {
      std::uint32_t bits = bitmap[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(static_cast<std::uint8_t>(w * 32 + b));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const TrieNode&, const TrieNode&) = default;
};

static_assert(sizeof(TrieNode) == kNodeBytes, "node must serialize to 36 bytes");

/**
 * Child addressing shared by the levelized and CRS views.
 *
 * `end_node` is the index of the shared terminal node when the last row is
 * childless, or nullopt. A node whose offset names the end node resolves
 * every set byte to it, so parents of several merged leaves need only the
 * one end row.
 */
inline std::optional<NodeIndex> resolve_child(std::optional<NodeIndex> end_node,
                                              std::uint32_t offset, bool bit_set,
                                              unsigned rank) noexcept {
  if (!bit_set) return std::nullopt;
  if (end_node && offset == *end_node) return offset;
  return offset + rank;
}

}  // namespace crstrie
