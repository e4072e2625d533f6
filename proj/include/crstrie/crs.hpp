// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crstrie/error.hpp"
#include "crstrie/levelized_trie.hpp"
#include "crstrie/trie_node.hpp"

namespace crstrie {

/// One row per node: bitmap words in columns 0..7, first-child offset in column 8.
struct DenseNodeMatrix {
  std::size_t rows = 0;
  std::vector<std::uint32_t> cells;

  static constexpr std::size_t cols = kNodeColumns;

  std::uint32_t cell(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
  std::uint32_t& cell(std::size_t r, std::size_t c) { return cells[r * cols + c]; }

  TrieNode node(std::size_t r) const {
    TrieNode n;
    for (std::size_t w = 0; w < kBitmapWords; ++w) n.bitmap[w] = cell(r, w);
    n.first_child_offset = cell(r, kOffsetColumn);
    return n;
  }

  friend bool operator==(const DenseNodeMatrix&, const DenseNodeMatrix&) = default;
};

/**
 * Compressed Row Storage of the node matrix.
 *
 * Row r's non-zero cells are val[row_ptr[r] .. row_ptr[r+1]) with their
 * columns in col_ind, ascending. Zero cells, including the end node's
 * whole row, are not stored. Match flags and the pattern index ride along
 * unchanged from the levelized trie.
 */
struct CrsTrie {
  std::uint32_t rows = 0;
  std::vector<std::uint32_t> val;
  std::vector<std::uint8_t> col_ind;
  std::vector<std::uint32_t> row_ptr{0};
  std::vector<bool> match_flags;
  PatternIndex pattern_index;
  unsigned alphabet_size = 256;

  std::size_t nnz() const noexcept { return val.size(); }

  std::optional<NodeIndex> end_node() const noexcept {
    if (rows > 1 && row_ptr[rows - 1] == row_ptr[rows]) return rows - 1;
    return std::nullopt;
  }

  bool is_match(NodeIndex n) const { return match_flags[n]; }

  void validate() const;

  friend bool operator==(const CrsTrie&, const CrsTrie&) = default;
};

inline DenseNodeMatrix to_dense(const LevelizedTrie& trie) {
  DenseNodeMatrix m;
  m.rows = trie.size();
  m.cells.resize(m.rows * DenseNodeMatrix::cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const TrieNode& n = trie.nodes[r];
    for (std::size_t w = 0; w < kBitmapWords; ++w) m.cell(r, w) = n.bitmap[w];
    m.cell(r, kOffsetColumn) = n.first_child_offset;
  }
  return m;
}

/// Encodes the matrix only; see the LevelizedTrie overload for a complete trie.
inline CrsTrie encode_crs(const DenseNodeMatrix& m) {
  if (m.cells.size() != m.rows * DenseNodeMatrix::cols)
    throw InvariantError("dense matrix cell count is not rows x 9");
  CrsTrie crs;
  crs.rows = static_cast<std::uint32_t>(m.rows);
  crs.row_ptr.reserve(m.rows + 1);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < DenseNodeMatrix::cols; ++c) {
      if (const auto v = m.cell(r, c); v != 0) {
        crs.val.push_back(v);
        crs.col_ind.push_back(static_cast<std::uint8_t>(c));
      }
    }
    crs.row_ptr.push_back(static_cast<std::uint32_t>(crs.val.size()));
  }
  crs.match_flags.assign(m.rows, false);
  return crs;
}

inline CrsTrie encode_crs(const LevelizedTrie& trie) {
  CrsTrie crs = encode_crs(to_dense(trie));
  crs.match_flags = trie.match_flags;
  crs.pattern_index = trie.pattern_index;
  crs.alphabet_size = trie.alphabet_size;
  return crs;
}

inline DenseNodeMatrix decode_dense(const CrsTrie& crs) {
  DenseNodeMatrix m;
  m.rows = crs.rows;
  m.cells.assign(m.rows * DenseNodeMatrix::cols, 0);
  for (std::uint32_t r = 0; r < crs.rows; ++r)
    for (auto i = crs.row_ptr[r]; i < crs.row_ptr[r + 1]; ++i) m.cell(r, crs.col_ind[i]) = crs.val[i];
  return m;
}

/// Random access into the encoded matrix by binary search within the row.
inline std::uint32_t crs_lookup(const CrsTrie& crs, std::size_t row, std::size_t col) {
  if (row >= crs.rows) throw BoundsError("row " + std::to_string(row) + " out of range");
  if (col >= kNodeColumns) throw BoundsError("column " + std::to_string(col) + " out of range");
  const auto first = crs.col_ind.begin() + crs.row_ptr[row];
  const auto last = crs.col_ind.begin() + crs.row_ptr[row + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::uint8_t>(col));
  if (it == last || *it != col) return 0;
  return crs.val[static_cast<std::size_t>(it - crs.col_ind.begin())];
}

/// Stored element count, 2*nnz + n + 1 (32-bit words).
inline std::size_t storage_cost(const CrsTrie& crs) noexcept { return 2 * crs.nnz() + crs.rows + 1; }

/**
 * Rank-rule child lookup directly on the encoded rows: one pass over the
 * row's stored words, popcounting those left of c's word, testing c's bit
 * and picking up the offset column.
 */
inline std::optional<NodeIndex> child_lookup_crs(const CrsTrie& crs, NodeIndex node, std::uint8_t c) noexcept {
  const std::size_t word = TrieNode::word_of(c);
  auto i = crs.row_ptr[node];
  const auto e = crs.row_ptr[node + 1];
  unsigned rank = 0;
  // Columns are ascending and the offset column sorts last.
  for (; i < e && crs.col_ind[i] < word; ++i) rank += std::popcount(crs.val[i]);
  if (i == e || crs.col_ind[i] != word) return std::nullopt;
  const std::uint32_t mask = TrieNode::mask_of(c);
  if (!(crs.val[i] & mask)) return std::nullopt;
  rank += std::popcount(crs.val[i] & (mask - 1));
  const std::uint32_t offset = crs.col_ind[e - 1] == kOffsetColumn ? crs.val[e - 1] : 0;
  return resolve_child(crs.end_node(), offset, true, rank);
}

inline void CrsTrie::validate() const {
  auto fail = [](const std::string& what) { throw InvariantError("crs trie: " + what); };
  if (rows == 0) fail("no rows");
  if (row_ptr.size() != std::size_t{rows} + 1) fail("row_ptr length is not rows + 1");
  if (row_ptr[0] != 0) fail("row_ptr[0] is not zero");
  for (std::size_t r = 0; r < rows; ++r)
    if (row_ptr[r + 1] < row_ptr[r]) fail("row_ptr is not non-decreasing at row " + std::to_string(r));
  if (row_ptr[rows] != val.size() || col_ind.size() != val.size())
    fail("row_ptr[rows], val and col_ind lengths disagree");
  if (match_flags.size() != rows) fail("match flag count differs from row count");
  if (alphabet_size < 2 || alphabet_size > 256) fail("alphabet size out of range");

  const auto end = end_node();
  for (std::uint32_t r = 0; r < rows; ++r) {
    std::uint64_t children = 0;
    std::uint64_t offset = 0;
    for (auto i = row_ptr[r]; i < row_ptr[r + 1]; ++i) {
      if (val[i] == 0) fail("stored zero value in row " + std::to_string(r));
      if (col_ind[i] >= kNodeColumns) fail("column index out of range in row " + std::to_string(r));
      if (i > row_ptr[r] && col_ind[i] <= col_ind[i - 1])
        fail("column indices not strictly increasing in row " + std::to_string(r));
      if (col_ind[i] == kOffsetColumn)
        offset = val[i];
      else
        children += std::popcount(val[i]);
    }
    if (children == 0 && !match_flags[r]) fail("childless row " + std::to_string(r) + " is not a match");
    if (children > 0 && !(end && offset == *end) && offset + children > rows)
      fail("children of row " + std::to_string(r) + " run past the matrix");
  }
  for (const auto& [node, ids] : pattern_index)
    if (node >= rows) fail("pattern index names a missing row");
}

}  // namespace crstrie
