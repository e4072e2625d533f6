// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "crstrie/crs.hpp"
#include "crstrie/error.hpp"

// Compiled trie file (.crst), all integers little-endian:
//
//   "CRST"                 magic
//   u16                    version (1)
//   u8                     alphabet size - 1
//   u32 rows, u32 nnz
//   u32 x (rows + 1)       row_ptr
//   u8  x nnz              col_ind
//   u32 x nnz              val
//   ceil(rows / 8) bytes   match flags, bit r%8 of byte r/8
//   u32 entries, then per entry: u32 node, u32 count, u32 x count ids

namespace crstrie {

inline constexpr std::string_view kCrstMagic = "CRST";
inline constexpr std::uint16_t kCrstVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view in) : in_(in) {}

  std::uint8_t u8() {
    need(1, "byte");
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint16_t u16() {
    need(2, "u16");
    std::uint16_t v = static_cast<std::uint8_t>(in_[pos_]) | static_cast<std::uint8_t>(in_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what = "u32") {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(in_[pos_ + i])} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) throw TruncatedError(std::string("stream ends inside ") + what);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string serialize(const CrsTrie& crs) {
  detail::ByteWriter w;
  w.raw(kCrstMagic);
  w.u16(kCrstVersion);
  w.u8(static_cast<std::uint8_t>(crs.alphabet_size - 1));
  w.u32(crs.rows);
  w.u32(static_cast<std::uint32_t>(crs.nnz()));
  for (auto p : crs.row_ptr) w.u32(p);
  for (auto c : crs.col_ind) w.u8(c);
  for (auto v : crs.val) w.u32(v);
  for (std::size_t base = 0; base < crs.rows; base += 8) {
    std::uint8_t byte = 0;
    for (std::size_t b = 0; b < 8 && base + b < crs.rows; ++b)
      if (crs.match_flags[base + b]) byte |= static_cast<std::uint8_t>(1u << b);
    w.u8(byte);
  }
  w.u32(static_cast<std::uint32_t>(crs.pattern_index.size()));
  for (const auto& [node, ids] : crs.pattern_index) {
    w.u32(node);
    w.u32(static_cast<std::uint32_t>(ids.size()));
    for (auto id : ids) w.u32(id);
  }
  return w.take();
}

/// Parses and validates a .crst stream. Throws FormatError, TruncatedError
/// or InvariantError.
inline CrsTrie deserialize(std::string_view bytes) {
  detail::ByteReader r(bytes);
  if (r.remaining() < kCrstMagic.size() || bytes.substr(0, kCrstMagic.size()) != kCrstMagic)
    throw FormatError("bad magic: not a compiled trie file");
  r.bytes(kCrstMagic.size(), "magic");
  if (const auto version = r.u16(); version != kCrstVersion)
    throw FormatError("unsupported version " + std::to_string(version));

  CrsTrie crs;
  crs.alphabet_size = unsigned{r.u8()} + 1;
  crs.rows = r.u32("row count");
  const std::uint32_t nnz = r.u32("nnz");
  // Cheap upper bound before allocating: every row costs at least 4 bytes of row_ptr.
  if (std::uint64_t{crs.rows} * 4 + std::uint64_t{nnz} * 5 > r.remaining())
    throw TruncatedError("stream shorter than declared rows/nnz");

  crs.row_ptr.resize(std::size_t{crs.rows} + 1);
  for (auto& p : crs.row_ptr) p = r.u32("row_ptr");
  const auto cols = r.bytes(nnz, "col_ind");
  crs.col_ind.assign(cols.begin(), cols.end());
  crs.val.resize(nnz);
  for (auto& v : crs.val) v = r.u32("val");
  const auto flags = r.bytes((std::size_t{crs.rows} + 7) / 8, "match flags");
  crs.match_flags.resize(crs.rows);
  for (std::size_t i = 0; i < crs.rows; ++i)
    crs.match_flags[i] = (static_cast<std::uint8_t>(flags[i / 8]) >> (i % 8)) & 1;

  const std::uint32_t entries = r.u32("pattern index size");
  for (std::uint32_t e = 0; e < entries; ++e) {
    const NodeIndex node = r.u32("pattern index node");
    const std::uint32_t count = r.u32("pattern index count");
    if (std::uint64_t{count} * 4 > r.remaining()) throw TruncatedError("stream ends inside pattern ids");
    std::vector<PatternId> ids(count);
    for (auto& id : ids) id = r.u32("pattern id");
    if (!crs.pattern_index.emplace(node, std::move(ids)).second)
      throw InvariantError("crs trie: duplicate pattern index entry for row " + std::to_string(node));
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after compiled trie");
  crs.validate();
  return crs;
}

inline void save_crs(const CrsTrie& crs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const auto bytes = serialize(crs);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline CrsTrie load_crs(const std::string& path) { return deserialize(read_file(path)); }

}  // namespace crstrie
