// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "crstrie/error.hpp"

// Pattern files come in two flavours:
//   text   - one pattern per line; `\xHH` encodes any byte, `\\` a backslash.
//            Empty lines are ignored.
//   binary - repeated records of a u32 little-endian length and that many bytes.

namespace crstrie {

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace detail

inline std::string unescape_pattern(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '\\') {
      out.push_back(line[i]);
      continue;
    }
    if (i + 1 < line.size() && line[i + 1] == '\\') {
      out.push_back('\\');
      ++i;
      continue;
    }
    if (i + 3 < line.size() && line[i + 1] == 'x') {
      const int hi = detail::hex_digit(line[i + 2]);
      const int lo = detail::hex_digit(line[i + 3]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 3;
        continue;
      }
    }
    throw EncodingError("malformed escape in pattern line: " + std::string(line));
  }
  return out;
}

inline std::string escape_pattern(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size());
  for (unsigned char c : bytes) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c < 0x20 || c >= 0x7f) {
      out += "\\x";
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

inline std::vector<std::string> read_text_patterns(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(unescape_pattern(line));
  }
  return out;
}

inline void write_text_patterns(std::ostream& out, const std::vector<std::string>& patterns) {
  for (const auto& p : patterns) out << escape_pattern(p) << '\n';
}

inline std::vector<std::string> read_binary_patterns(std::istream& in) {
  std::vector<std::string> out;
  for (;;) {
    unsigned char len_bytes[4];
    in.read(reinterpret_cast<char*>(len_bytes), 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4) throw TruncatedError("truncated length prefix in binary pattern file");
    const std::uint32_t len = std::uint32_t{len_bytes[0]} | std::uint32_t{len_bytes[1]} << 8 |
                              std::uint32_t{len_bytes[2]} << 16 | std::uint32_t{len_bytes[3]} << 24;
    std::string p(len, '\0');
    in.read(p.data(), len);
    if (static_cast<std::uint32_t>(in.gcount()) != len)
      throw TruncatedError("truncated pattern body in binary pattern file");
    out.push_back(std::move(p));
  }
  return out;
}

inline void write_binary_patterns(std::ostream& out, const std::vector<std::string>& patterns) {
  for (const auto& p : patterns) {
    const auto len = static_cast<std::uint32_t>(p.size());
    const char prefix[4] = {static_cast<char>(len), static_cast<char>(len >> 8),
                            static_cast<char>(len >> 16), static_cast<char>(len >> 24)};
    out.write(prefix, 4);
    out.write(p.data(), static_cast<std::streamsize>(p.size()));
  }
}

enum class PatternFormat { kText, kBinary };

inline std::vector<std::string> load_patterns(const std::string& path, PatternFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pattern file: " + path);
  return format == PatternFormat::kText ? read_text_patterns(in) : read_binary_patterns(in);
}

}  // namespace crstrie
