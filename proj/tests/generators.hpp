// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

// Random inputs for property tests. Deterministic for a given seed.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "crstrie/levelized_trie.hpp"

namespace gen {

struct Case {
  std::vector<std::string> patterns;
  unsigned alphabet = 256;
  std::string text;
};

inline std::string random_bytes(std::mt19937_64& rng, std::size_t n, unsigned alphabet) {
  std::uniform_int_distribution<unsigned> sym(0, alphabet - 1);
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(sym(rng));
  return s;
}

/// Up to `max_patterns` patterns of length 1..max_len. With a large alphabet
/// patterns share prefixes with each other, so truncation and merging have
/// something to do.
inline std::vector<std::string> random_patterns(std::mt19937_64& rng, unsigned alphabet, std::size_t max_patterns,
                                                std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> count_d(1, max_patterns), len_d(1, max_len);
  const std::size_t count = count_d(rng);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string p;
    if (!out.empty() && rng() % 2) {
      const auto& base = out[rng() % out.size()];
      p = base.substr(0, 1 + rng() % base.size());
    }
    const std::size_t len = len_d(rng);
    if (p.size() < len) p += random_bytes(rng, len - p.size(), alphabet);
    else p.resize(len);
    out.push_back(std::move(p));
  }
  return out;
}

/// Random text with pattern occurrences (some cut short) planted in it.
inline std::string planted_text(std::mt19937_64& rng, const std::vector<std::string>& patterns, unsigned alphabet,
                                std::size_t len) {
  std::string text = random_bytes(rng, len, alphabet);
  if (text.empty()) return text;
  const std::size_t plants = 1 + len / 64;
  for (std::size_t i = 0; i < plants; ++i) {
    std::string p = patterns[rng() % patterns.size()];
    if (rng() % 4 == 0 && p.size() > 1) p.resize(1 + rng() % (p.size() - 1));
    const std::size_t at = rng() % text.size();
    const std::size_t n = std::min(p.size(), text.size() - at);
    text.replace(at, n, p, 0, n);
  }
  return text;
}

inline Case random_case(std::uint64_t seed, unsigned alphabet, std::size_t max_patterns = 50,
                        std::size_t max_len = 12, std::size_t max_text = 64 * 1024) {
  std::mt19937_64 rng(seed);
  Case c;
  c.alphabet = alphabet;
  c.patterns = random_patterns(rng, alphabet, max_patterns, max_len);
  std::uniform_int_distribution<std::size_t> text_len(0, max_text);
  c.text = planted_text(rng, c.patterns, alphabet, text_len(rng));
  return c;
}

/// Is `s` a root path of the trie under the child-rank rule?
inline bool accepts_path(const crstrie::LevelizedTrie& t, std::string_view s) {
  crstrie::NodeIndex n = 0;
  for (unsigned char c : s) {
    const auto next = crstrie::child_lookup(t, n, c);
    if (!next) return false;
    n = *next;
  }
  return true;
}

/// Calls f on every string over [0, alphabet) of length 0..max_len.
template <class F>
void for_each_string(unsigned alphabet, std::size_t max_len, F&& f) {
  std::string s;
  auto rec = [&](auto&& self) -> void {
    f(std::string_view(s));
    if (s.size() == max_len) return;
    for (unsigned c = 0; c < alphabet; ++c) {
      s.push_back(static_cast<char>(c));
      self(self);
      s.pop_back();
    }
  };
  rec(rec);
}

}  // namespace gen
