// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

// Compiles a few patterns, scans a short text and prints verified matches.

#include <iostream>

#include "crstrie/crstrie.hpp"

int main() {
  using namespace crstrie;
  const PatternSet patterns({"he", "she", "his", "hers", "the beginning"});
  const CrsTrie trie = encode_crs(compile(patterns, CompileConfig::defaults_for(patterns)));

  const std::string text = "In the beginning she said his hers was here";
  for (const auto& m : match_all(trie, text, ScanConfig{2, 8, true}, patterns)) {
    std::cout << m.position << ' ';
    for (auto id : m.pattern_ids) std::cout << patterns[id] << ' ';
    if (m.prefix_only) std::cout << "(prefix only)";
    std::cout << '\n';
  }
  std::cout << "rows " << trie.rows << ", nnz " << trie.nnz() << ", storage " << storage_cost(trie) << " words\n";
}
