// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

// Acceptance runner. Usage: crstrie_acceptance <1..7|all> [corpus]
// Prints one PASS/FAIL line per criterion; exit status 0 only if all pass.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "crstrie/crstrie.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace crstrie;

namespace {

std::string g_corpus_path;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

unsigned trial_alphabet(std::uint64_t trial) { return trial % 2 ? 4 : 256; }

gen::Case trial_case(std::uint64_t trial) { return gen::random_case(trial, trial_alphabet(trial), 50, 12, 64 * 1024); }

LevelizedTrie random_compiled(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const unsigned alphabet = trial_alphabet(seed);
  const PatternSet ps(gen::random_patterns(rng, alphabet, 50, 12), alphabet);
  const unsigned depth = 1 + static_cast<unsigned>(rng() % 12);
  const unsigned merge = static_cast<unsigned>(rng() % (depth + 1));
  return compile(ps, CompileConfig{depth, merge, true});
}

const TextBuffer& corpus() {
  static const TextBuffer buf = TextBuffer::load(g_corpus_path);
  return buf;
}

void oracle_equivalence(Outcome& o) {
  std::size_t positions = 0, pairs = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const auto cs = trial_case(trial);
    const PatternSet ps(cs.patterns, cs.alphabet);
    const std::vector<std::string> pats(ps.patterns().begin(), ps.patterns().end());
    const auto crs = encode_crs(compile(ps, CompileConfig{8, 3, true}));
    const auto records = match_all(crs, cs.text, ScanConfig{1 + static_cast<unsigned>(trial % 4), 4096, true}, ps);
    std::set<std::pair<std::uint64_t, std::uint32_t>> got;
    for (const auto& r : records)
      for (auto id : r.pattern_ids) got.emplace(r.position, id);
    const auto want = oracle::brute_force_scan(pats, cs.text);
    if (got != want) o.fail("trial " + std::to_string(trial));
    positions += cs.text.size();
    pairs += want.size();
  }
  o.detail << "1000 trials, " << positions << " text positions, " << pairs << " (position, id) pairs";
}

void crs_equivalence(Outcome& o) {
  std::size_t cells = 0, lookups = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto t = random_compiled(5000 + seed);
    const auto dense = to_dense(t);
    const auto crs = encode_crs(t);
    for (std::size_t r = 0; r < dense.rows; ++r) {
      for (std::size_t c = 0; c < kNodeColumns; ++c, ++cells)
        if (crs_lookup(crs, r, c) != dense.cell(r, c)) o.fail("seed " + std::to_string(seed) + " cell");
      for (unsigned b = 0; b < 256; ++b, ++lookups) {
        const auto byte = static_cast<std::uint8_t>(b);
        const auto node = static_cast<NodeIndex>(r);
        if (child_lookup_crs(crs, node, byte) != child_lookup(t, node, byte))
          o.fail("seed " + std::to_string(seed) + " child");
      }
    }
  }
  o.detail << "100 tries, " << cells << " cells, " << lookups << " child lookups";
}

void check_storage(Outcome& o, const CrsTrie& crs, const std::string& name) {
  const std::size_t formula = 2 * crs.nnz() + crs.rows + 1;
  const std::size_t actual = crs.val.size() + crs.col_ind.size() + crs.row_ptr.size();
  if (storage_cost(crs) != formula || formula != actual) o.fail(name);
}

void storage_formula(Outcome& o) {
  std::size_t tries = 0;
  for (std::size_t length : {8u, 12u, 16u, 32u}) {
    for (std::uint32_t seed : {5489u, 1u}) {
      const auto ps = sample_patterns(corpus().view(), 1000, length, seed);
      const auto crs = encode_crs(compile(ps, CompileConfig{8, 3, true}));
      check_storage(o, crs, "kjv length " + std::to_string(length));
      ++tries;
    }
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed, ++tries)
    check_storage(o, encode_crs(random_compiled(9000 + seed)), "random " + std::to_string(seed));
  o.detail << tries << " tries checked";
}

void compression(Outcome& o) {
  const auto r = run_compression_bench(g_corpus_path, 1000, 16, 5489, CompileConfig{8, 3, true});
  const double vs_original = r.ratio("crs", "original");
  const double vs_merged = r.ratio("crs", "merged");
  o.detail << std::fixed << std::setprecision(4) << "original " << r.stage("original").elements << ", merged "
           << r.stage("merged").elements << ", crs " << r.stage("crs").elements << "; crs/original " << vs_original
           << " (limit 0.25), crs/merged " << vs_merged << " (limit 0.55); ";
  if (!(vs_original <= 0.25)) o.fail("crs/original above 0.25");
  if (!(vs_merged <= 0.55)) o.fail("crs/merged above 0.55");
}

void throughput(Outcome& o) {
  const auto ps = sample_patterns(corpus().view(), 1000, 16, 5489);
  const auto crs = encode_crs(compile(ps, CompileConfig{8, 3, true}));

  const auto base = match_all(crs, corpus().view(), ScanConfig{1, 1 << 16, true}, ps);
  for (unsigned p : {2u, 8u})
    if (match_all(crs, corpus().view(), ScanConfig{p, 1 << 16, true}, ps) != base)
      o.fail("match set differs at parallelism " + std::to_string(p));
  o.detail << "determinism: " << base.size() << " records identical at 1/2/8; ";

  const std::string text = synthesize_text(corpus().view(), std::size_t{100} << 20, 5489);
  const auto r = measure_throughput(crs, text, {1, 8}, 10);
  const double s = r.speedup(8);
  o.detail << std::fixed << std::setprecision(3) << "scaling: " << text.size() << " bytes, median "
           << r.levels[0].median_seconds << " s at 1, " << r.levels[1].median_seconds << " s at 8, speedup " << s
           << " (floor 3.0), hardware threads " << std::thread::hardware_concurrency() << "; ";
  if (!(s >= 3.0)) o.fail("speedup below 3x");
}

void serialization(Outcome& o) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto crs = encode_crs(random_compiled(13000 + seed));
    const auto bytes = serialize(crs);
    const auto back = deserialize(bytes);
    if (!(back == crs) || serialize(back) != bytes) o.fail("round trip seed " + std::to_string(seed));
  }

  const auto crs = encode_crs(compile(PatternSet({"abc", "abd", "xyz"}), CompileConfig{8, 3, true}));
  const auto good = serialize(crs);
  auto expect = [&](const std::string& name, std::string bytes, auto tag) {
    using Want = decltype(tag);
    try {
      deserialize(bytes);
      o.fail(name + " accepted");
    } catch (const Want& e) {
      if constexpr (std::is_same_v<Want, FormatError>)
        if (dynamic_cast<const TruncatedError*>(&e)) o.fail(name + " reported as truncation");
    } catch (const std::exception& e) {
      o.fail(name + " wrong error: " + e.what());
    }
  };

  auto bad_magic = good;
  bad_magic[0] = 'X';
  expect("bad magic", bad_magic, FormatError(""));

  // row_ptr begins after magic(4), version(2), alphabet(1), rows(4), nnz(4).
  auto non_monotone = good;
  const std::uint32_t v = crs.row_ptr[2] + 1;
  for (int i = 0; i < 4; ++i) non_monotone[15 + 4 + i] = static_cast<char>(v >> (8 * i));
  expect("non-monotone row_ptr", non_monotone, InvariantError(""));

  const std::size_t val_start = 15 + 4 * (crs.rows + 1) + crs.nnz();
  expect("truncated val", good.substr(0, val_start + 2), TruncatedError(""));

  o.detail << "100 round trips; bad magic, non-monotone row_ptr, truncated val";
}

void idempotence(Outcome& o) {
  std::size_t checked = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const auto cs = trial_case(trial);
    const PatternSet ps(cs.patterns, cs.alphabet);
    for (unsigned merge : {0u, 1u, 3u}) {
      const CompileConfig cfg{8, merge, true};
      const auto s = compile_stages(ps, cfg);
      const std::string tag = "trial " + std::to_string(trial) + " merge " + std::to_string(merge);
      if (merge_suffixes(s.suffix_merged, merge) != s.suffix_merged) o.fail(tag + " merge_suffixes");
      if (merge_leaves(s.compiled) != s.compiled) o.fail(tag + " merge_leaves");
      const std::size_t elements[] = {s.full.size() * kNodeColumns, s.truncated.size() * kNodeColumns,
                                      s.suffix_merged.size() * kNodeColumns, s.compiled.size() * kNodeColumns,
                                      to_dense(s.compiled).cells.size()};
      for (std::size_t i = 1; i < std::size(elements); ++i)
        if (elements[i] > elements[i - 1]) o.fail(tag + " stage " + std::to_string(i) + " grew");
      ++checked;
    }
  }
  o.detail << checked << " compilations (1000 trial inputs x merge levels 0, 1, 3)";
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence", oracle_equivalence},
    {2, "CRS structural equivalence", crs_equivalence},
    {3, "storage formula exactness", storage_formula},
    {4, "compression reproduction", compression},
    {5, "throughput determinism and scaling", throughput},
    {6, "serialization", serialization},
    {7, "idempotence and monotonicity", idempotence},
};

bool run(const Criterion& c) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << " [" << std::fixed
            << std::setprecision(1) << secs << " s] " << o.detail.str() << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: crstrie_acceptance <1..7|all> [corpus]\n";
    return 1;
  }
  const std::string which = argv[1];
  g_corpus_path = argc > 2 ? argv[2] : CRSTRIE_DEFAULT_CORPUS;
  bool ok = true;
  bool ran = false;
  for (const auto& c : kCriteria) {
    if (which == "all" || which == std::to_string(c.id)) {
      ok = run(c) && ok;
      ran = true;
    }
  }
  if (!ran) {
    std::cerr << "unknown criterion: " << which << '\n';
    return 1;
  }
  return ok ? 0 : 1;
}
