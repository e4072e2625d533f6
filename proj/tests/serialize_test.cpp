// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#include "crstrie/serialize.hpp"

#include <gtest/gtest.h>

#include <random>

#include "crstrie/compiler.hpp"
#include "generators.hpp"

using namespace crstrie;

namespace {

CrsTrie crs_of(std::vector<std::string> p) {
  return encode_crs(compile(PatternSet(std::move(p)), CompileConfig{8, 3, true}));
}

void put_u32(std::string& s, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s[at + i] = static_cast<char>(v >> (8 * i));
}

}  // namespace

TEST(Serialize, SingleSymbolLayout) {
  const auto crs = crs_of({"a"});
  const std::string bytes = serialize(crs);
  // magic 4 + version 2 + alphabet 1 + rows 4 + nnz 4 + row_ptr 12 + col_ind 2
  // + val 8 + flags 1 + index count 4 + one entry (4 + 4 + 4)
  EXPECT_EQ(bytes.size(), 54u);
  EXPECT_EQ(bytes.substr(0, 4), "CRST");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 255);
  EXPECT_EQ(deserialize(bytes), crs);
}

TEST(Serialize, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const unsigned alphabet = seed % 2 ? 4 : 256;
    std::mt19937_64 rng(seed);
    const auto crs =
        encode_crs(compile(PatternSet(gen::random_patterns(rng, alphabet, 50, 12), alphabet), CompileConfig{8, 3, true}));
    const auto bytes = serialize(crs);
    const auto back = deserialize(bytes);
    EXPECT_EQ(back, crs);
    EXPECT_EQ(serialize(back), bytes);
  }
}

TEST(Deserialize, BadMagic) {
  auto bytes = serialize(crs_of({"abc"}));
  bytes[0] = 'X';
  EXPECT_THROW(
      {
        try {
          deserialize(bytes);
        } catch (const TruncatedError&) {
          FAIL() << "bad magic reported as truncation";
        }
      },
      FormatError);
}

TEST(Deserialize, BadVersion) {
  auto bytes = serialize(crs_of({"abc"}));
  bytes[4] = 2;
  EXPECT_THROW(deserialize(bytes), FormatError);
}

TEST(Deserialize, NonMonotoneRowPtr) {
  const auto crs = crs_of({"abc", "abd", "xyz"});
  auto bytes = serialize(crs);
  // row_ptr starts at byte 15; make row_ptr[1] exceed row_ptr[2].
  put_u32(bytes, 15 + 4, crs.row_ptr[2] + 1);
  EXPECT_THROW(deserialize(bytes), InvariantError);
}

TEST(Deserialize, TruncatedVal) {
  const auto crs = crs_of({"abc", "abd"});
  const auto bytes = serialize(crs);
  const std::size_t val_start = 15 + 4 * (crs.rows + 1) + crs.nnz();
  EXPECT_THROW(deserialize(std::string_view(bytes).substr(0, val_start + 6)), TruncatedError);
  EXPECT_THROW(deserialize(std::string_view(bytes).substr(0, bytes.size() - 1)), TruncatedError);
}

TEST(Deserialize, TrailingBytes) {
  auto bytes = serialize(crs_of({"abc"}));
  bytes.push_back('\0');
  EXPECT_THROW(deserialize(bytes), FormatError);
}

TEST(Deserialize, EmptyStream) { EXPECT_THROW(deserialize(""), FormatError); }
