// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "crstrie/bench.hpp"
#include "crstrie/compiler.hpp"
#include "crstrie/crs.hpp"
#include "crstrie/error.hpp"
#include "crstrie/levelized_trie.hpp"
#include "crstrie/matcher.hpp"
#include "crstrie/pattern_io.hpp"
#include "crstrie/pattern_set.hpp"
#include "crstrie/serialize.hpp"
#include "crstrie/trie_node.hpp"
