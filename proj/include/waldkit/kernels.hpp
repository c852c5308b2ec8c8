#pragma once

// Data-parallel loops shared by the validators. Each kernel has a serial
// reference version; the OpenMP versions must return identical results
// (including which violation is reported), which the tests and the
// benchmark compare.

#include <cstdint>
#include <optional>
#include <vector>

#include "waldkit/fincat.hpp"

namespace waldkit::kernels {

struct AssocViolation {
  MorId h = kNone;
  MorId g = kNone;
  MorId f = kNone;
};

// First (lowest f, then g, then h) triple with h(gf) != (hg)f.
std::optional<AssocViolation> associativity_serial(const FinCat& c);
std::optional<AssocViolation> associativity_parallel(const FinCat& c);

// Number of triples (f, g, h) visited by the associativity check.
std::uint64_t composable_triples(const FinCat& c);
std::uint64_t composable_pairs(const FinCat& c);

// Per-(a,b,c) composition tables: entry for (g, f) with f in Hom(a,b) and g in
// Hom(b,c) sits at offset[(a*n+b)*n+c] + local(f)*|Hom(b,c)| + local(g).
struct BlockLayout {
  std::size_t n = 0;
  std::vector<std::int64_t> offset;  // -1 for empty blocks
  std::size_t total = 0;
};
BlockLayout block_layout(const FinCat& c);
std::vector<MorId> block_table_serial(const FinCat& c, const BlockLayout& layout);
std::vector<MorId> block_table_parallel(const FinCat& c, const BlockLayout& layout);

// Runs `body(i)` for i in [0, n) and collects the results in index order.
// Used to fill pushout tables: searches run concurrently, results are
// consumed serially so the output does not depend on scheduling.
template <class T, class Body>
std::vector<T> map_indexed(std::size_t n, bool parallel, Body body);

}  // namespace waldkit::kernels

#include "waldkit/kernels_impl.hpp"
