#include "waldkit/kernels.hpp"

#include <algorithm>
#include <limits>

namespace waldkit::kernels {

namespace {

// Violation for a fixed f, scanning g then h in order.
std::optional<AssocViolation> assoc_for(const FinCat& c, MorId f) {
  const ObjId b = c.tgt(f);
  for (MorId g : c.out(b)) {
    const MorId gf = c.compose_unchecked(g, f);
    for (MorId h : c.out(c.tgt(g))) {
      const MorId lhs = c.compose_unchecked(h, gf);
      const MorId rhs = c.compose_unchecked(c.compose_unchecked(h, g), f);
      if (lhs != rhs) return AssocViolation{h, g, f};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<AssocViolation> associativity_serial(const FinCat& c) {
  const auto n = static_cast<MorId>(c.num_morphisms());
  for (MorId f = 0; f < n; ++f) {
    if (auto v = assoc_for(c, f)) return v;
  }
  return std::nullopt;
}

std::optional<AssocViolation> associativity_parallel(const FinCat& c) {
  const auto n = static_cast<MorId>(c.num_morphisms());
  MorId first_bad = std::numeric_limits<MorId>::max();
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first_bad)
  for (MorId f = 0; f < n; ++f) {
    if (f < first_bad && assoc_for(c, f)) first_bad = std::min(first_bad, f);
  }
  if (first_bad == std::numeric_limits<MorId>::max()) return std::nullopt;
  return assoc_for(c, first_bad);
}

std::uint64_t composable_pairs(const FinCat& c) {
  std::uint64_t total = 0;
  for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) total += c.out(c.tgt(f)).size();
  return total;
}

std::uint64_t composable_triples(const FinCat& c) {
  // sum over g of |into src(g)| * |out of tgt(g)|
  const std::size_t n = c.num_objects();
  std::vector<std::uint64_t> in(n, 0);
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) ++in[static_cast<std::size_t>(c.tgt(m))];
  std::uint64_t total = 0;
  for (MorId g = 0; g < static_cast<MorId>(c.num_morphisms()); ++g) {
    total += in[static_cast<std::size_t>(c.src(g))] * c.out(c.tgt(g)).size();
  }
  return total;
}

BlockLayout block_layout(const FinCat& c) {
  BlockLayout layout;
  const std::size_t n = c.num_objects();
  layout.n = n;
  layout.offset.assign(n * n * n, -1);
  std::size_t total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = c.hom(static_cast<ObjId>(a), static_cast<ObjId>(b)).size();
      if (ab == 0) continue;
      for (std::size_t d = 0; d < n; ++d) {
        const std::size_t bd = c.hom(static_cast<ObjId>(b), static_cast<ObjId>(d)).size();
        if (bd == 0) continue;
        layout.offset[(a * n + b) * n + d] = static_cast<std::int64_t>(total);
        total += ab * bd;
      }
    }
  }
  layout.total = total;
  return layout;
}

namespace {

void fill_block(const FinCat& c, const BlockLayout& layout, std::size_t block,
                std::vector<MorId>& table) {
  const std::int64_t off = layout.offset[block];
  if (off < 0) return;
  const std::size_t n = layout.n;
  const auto a = static_cast<ObjId>(block / (n * n));
  const auto b = static_cast<ObjId>((block / n) % n);
  const auto d = static_cast<ObjId>(block % n);
  const MorRange fs = c.hom(a, b);
  const MorRange gs = c.hom(b, d);
  auto pos = static_cast<std::size_t>(off);
  for (MorId f : fs) {
    for (MorId g : gs) table[pos++] = c.compose_unchecked(g, f);
  }
}

}  // namespace

std::vector<MorId> block_table_serial(const FinCat& c, const BlockLayout& layout) {
  std::vector<MorId> table(layout.total, kNone);
  for (std::size_t block = 0; block < layout.offset.size(); ++block) fill_block(c, layout, block, table);
  return table;
}

std::vector<MorId> block_table_parallel(const FinCat& c, const BlockLayout& layout) {
  std::vector<MorId> table(layout.total, kNone);
  const auto blocks = static_cast<std::int64_t>(layout.offset.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t block = 0; block < blocks; ++block) {
    fill_block(c, layout, static_cast<std::size_t>(block), table);
  }
  return table;
}

}  // namespace waldkit::kernels
