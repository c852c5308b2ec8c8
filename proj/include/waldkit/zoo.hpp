#pragma once

// Built-in contexts and the category file format.
//
//   trivial                 one zero object
//   poset01                 the poset 0 < 1 with every morphism ingressive
//   vect:q=Q,N=N            F_q-vector spaces of dimension <= N (skeletal),
//                           injections, size = dimension
//   pointed_sets:N=N        <n> = {*, 1..n} for n <= N, pointed injections,
//                           size = n
//   pointed_subsets:N=N     pointed sets S+ for every subset S of {1..N}
//                           (not skeletal)
//   file:PATH               a category file
//   A+B                     direct sum
//
// Budgets default to N (vect, pointed) or the file's BUDGET.

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "waldkit/wald.hpp"

namespace waldkit {

struct ZooOptions {
  WaldOptions wald;
  std::optional<long> budget;           // overrides the default budget
  std::size_t morphism_limit = 200'000;  // ParamTooLarge above this
};

struct ZooContext {
  CtxPtr ctx;
  std::optional<MorSet> w;            // labeling given by a file
  std::optional<DirectSum> sum;       // set for A+B
  std::vector<ZooContext> summands;   // A and B for A+B
};

// Throws UnknownZoo, ParamTooLarge, and the validation errors.
ZooContext make_zoo(const std::string& spec, const ZooOptions& options = {});

// The underlying categories: F_q^0..F_q^n, and pointed sets {*, 1..k} for
// the given cardinalities k.
CatPtr vect_category(int q, int n);
CatPtr pointed_category(const std::vector<int>& cardinalities, std::vector<std::string> names);

// ---------------------------------------------------------------------------
// Category files

struct CategoryFile {
  RawCategory raw;
  std::vector<std::string> cof;
  std::optional<std::vector<std::string>> w;
  std::optional<std::vector<long>> size;  // per object
  std::optional<long> budget;
};

// Throws SyntaxError / UnresolvedReference with the line number.
CategoryFile parse_category(std::istream& in, const std::string& origin);
CategoryFile parse_category_file(const std::string& path);

// Validates the category, the pair and the Waldhausen axioms.
ZooContext load_category(const CategoryFile& file, const std::string& name, const ZooOptions& options = {});

// Writes a context (and an optional labeling) in the file format; parsing
// the output gives back an isomorphic context.
std::string write_category(const SizedWaldContext& ctx, const MorSet* w = nullptr);

}  // namespace waldkit
