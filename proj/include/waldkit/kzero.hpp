#pragma once

// K_0 by generators and relations, maps induced by exact functors, the
// comparison with pi_1 of the diagonal of iota S, and the group-level forms
// of additivity, the fibration theorem and cofinality.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "waldkit/intmat.hpp"
#include "waldkit/sconstr.hpp"
#include "waldkit/wald.hpp"

namespace waldkit {

// Generators are the iso classes of objects; relations are
// [X] - [X'] - [X/X'] for one cofibration X' >-> X per orbit with its cofiber
// in budget, plus [X] - [Y] for every labeled X -> Y when a labeling is given.
struct K0 {
  CtxPtr ctx;
  std::vector<ObjId> generators;      // lowest-index object of each iso class
  std::vector<std::int32_t> class_of; // object -> generator
  Lattice relations;
  std::size_t sequence_relations = 0;
  std::size_t labeled_relations = 0;
  std::optional<QuotientGroup> quotient;

  const AbGroup& group() const { return quotient->group(); }
  // Normalized coordinates of [X].
  IntVec image(ObjId x) const;
  std::string describe(ObjId x) const;
};

K0 k0(CtxPtr ctx, const MorSet* w = nullptr);

// A homomorphism between K_0 groups (or direct sums of them), as a matrix on
// generators.
struct K0Map {
  Lattice source;
  Lattice target;
  IntMatrix matrix;  // target generators x source generators
  bool injective = false;
  bool surjective = false;
  AbGroup kernel;
  AbGroup cokernel;

  bool isomorphism() const { return injective && surjective; }
  GroupHom hom() const { return GroupHom{&source, &target, matrix}; }
};

// The map induced by an object map (X -> F(X)) on generators. Throws
// RelationNotPreserved naming the first relation not carried into the
// target relations.
K0Map k0_map(const K0& source, const K0& target, const std::vector<ObjId>& object_map);
K0Map k0_induced(const Functor& f, const K0& source, const K0& target);
// Into K_0(t_1) + ... + K_0(t_k), one object map per summand.
K0Map k0_map_to_sum(const K0& source, const std::vector<std::pair<const K0*, std::vector<ObjId>>>& parts);

// ---------------------------------------------------------------------------
// pi_1 route

struct Pi1Comparison {
  AbGroup group;                  // abelianized pi_1 of the diagonal
  std::size_t loops = 0;          // generators of the presentation
  std::size_t relators = 0;
  IntMatrix matching;             // [X] -> loop of X
  bool well_defined = false;
  bool isomorphism = false;
  std::string reason;
};

// Needs M, K >= 2 (TruncationTooLow).
Pi1Comparison k0_via_pi1(const IotaS& io, const K0& k);

// ---------------------------------------------------------------------------
// Theorems at the level of K_0

struct AdditivityReport {
  int m = 0;
  AbGroup fm;     // K_0(F_m)
  AbGroup base;   // K_0(C)
  AbGroup sm;     // K_0(S_m)
  K0Map map;      // (ev_0, quotient)
  bool passed = false;
};
AdditivityReport additivity_check(CtxPtr base, int m, const FilteredOptions& options = {});

struct FibrationReport {
  AbGroup aw;        // K_0(A^w)
  AbGroup a;         // K_0(A)
  AbGroup aw_rel;    // K_0(A, wA)
  K0Map inclusion;   // K_0(A^w) -> K_0(A)
  K0Map quotient;    // K_0(A) -> K_0(A, wA)
  bool exact_middle = false;
  bool surjective = false;
  bool passed() const { return exact_middle && surjective; }
};
FibrationReport fibration_pi0_check(const Labeling& l);

struct CofinalityReport {
  bool cofinal = false;
  std::string reason;
  AbGroup sub;       // K_0(C')
  AbGroup ambient;   // K_0(C)
  AbGroup quotient;  // K_0(C) / K_0(C')
  bool injective = false;
  bool passed() const { return cofinal && injective; }
};
CofinalityReport cofinality_check(const SubContext& sub);

// K_0 along increasing budgets; step i compares with step i - 1 by matching
// object names.
struct StabilizationStep {
  long budget = 0;
  AbGroup group;
  bool map_isomorphism = false;  // from the previous step
  std::string note;
};
struct StabilizationReport {
  std::vector<StabilizationStep> steps;
  std::optional<long> stable_from;  // first budget after which nothing changes
};
StabilizationReport budget_stabilization(const std::function<CtxPtr(long)>& build,
                                         const std::vector<long>& budgets);

}  // namespace waldkit
