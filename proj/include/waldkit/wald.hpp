#pragma once

// Pair structures, Waldhausen contexts with a size budget, exact functors,
// direct sums, labelings and weakly cofinal subcategories.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "waldkit/fincat.hpp"

namespace waldkit {

using MorSet = std::vector<char>;  // membership flag per morphism

struct PairCat {
  CatPtr base;
  MorSet cof;
  std::shared_ptr<const IsoData> isos;

  bool is_cof(MorId m) const { return cof[static_cast<std::size_t>(m)] != 0; }
  bool is_iso(MorId m) const { return isos->is_iso(m); }
};

// Checks that cof contains every isomorphism (hence every identity) and is
// closed under composition. Throws MissingIso / NotClosedUnderComposition.
PairCat validate_pair(CatPtr c, MorSet cof, std::shared_ptr<const IsoData> isos = {});
MorSet minimal_cof(const FinCat& c, const IsoData& isos);
MorSet maximal_cof(const FinCat& c);

struct WaldOptions {
  SearchOrder order;
  bool parallel = true;
  // Above this many non-canonical in-budget spans the pushout table is filled
  // on demand instead of eagerly.
  std::size_t eager_span_limit = 5'000'000;
};

struct ValidationStats {
  std::size_t spans_in_budget = 0;     // including canonical ones
  std::size_t spans_searched = 0;      // pushouts found by enumeration
  bool eager = true;
};

class SizedWaldContext;
using CtxPtr = std::shared_ptr<const SizedWaldContext>;

// Pushout search used by a context; nullopt when no pushout exists.
using PushoutSearch = std::function<std::optional<Cocone>(const Span&)>;

class SizedWaldContext {
 public:
  std::string name;
  PairCat pair;
  std::vector<long> size;
  long budget = 0;
  ObjId zero = kNone;
  std::vector<MorId> from_zero;  // the unique 0 -> X
  std::vector<MorId> to_zero;    // the unique X -> 0
  SearchOrder order;
  // Additional in-budget condition on spans (levelwise budgets of F_m).
  std::function<bool(MorId f, MorId g)> span_filter;
  PushoutSearch search;
  ValidationStats stats;

  const FinCat& cat() const { return *pair.base; }
  CatPtr cat_ptr() const { return pair.base; }
  const IsoData& isos() const { return *pair.isos; }
  bool is_cof(MorId m) const { return pair.is_cof(m); }
  bool is_iso(MorId m) const { return pair.is_iso(m); }
  MorId inverse(MorId m) const { return pair.isos->inverse[static_cast<std::size_t>(m)]; }
  long size_of(ObjId x) const { return size[static_cast<std::size_t>(x)]; }
  std::size_t num_objects() const { return cat().num_objects(); }

  // f or g is an isomorphism, or size(Y) + size(Z) - size(X) <= budget
  // (and the span filter accepts).
  bool in_budget(MorId f, MorId g) const;

  // The chosen pushout of (f: X -> Y, g: X -> Z). Isomorphism legs get the
  // canonical choice; otherwise the search result is memoized. Throws
  // PushoutOutOfBudget, MissingPushout, PushoutNotIngressive (f in cof but
  // the pushed-forward leg is not), NonUniqueMediator.
  Cocone pushout(MorId f, MorId g) const;
  // Same without the budget requirement; nullopt when no pushout exists.
  std::optional<Cocone> pushout_any(MorId f, MorId g) const;
  // X / X' for a cofibration X' -> X: the pushout along X' -> 0.
  Cocone cofiber(MorId f) const { return pushout(f, to_zero[static_cast<std::size_t>(cat().src(f))]); }

  std::size_t memo_size() const;

  // Fills the memo (used by validation).
  void remember(const Span& s, const Cocone& k) const;
  std::optional<Cocone> lookup(const Span& s) const;
  Cocone compute_pushout(const Span& s, bool require_budget) const;

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, Cocone> memo_;
};

// Finds the zero object, checks that 0 -> X is ingressive, and verifies
// existence and ingressivity of pushouts for every in-budget span with an
// ingressive leg. Throws NoZeroObject, ZeroMapNotIngressive, MissingPushout,
// PushoutNotIngressive.
CtxPtr validate_waldhausen(const PairCat& pair, std::vector<long> size, long budget,
                           const WaldOptions& options = {}, std::string name = {},
                           std::function<bool(MorId, MorId)> span_filter = {},
                           PushoutSearch search = {});

// Same category, sizes and budget with a different search order.
CtxPtr rebuild_with_order(const SizedWaldContext& ctx, const SearchOrder& order,
                          const WaldOptions& options = {});

// In-budget spans with an ingressive first leg, up to the action of
// Aut(X) x Aut(Y) x Aut(Z); representatives are the first span of each orbit
// in enumeration order (source, then targets, then morphism indices). Spans
// with an isomorphism leg are skipped unless include_canonical. Gives up
// (complete = false) beyond pair_limit spans.
struct SpanOrbits {
  std::vector<Span> reps;
  std::size_t spans = 0;
  bool complete = true;
};
SpanOrbits span_orbits(const SizedWaldContext& ctx, bool include_canonical, std::size_t pair_limit);

// First member of each orbit of Aut(a) x Aut(b) on the members of Hom(a, b)
// (the member set must be closed under the action).
std::vector<MorId> hom_orbit_representatives(const FinCat& c, const IsoData& iso, ObjId a, ObjId b,
                                             const std::function<bool(MorId)>& member);
// One ingressive morphism per orbit, over all pairs of objects.
std::vector<MorId> cofibration_representatives(const SizedWaldContext& ctx);

bool is_zero_object(const FinCat& c, ObjId x);

// Full subcategory on `objects` with inherited cofibrations and sizes; its
// pushouts are the parent's chosen ones, which must land in the
// subcategory (MissingPushout otherwise).
struct SubContext {
  CtxPtr ctx;
  Subcategory sub;
  CtxPtr parent;
};
SubContext full_subcontext(CtxPtr parent, std::vector<ObjId> objects, std::string name,
                           const WaldOptions& options = {});

// ---------------------------------------------------------------------------
// Exact functors

struct ExactFunctor {
  Functor functor;
  CtxPtr source;
  CtxPtr target;
  std::size_t squares_checked = 0;
};

// Zero, cofibrations and every in-budget chosen pushout square are
// preserved. Throws ZeroNotPreserved, CofNotPreserved, PushoutNotPreserved.
ExactFunctor validate_exact(const Functor& f, CtxPtr source, CtxPtr target);

// ---------------------------------------------------------------------------
// Direct sums

struct DirectSum {
  CtxPtr ctx;
  CtxPtr left;
  CtxPtr right;
  // (a, b) <-> a * |obj right| + b
  ObjId object(ObjId a, ObjId b) const {
    return a * static_cast<ObjId>(right->num_objects()) + b;
  }
  MorId morphism(MorId f, MorId g) const;
  std::pair<MorId, MorId> split(MorId m) const;
};

DirectSum direct_sum(CtxPtr a, CtxPtr b, const WaldOptions& options = {});
// The swap functor A + B -> B + A.
Functor sum_swap(const DirectSum& ab, const DirectSum& ba);
// Projections and inclusions of the summands.
Functor sum_projection(const DirectSum& s, int side);
Functor sum_inclusion(const DirectSum& s, int side);

// ---------------------------------------------------------------------------
// Labelings

struct Labeling {
  CtxPtr ctx;
  MorSet w;
  std::size_t cubes_checked = 0;
  bool complete = true;  // false when the cube cap was reached

  bool labeled(MorId m) const { return w[static_cast<std::size_t>(m)] != 0; }
};

// w must contain every isomorphism (MissingIso) and be closed under
// composition (NotClosedUnderComposition); every gluing cube over in-budget
// spans whose three comparison maps are labeled must induce a labeled map on
// the chosen pushouts (GluingAxiomViolated with the cube).
Labeling validate_labeling(CtxPtr ctx, MorSet w, std::size_t cube_limit = 1'000'000);

// A^w: the full subcategory on objects X with 0 -> X labeled.
SubContext labeled_objects(const Labeling& l);

// ---------------------------------------------------------------------------
// Weakly cofinal subcategories

struct CofinalityWitness {
  bool cofinal = false;
  std::string reason;
  // per object X of the ambient context: complement Y and X v Y
  std::vector<std::pair<ObjId, ObjId>> complements;
};

// Extension closure within budget and a wedge complement for every object.
// Throws BudgetTooSmallForWedge when a complement might exist only beyond
// the budget.
CofinalityWitness weakly_cofinal_check(const SubContext& sub);

}  // namespace waldkit
