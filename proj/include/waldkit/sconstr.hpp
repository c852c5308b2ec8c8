#pragma once

// Filtered objects F_m(C), totally filtered objects S_m(C), the simplicial
// action by restriction and quotients, the quotient adjunction F -| J, the
// Segal maps, the Grothendieck total category over truncated Delta^op and
// the bisimplicial set iota S.
//
// A filtered object of length m is a functor [m] -> C (poset_chain(m)) whose
// steps X_{i-1} -> X_i are ingressive. Its FunctorData lists X_0..X_m and the
// images of all morphisms i <= j of the chain.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "waldkit/diagram.hpp"
#include "waldkit/simpset.hpp"
#include "waldkit/wald.hpp"

namespace waldkit {

// Monotone map [source] -> [target]; acts on S by S_target -> S_source.
struct SimplicialOperator {
  int source = 0;
  int target = 0;
  std::vector<int> map;  // source + 1 values in [0, target]

  static SimplicialOperator identity(int n);
  static SimplicialOperator face(int n, int i);        // delta_i: [n-1] -> [n], skips i
  static SimplicialOperator degeneracy(int n, int j);  // sigma_j: [n+1] -> [n], hits j twice
  // this o theta
  SimplicialOperator after(const SimplicialOperator& theta) const;
  bool operator==(const SimplicialOperator&) const = default;
  std::string to_string() const;
};

// Throws UsageError unless the map is monotone with values in range.
void validate_operator(const SimplicialOperator& eta);
// All monotone maps [source] -> [target] in lexicographic order.
std::vector<SimplicialOperator> monotone_maps(int source, int target);

// Index of the morphism i <= j in poset_chain(m).
MorId chain_morphism(int m, int i, int j);
// X_i -> X_j of a filtered object.
MorId filtration_step(const FunctorData& x, int i, int j);
// The filtered object with the given levels and steps X_{i-1} -> X_i.
FunctorData filtration_from_steps(const FinCat& base, const std::vector<MorId>& steps, ObjId first);

// ---------------------------------------------------------------------------
// F_m and S_m

struct FilteredOptions {
  WaldOptions wald;
  std::size_t functor_limit = 200'000;
  std::size_t morphism_limit = 5'000'000;
  std::optional<long> size_cap;  // default (m + 1) * max(budget, largest object size)
};

struct FilteredContext {
  int m = 0;
  CtxPtr base;
  std::shared_ptr<const DiagramCategory> diagram;
  CtxPtr ctx;
  long size_cap = 0;
  bool monotone_sizes = true;  // size(X) <= size(Y) for every ingressive X -> Y of the base

  const DiagramCategory& dc() const { return *diagram; }
  const FinCat& cat() const { return ctx->cat(); }
  const FunctorData& object(ObjId x) const { return diagram->objects[static_cast<std::size_t>(x)]; }
  ObjId level(ObjId x, int i) const { return object(x).obj_map[static_cast<std::size_t>(i)]; }
  MorId step(ObjId x, int i, int j) const { return filtration_step(object(x), i, j); }
  std::span<const MorId> components(MorId f) const { return diagram->components(f); }
};
using FilteredPtr = std::shared_ptr<const FilteredContext>;

// Filtered objects of length m with total size at most the cap.
// Throws EnumerationLimitExceeded.
std::vector<FunctorData> filtered_objects(const SizedWaldContext& base, int m, long size_cap,
                                          std::size_t limit);
// Totally filtered objects (X_0 is the zero object) whose quotients X_j / X_i
// are all in budget.
std::vector<FunctorData> totally_filtered_objects(const SizedWaldContext& base, int m, long size_cap,
                                                  std::size_t limit);

// Whether comps: X -> Y is ingressive: for every 1 <= i <= m the map
// f_{i-1} is ingressive and so is the comparison X_i u_{X_{i-1}} Y_{i-1} -> Y_i.
// An out-of-budget comparison pushout counts as not ingressive when sizes are
// monotone along cofibrations (PushoutOutOfBudget otherwise).
bool filtered_ingressive(const SizedWaldContext& base, const FunctorData& x, const FunctorData& y,
                         std::span<const MorId> comps, bool monotone_sizes);

// F_m(C) with levelwise pushouts and levelwise budgets.
FilteredPtr build_Fm(CtxPtr base, int m, const FilteredOptions& options = {});

// F_1 cofibrations generated under composition by (f_0 iso, f_1 ingressive)
// and (f_0 ingressive, square a pushout).
MorSet f1_generated_cof(const FilteredContext& f1);

// S_m(C): F_m restricted to totally filtered objects with quotients in
// budget. It is built directly on those objects (all natural
// transformations, the same ingressive test and levelwise pushouts), so it is
// the full subcategory of F_m on them; sm_inclusion gives the embedding.
struct SmContext {
  FilteredPtr S;

  int m() const { return S->m; }
  const CtxPtr& ctx() const { return S->ctx; }
  const FinCat& cat() const { return S->cat(); }
  const FunctorData& object(ObjId x) const { return S->object(x); }
  std::span<const MorId> components(MorId f) const { return S->components(f); }
  ObjId find_object(const FunctorData& x) const { return S->dc().find_object(x); }
  MorId find_morphism(ObjId a, ObjId b, std::span<const MorId> comps) const {
    return S->dc().find_morphism(a, b, comps);
  }
};

SmContext build_Sm(CtxPtr base, int m, const FilteredOptions& options = {});
// J: S_m -> F_m. Throws InvalidFunctor if an object is missing from F_m.
Functor sm_inclusion(const SmContext& S, const FilteredContext& F);

// ---------------------------------------------------------------------------
// Quotients and the simplicial action

// X / X_0 = (X_0/X_0 -> X_1/X_0 -> ... -> X_m/X_0) from the chosen
// cofibers, and the unit components X_i -> X_i/X_0.
struct Quotient {
  FunctorData object;
  std::vector<MorId> unit;
};
Quotient quotient_object(const SizedWaldContext& base, const FunctorData& x);
// Components of the induced X/X_0 -> Y/Y_0.
std::vector<MorId> quotient_components(const SizedWaldContext& base, const FunctorData& x,
                                       const FunctorData& y, std::span<const MorId> comps);

// X restricted along eta: [source] -> [target] (x has length target).
FunctorData restrict_along(const FunctorData& x, const SimplicialOperator& eta);
// eta^* X: restriction followed by the quotient by the new X_0.
FunctorData act_S(const SizedWaldContext& base, const SimplicialOperator& eta, const FunctorData& x);
std::vector<MorId> act_S_components(const SizedWaldContext& base, const SimplicialOperator& eta,
                                    const FunctorData& x, const FunctorData& y,
                                    std::span<const MorId> comps);
// The comparison iso (eta o theta)^* X -> theta^* eta^* X induced by pushout
// universality, as components.
std::vector<MorId> act_comparison(const SizedWaldContext& base, const SimplicialOperator& eta,
                                  const SimplicialOperator& theta, const FunctorData& x);

// eta^*: S_target -> S_source on all morphisms. Throws InvalidFunctor when
// an image falls outside the target.
Functor act_S_functor(const SmContext& from, const SmContext& to, const SimplicialOperator& eta);

// F: F_m -> S_m, J: S_m -> F_m, the unit id => JF with components X_i ->
// X_i/X_0 and the counit FJ => id.
struct QuotientAdjunction {
  Functor quotient;
  Functor inclusion;
  NatTrans unit;
  NatTrans counit;
  bool counit_is_identity = false;
  bool triangles_hold = false;
  std::string failure;
};
Functor quotient_functor(const FilteredContext& F, const SmContext& S);
QuotientAdjunction quotient_adjunction(const FilteredContext& F, const SmContext& S);

// d_0: S_{1+m} -> F_m, forgetting X_0.
Functor face_zero_functor(const SmContext& s1m, const FilteredContext& fm);
// ev_0: F_m -> C (I_{m,0}).
Functor evaluation_zero(const FilteredContext& F);

// ---------------------------------------------------------------------------
// Segal maps

struct SegalReport {
  bool holds = false;
  std::size_t objects = 0;    // of the fiber product
  std::size_t morphisms = 0;  // of the fiber product
  std::string reason;
};
// F_m -> F_1 x_{F_0} ... x_{F_0} F_1 is an isomorphism of categories.
SegalReport segal_check(const FilteredContext& fm, const FilteredContext& f1);

// ---------------------------------------------------------------------------
// Grothendieck total category over Delta^op truncated at N

struct GrothendieckTotal {
  int N = 0;
  std::vector<SmContext> fibers;               // S_0 .. S_N
  std::vector<SimplicialOperator> operators;   // all [a] -> [b], a, b <= N
  CatPtr cat;
  std::vector<std::pair<int, ObjId>> objects;  // (m, X)
  struct Edge {
    int op = 0;  // eta: [m'] -> [m] for an edge (m, X) -> (m', Y)
    MorId psi = kNone;  // eta^* X -> Y in S_{m'}
  };
  std::vector<Edge> edges;  // per morphism
  MorSet marked;            // initial among lifts of their base morphism

  ObjId object(int m, ObjId x) const;
  int operator_index(const SimplicialOperator& eta) const;
};

GrothendieckTotal grothendieck_total(CtxPtr base, int N, const FilteredOptions& options = {});

struct GrothendieckReport {
  bool fibers_isomorphic = false;   // fiber over m ~ S_m
  bool lifts_exist = false;         // every base morphism has a marked lift from every object
  bool marked_are_isos = false;     // marked iff psi is an isomorphism
  bool composites_marked = false;   // composites of marked edges are marked
  bool lifts_unique = false;        // marked lifts unique up to unique iso
  std::size_t marked = 0;
};
GrothendieckReport check_grothendieck(const GrothendieckTotal& g);

// ---------------------------------------------------------------------------
// iota S

struct IotaS {
  BisimpSet bisimp;
  std::vector<DiagramCategory> cores;              // interior groupoid of S_m
  std::vector<std::vector<InternTable>> chains;    // per m: simplex tables of the nerve
  CtxPtr base;

  // The 1-simplex of the diagonal given by the identity of 0 -> X in S_1.
  std::int32_t object_loop(ObjId x) const;
};

// (m, k) -> N_k(interior groupoid of S_m) for m <= M, k <= K; horizontal
// operators from act_S. Throws EnumerationLimitExceeded.
IotaS iota_S_bisimplicial(CtxPtr base, int M, int K, std::size_t limit = 20'000'000,
                          const FilteredOptions& options = {});

}  // namespace waldkit
