#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "waldkit/sconstr.hpp"
#include "waldkit/zoo.hpp"

using namespace waldkit;
using testsupport::error_kind;

namespace {

std::size_t ix(std::int32_t i) { return static_cast<std::size_t>(i); }

CtxPtr zoo(const std::string& spec) { return make_zoo(spec).ctx; }

ObjId obj(const SizedWaldContext& ctx, const std::string& name) { return *ctx.cat().find_object(name); }

// Elements of X are the morphisms one -> X (F_q or <1>).
struct Elements {
  const FinCat& c;
  ObjId one;

  std::size_t count(ObjId x) const { return c.hom(one, x).size(); }
  std::set<MorId> image(MorId f) const {
    std::set<MorId> out;
    for (MorId e : c.hom(one, c.src(f))) out.insert(c.compose(f, e));
    return out;
  }
  bool injective(MorId f) const { return image(f).size() == count(c.src(f)); }
};

// Injections X -> Y between all objects, brute force.
std::vector<MorId> injections(const SizedWaldContext& b, const Elements& el) {
  std::vector<MorId> out;
  for (MorId f = 0; f < static_cast<MorId>(b.cat().num_morphisms()); ++f) {
    if (el.injective(f)) out.push_back(f);
  }
  return out;
}

// A square s: A0 -> A1, t: B0 -> B1, (f0, f1) is ingressive in F_1 iff f0, f1
// are injective and f1(A1) meets t(B0) exactly in t f0(A0).
bool reedy_oracle(const FinCat& c, const Elements& el, MorId s, MorId t, MorId f0, MorId f1) {
  if (!el.injective(f0) || !el.injective(f1)) return false;
  const auto a = el.image(f1);
  const auto b = el.image(t);
  std::size_t meet = 0;
  for (MorId e : a) meet += b.count(e);
  return meet == el.count(c.src(s));
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool all_isos(const SizedWaldContext& b, const std::vector<MorId>& comps) {
  return std::all_of(comps.begin(), comps.end(), [&](MorId m) { return b.is_iso(m); });
}

}  // namespace

TEST_CASE("operators satisfy the cosimplicial identities") {
  for (int n = 2; n <= 4; ++n) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i < j; ++i) {
        CHECK(SimplicialOperator::face(n, j).after(SimplicialOperator::face(n - 1, i)) ==
              SimplicialOperator::face(n, i).after(SimplicialOperator::face(n - 1, j - 1)));
      }
    }
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= j; ++i) {
        CHECK(SimplicialOperator::degeneracy(n, j).after(SimplicialOperator::degeneracy(n + 1, i)) ==
              SimplicialOperator::degeneracy(n, i).after(SimplicialOperator::degeneracy(n + 1, j + 1)));
      }
    }
  }
  for (int i = 0; i <= 3; ++i) {
    CHECK(SimplicialOperator::degeneracy(3, i).after(SimplicialOperator::face(4, i)) ==
          SimplicialOperator::identity(3));
    CHECK(SimplicialOperator::degeneracy(3, i).after(SimplicialOperator::face(4, i + 1)) ==
          SimplicialOperator::identity(3));
  }
}

TEST_CASE("monotone maps are counted by binomials") {
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      const auto maps = monotone_maps(a, b);
      CHECK(static_cast<long>(maps.size()) == binomial(a + b + 1, a + 1));
      for (const auto& eta : maps) validate_operator(eta);
    }
  }
  CHECK(error_kind([] { validate_operator({1, 2, {2, 1}}); }) == ErrorKind::UsageError);
  CHECK(error_kind([] { validate_operator({1, 2, {0, 3}}); }) == ErrorKind::UsageError);
}

TEST_CASE("chain_morphism indexes the chain poset") {
  for (int m = 0; m <= 4; ++m) {
    const CatPtr p = poset_chain(m);
    std::set<MorId> seen;
    for (int i = 0; i <= m; ++i) {
      for (int j = i; j <= m; ++j) {
        const MorId f = chain_morphism(m, i, j);
        CHECK(p->src(f) == i);
        CHECK(p->tgt(f) == j);
        seen.insert(f);
      }
    }
    CHECK(seen.size() == p->num_morphisms());
  }
}

TEST_CASE("F_0 is the base context") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_sets:N=2"}) {
    const CtxPtr b = zoo(spec);
    const FilteredPtr F = build_Fm(b, 0);
    CHECK(F->cat().num_objects() == b->num_objects());
    CHECK(F->cat().num_morphisms() == b->cat().num_morphisms());
    for (MorId f = 0; f < static_cast<MorId>(F->cat().num_morphisms()); ++f) {
      CHECK(F->ctx->is_cof(f) == b->is_cof(F->components(f)[0]));
    }
  }
}

TEST_CASE("F_1 matches brute-force counts and the Reedy criterion") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_sets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr b = zoo(spec);
    const FinCat& c = b->cat();
    const Elements el{c, obj(*b, std::string(spec).starts_with("vect") ? "F2" : "<1>")};
    const auto inj = injections(*b, el);
    const FilteredPtr F = build_Fm(b, 1);
    CHECK(F->cat().num_objects() == inj.size());

    std::size_t morphisms = 0;
    std::size_t cofs = 0;
    for (MorId s : inj) {
      for (MorId t : inj) {
        for (MorId f0 : c.hom(c.src(s), c.src(t))) {
          for (MorId f1 : c.hom(c.tgt(s), c.tgt(t))) {
            if (c.compose(f1, s) != c.compose(t, f0)) continue;
            ++morphisms;
            cofs += reedy_oracle(c, el, s, t, f0, f1) ? 1 : 0;
          }
        }
      }
    }
    CHECK(F->cat().num_morphisms() == morphisms);

    std::size_t cof_count = 0;
    for (MorId f = 0; f < static_cast<MorId>(F->cat().num_morphisms()); ++f) {
      const auto comps = F->components(f);
      const ObjId x = F->cat().src(f);
      const ObjId y = F->cat().tgt(f);
      const bool expected = reedy_oracle(c, el, F->step(x, 0, 1), F->step(y, 0, 1), comps[0], comps[1]);
      CHECK(F->ctx->is_cof(f) == expected);
      cof_count += F->ctx->is_cof(f) ? 1 : 0;
    }
    CHECK(cof_count == cofs);
    CHECK(f1_generated_cof(*F) == F->ctx->pair.cof);
  }
}

TEST_CASE("F_2 and S_2 object counts") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FinCat& c = b->cat();
  const Elements el{c, obj(*b, "F2")};
  const auto inj = injections(*b, el);
  std::size_t chains = 0;
  std::size_t from_zero = 0;
  for (MorId s : inj) {
    if (c.src(s) == b->zero) ++from_zero;
    for (MorId t : inj) chains += c.tgt(s) == c.src(t) ? 1 : 0;
  }
  CHECK(build_Fm(b, 2)->cat().num_objects() == chains);
  CHECK(build_Sm(b, 2).cat().num_objects() == inj.size());
  CHECK(build_Sm(b, 1).cat().num_objects() == from_zero);
  CHECK(build_Sm(b, 0).cat().num_objects() == 1);
}

TEST_CASE("a levelwise cofibration whose comparison map is not injective is rejected") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FinCat& c = b->cat();
  const ObjId one = obj(*b, "F2");
  const FunctorData x = filtration_from_steps(c, {b->from_zero[ix(one)]}, b->zero);
  const FunctorData y = filtration_from_steps(c, {c.id(one)}, one);
  const std::vector<MorId> comps{b->from_zero[ix(one)], c.id(one)};
  CHECK(b->is_cof(comps[0]));
  CHECK(b->is_cof(comps[1]));
  CHECK_FALSE(filtered_ingressive(*b, x, y, comps, true));

  const FunctorData y1 = filtration_from_steps(c, {c.id(one)}, one);
  const std::vector<MorId> zeros{b->from_zero[ix(one)], b->from_zero[ix(one)]};
  const FunctorData x0 = filtration_from_steps(c, {c.id(b->zero)}, b->zero);
  CHECK(filtered_ingressive(*b, x0, y1, zeros, true));
}

TEST_CASE("an out-of-budget comparison pushout throws unless sizes are monotone") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  auto b = std::make_shared<SizedWaldContext>();
  b->pair = v->pair;
  b->size = v->size;
  b->budget = 1;
  b->zero = v->zero;
  b->from_zero = v->from_zero;
  b->to_zero = v->to_zero;
  const FinCat& c = b->cat();
  const ObjId one = obj(*v, "F2");
  const ObjId two = obj(*v, "F2^2");
  MorId inj = kNone;
  const Elements el{c, one};
  for (MorId f : c.hom(one, two)) {
    if (el.injective(f)) inj = f;
  }
  const FunctorData x = filtration_from_steps(c, {b->from_zero[ix(one)]}, b->zero);
  const FunctorData y = filtration_from_steps(c, {inj}, one);
  const std::vector<MorId> comps{b->from_zero[ix(one)], inj};
  CHECK_FALSE(filtered_ingressive(*b, x, y, comps, true));
  CHECK(error_kind([&] { filtered_ingressive(*b, x, y, comps, false); }) == ErrorKind::PushoutOutOfBudget);
}

TEST_CASE("F_1 pushouts are pushouts in F_1") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FilteredPtr F = build_Fm(b, 1);
  const SpanOrbits orbits = span_orbits(*F->ctx, false, 1'000'000);
  REQUIRE(orbits.complete);
  REQUIRE(!orbits.reps.empty());
  std::size_t checked = 0;
  for (std::size_t i = 0; i < orbits.reps.size(); i += 7) {
    const Span& s = orbits.reps[i];
    const Cocone k = F->ctx->pushout(s.f, s.g);
    CHECK(certify_pushout(F->cat(), s, k).has_value());
    for (int lvl = 0; lvl <= 1; ++lvl) {
      const Cocone kl = b->pushout(F->components(s.f)[ix(lvl)], F->components(s.g)[ix(lvl)]);
      CHECK(b->isos().class_of[ix(kl.apex)] == b->isos().class_of[ix(F->level(k.apex, lvl))]);
    }
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("S_m is a full subcategory of F_m") {
  const CtxPtr b = zoo("pointed_sets:N=2");
  for (int m = 1; m <= 2; ++m) {
    const FilteredPtr F = build_Fm(b, m);
    const SmContext S = build_Sm(b, m);
    const Functor J = sm_inclusion(S, *F);
    validate_functor(J);
    const FinCat& s = S.cat();
    for (ObjId x = 0; x < static_cast<ObjId>(s.num_objects()); ++x) {
      for (ObjId y = 0; y < static_cast<ObjId>(s.num_objects()); ++y) {
        CHECK(s.hom(x, y).size() == F->cat().hom(J(x), J(y)).size());
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(s.num_morphisms()); ++f) {
      CHECK(S.ctx()->is_cof(f) == F->ctx->is_cof(J.on_morphism(f)));
    }
  }
}

TEST_CASE("quotient of F2 >-> F2^2 is 0 >-> F2") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FinCat& c = b->cat();
  const ObjId one = obj(*b, "F2");
  const ObjId two = obj(*b, "F2^2");
  const Elements el{c, one};
  for (MorId f : c.hom(one, two)) {
    if (!el.injective(f)) continue;
    const Quotient q = quotient_object(*b, filtration_from_steps(c, {f}, one));
    CHECK(q.object.obj_map == std::vector<ObjId>{b->zero, one});
    CHECK(q.unit[0] == b->to_zero[ix(one)]);
    CHECK(c.tgt(q.unit[1]) == one);
  }
}

TEST_CASE("quotient levels have the size differences") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FilteredPtr F = build_Fm(b, 2);
  for (ObjId x = 0; x < static_cast<ObjId>(F->cat().num_objects()); ++x) {
    const Quotient q = quotient_object(*b, F->object(x));
    for (int i = 0; i <= 2; ++i) {
      CHECK(b->size_of(q.object.obj_map[ix(i)]) == b->size_of(F->level(x, i)) - b->size_of(F->level(x, 0)));
    }
  }
}

TEST_CASE("the quotient adjunction satisfies the triangle identities") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_subsets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr b = zoo(spec);
    for (int m = 1; m <= 2; ++m) {
      const FilteredPtr F = build_Fm(b, m);
      const SmContext S = build_Sm(b, m);
      const QuotientAdjunction adj = quotient_adjunction(*F, S);
      CHECK_MESSAGE(adj.triangles_hold, adj.failure);
      CHECK(adj.counit_is_identity);
      validate_nat_trans(adj.unit);
      validate_nat_trans(adj.counit);
    }
  }
}

TEST_CASE("act_S restricts and takes quotients") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const SmContext S2 = build_Sm(b, 2);
  for (int n = 0; n <= 2; ++n) {
    const SmContext Sn = build_Sm(b, n);
    for (const auto& eta : monotone_maps(n, 2)) {
      CAPTURE(eta.to_string());
      const Functor f = act_S_functor(S2, Sn, eta);
      validate_functor(f);
      for (ObjId x = 0; x < static_cast<ObjId>(S2.cat().num_objects()); ++x) {
        const FunctorData& X = S2.object(x);
        const FunctorData& Y = Sn.object(f(x));
        for (int k = 0; k <= n; ++k) {
          CHECK(b->size_of(Y.obj_map[ix(k)]) ==
                b->size_of(X.obj_map[ix(eta.map[ix(k)])]) - b->size_of(X.obj_map[ix(eta.map[0])]));
        }
      }
    }
  }
  const Functor id = act_S_functor(S2, S2, SimplicialOperator::identity(2));
  for (ObjId x = 0; x < static_cast<ObjId>(S2.cat().num_objects()); ++x) CHECK(id(x) == x);
}

TEST_CASE("act_S comparison maps are natural isomorphisms") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_subsets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr b = zoo(spec);
    const FinCat& c = b->cat();
    std::vector<SmContext> S;
    for (int m = 0; m <= 2; ++m) S.push_back(build_Sm(b, m));
    for (int bt = 0; bt <= 2; ++bt) {
      for (int a = 0; a <= 2; ++a) {
        for (int d = 0; d <= 2; ++d) {
          for (const auto& eta : monotone_maps(a, bt)) {
            for (const auto& theta : monotone_maps(d, a)) {
              const SimplicialOperator both = eta.after(theta);
              const SmContext& from = S[ix(bt)];
              const std::size_t n = from.cat().num_objects();
              std::vector<std::vector<MorId>> comp(n);
              for (ObjId x = 0; x < static_cast<ObjId>(n); ++x) {
                const FunctorData& X = from.object(x);
                comp[ix(x)] = act_comparison(*b, eta, theta, X);
                CHECK(all_isos(*b, comp[ix(x)]));
                const FunctorData lhs = act_S(*b, both, X);
                const FunctorData rhs = act_S(*b, theta, act_S(*b, eta, X));
                for (int k = 0; k <= d; ++k) {
                  CHECK(c.src(comp[ix(x)][ix(k)]) == lhs.obj_map[ix(k)]);
                  CHECK(c.tgt(comp[ix(x)][ix(k)]) == rhs.obj_map[ix(k)]);
                }
              }
              for (MorId f = 0; f < static_cast<MorId>(from.cat().num_morphisms()); ++f) {
                const ObjId x = from.cat().src(f);
                const ObjId y = from.cat().tgt(f);
                const FunctorData& X = from.object(x);
                const FunctorData& Y = from.object(y);
                const auto l = act_S_components(*b, both, X, Y, from.components(f));
                const FunctorData eX = act_S(*b, eta, X);
                const FunctorData eY = act_S(*b, eta, Y);
                const auto r1 = act_S_components(*b, eta, X, Y, from.components(f));
                const auto r = act_S_components(*b, theta, eX, eY, r1);
                for (int k = 0; k <= d; ++k) {
                  CHECK(c.compose(comp[ix(y)][ix(k)], l[ix(k)]) == c.compose(r[ix(k)], comp[ix(x)][ix(k)]));
                }
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("d_0: S_{1+m} -> F_m is an equivalence") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_subsets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr b = zoo(spec);
    for (int m = 0; m <= 1; ++m) {
      const Functor d0 = face_zero_functor(build_Sm(b, m + 1), *build_Fm(b, m));
      validate_functor(d0);
      const EquivalenceWitness w = equivalence_check(d0);
      CHECK_MESSAGE(w.equivalent, w.reason);
    }
  }
}

TEST_CASE("evaluation at 0 is exact") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const FilteredPtr F = build_Fm(b, 1);
  const ExactFunctor e = validate_exact(evaluation_zero(*F), F->ctx, b);
  CHECK(e.squares_checked > 0);
}

TEST_CASE("Segal maps are isomorphisms") {
  const CtxPtr b = zoo("pointed_sets:N=2");
  const FilteredPtr F1 = build_Fm(b, 1);
  for (int m = 0; m <= 2; ++m) {
    const SegalReport r = segal_check(*build_Fm(b, m), *F1);
    CHECK_MESSAGE(r.holds, r.reason);
  }
}

TEST_CASE("the Grothendieck total category is a cocartesian fibration") {
  const CtxPtr b = zoo("pointed_sets:N=1");
  const GrothendieckTotal g = grothendieck_total(b, 2);
  check_category_axioms(*g.cat);
  const GrothendieckReport r = check_grothendieck(g);
  CHECK(r.fibers_isomorphic);
  CHECK(r.lifts_exist);
  CHECK(r.marked_are_isos);
  CHECK(r.composites_marked);
  CHECK(r.lifts_unique);

  // Marked edges out of (m, X) over eta are the isomorphisms out of eta^* X.
  std::size_t expected = 0;
  for (int m = 0; m <= 2; ++m) {
    const SmContext& from = g.fibers[ix(m)];
    for (ObjId x = 0; x < static_cast<ObjId>(from.cat().num_objects()); ++x) {
      for (int mp = 0; mp <= 2; ++mp) {
        const SmContext& to = g.fibers[ix(mp)];
        for (const auto& eta : monotone_maps(mp, m)) {
          const ObjId y = to.find_object(act_S(*b, eta, from.object(x)));
          REQUIRE(y != kNone);
          for (MorId f : to.cat().out(y)) expected += to.ctx()->is_iso(f) ? 1 : 0;
        }
      }
    }
  }
  CHECK(r.marked == expected);
}

TEST_CASE("iota S is a bisimplicial set with contractible zeroth row") {
  const CtxPtr b = zoo("vect:q=2,N=2");
  const IotaS io = iota_S_bisimplicial(b, 2, 2);
  validate_bisimplicial(io.bisimp);
  for (int k = 0; k <= 2; ++k) CHECK(io.bisimp.count[0][ix(k)] == 1);
  CHECK(io.bisimp.count[1][0] == b->num_objects());
  for (int m = 0; m <= 2; ++m) {
    const SmContext S = build_Sm(b, m);
    CHECK(io.bisimp.count[ix(m)][0] == S.cat().num_objects());
    std::size_t isos = 0;
    for (MorId f = 0; f < static_cast<MorId>(S.cat().num_morphisms()); ++f) isos += S.ctx()->is_iso(f) ? 1 : 0;
    CHECK(io.bisimp.count[ix(m)][1] == isos);
  }
  const TruncSSet d = diagonal(io.bisimp);
  validate_simplicial(d);
  for (ObjId x = 0; x < static_cast<ObjId>(b->num_objects()); ++x) {
    const std::int32_t loop = io.object_loop(x);
    REQUIRE(loop >= 0);
    CHECK((d.degenerate[1][ix(loop)] != 0) == (x == b->zero));
  }
}
