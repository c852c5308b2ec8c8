#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "waldkit/wald.hpp"
#include "waldkit/zoo.hpp"

using namespace waldkit;
using testsupport::error_kind;
using testsupport::fixture;

namespace {

std::size_t ix(std::int32_t i) { return static_cast<std::size_t>(i); }

CtxPtr zoo(const std::string& spec, std::optional<long> budget = std::nullopt) {
  ZooOptions o;
  o.budget = budget;
  return make_zoo(spec, o).ctx;
}

ObjId obj(const SizedWaldContext& ctx, const std::string& name) { return *ctx.cat().find_object(name); }

// All cocones of s, by brute force.
std::vector<Cocone> all_cocones(const FinCat& c, const Span& s) {
  std::vector<Cocone> out;
  const ObjId y = c.tgt(s.f);
  const ObjId z = c.tgt(s.g);
  for (ObjId w = 0; w < static_cast<ObjId>(c.num_objects()); ++w)
    for (MorId u : c.hom(y, w))
      for (MorId v : c.hom(z, w))
        if (c.compose(u, s.f) == c.compose(v, s.g)) out.push_back({w, u, v});
  return out;
}

// Whether k is a pushout: exactly one mediator into every cocone.
bool brute_is_pushout(const FinCat& c, const Span& s, const Cocone& k) {
  for (const Cocone& w : all_cocones(c, s)) {
    int mediators = 0;
    for (MorId h : c.hom(k.apex, w.apex))
      if (c.compose(h, k.u) == w.u && c.compose(h, k.v) == w.v) ++mediators;
    if (mediators != 1) return false;
  }
  return true;
}

// All in-budget spans with an ingressive first leg.
std::vector<Span> brute_spans(const SizedWaldContext& ctx) {
  std::vector<Span> out;
  const FinCat& c = ctx.cat();
  for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
    if (!ctx.is_cof(f)) continue;
    for (MorId g : c.out(c.src(f)))
      if (ctx.in_budget(f, g)) out.push_back({f, g});
  }
  return out;
}

// Gluing axiom by brute force over every cube of in-budget spans.
bool brute_gluing(const SizedWaldContext& ctx, const MorSet& w) {
  const FinCat& c = ctx.cat();
  const auto spans = brute_spans(ctx);
  for (const Span& s : spans) {
    const Cocone k = ctx.pushout(s.f, s.g);
    for (const Span& t : spans) {
      const Cocone k2 = ctx.pushout(t.f, t.g);
      for (MorId a : c.hom(c.src(s.f), c.src(t.f))) {
        if (!w[ix(a)]) continue;
        for (MorId b : c.hom(c.tgt(s.f), c.tgt(t.f))) {
          if (!w[ix(b)] || c.compose(b, s.f) != c.compose(t.f, a)) continue;
          for (MorId cc : c.hom(c.tgt(s.g), c.tgt(t.g))) {
            if (!w[ix(cc)] || c.compose(cc, s.g) != c.compose(t.g, a)) continue;
            MorId h = kNone;
            for (MorId m : c.hom(k.apex, k2.apex))
              if (c.compose(m, k.u) == c.compose(k2.u, b) && c.compose(m, k.v) == c.compose(k2.v, cc)) h = m;
            if (h == kNone || !w[ix(h)]) return false;
          }
        }
      }
    }
  }
  return true;
}

MorSet close_under_composition(const FinCat& c, MorSet w) {
  for (bool changed = true; changed;) {
    changed = false;
    for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
      if (!w[ix(f)]) continue;
      for (MorId g : c.out(c.tgt(f))) {
        if (w[ix(g)] && !w[ix(c.compose(g, f))]) {
          w[ix(c.compose(g, f))] = 1;
          changed = true;
        }
      }
    }
  }
  return w;
}

MorSet isos_of(const SizedWaldContext& ctx) {
  MorSet w(ctx.cat().num_morphisms(), 0);
  for (MorId m = 0; m < static_cast<MorId>(w.size()); ++m) w[ix(m)] = ctx.is_iso(m) ? 1 : 0;
  return w;
}

// A functor between categories of "sets with elements": the elements of x
// are the morphisms one -> x, matched across the categories by local index.
// Each f is sent to the unique g acting the same way on elements.
Functor functor_by_elements(CatPtr s, CatPtr t, ObjId one_s, ObjId one_t, std::vector<ObjId> obj_map) {
  Functor F{s, t, std::move(obj_map), {}};
  for (MorId f = 0; f < static_cast<MorId>(s->num_morphisms()); ++f) {
    const MorRange es = s->hom(one_s, s->src(f));
    const MorRange et = t->hom(one_t, F(s->src(f)));
    const MorRange et2 = t->hom(one_t, F(s->tgt(f)));
    REQUIRE(es.size() == et.size());
    MorId found = kNone;
    for (MorId g : t->hom(F(s->src(f)), F(s->tgt(f)))) {
      bool same = true;
      for (std::size_t k = 0; k < es.size() && same; ++k) {
        const std::size_t image = s->local_index(s->compose(f, es[k]));
        same = t->compose(g, et[k]) == et2[image];
      }
      if (same) {
        found = g;
        break;
      }
    }
    REQUIRE(found != kNone);
    F.mor_map.push_back(found);
  }
  return F;
}

Functor constant_zero(CtxPtr a, CtxPtr b) {
  Functor F{a->cat_ptr(), b->cat_ptr(), std::vector<ObjId>(a->num_objects(), b->zero), {}};
  F.mor_map.assign(a->cat().num_morphisms(), b->cat().id(b->zero));
  return F;
}

}  // namespace

// ---------------------------------------------------------------------------
// Zoo

TEST_CASE("vect(2,2) morphism count and automorphisms") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  std::size_t expected = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) expected += std::size_t{1} << (a * b);
  CHECK(v->cat().num_morphisms() == expected);
  CHECK(expected == 31);
  // Invertible 2x2 matrices over F2 by determinant.
  int gl2 = 0;
  for (int m = 0; m < 16; ++m) gl2 += ((m & 1) * (m >> 3 & 1) + (m >> 1 & 1) * (m >> 2 & 1)) % 2;
  const ObjId x = obj(*v, "F2^2");
  int autos = 0;
  for (MorId m : v->cat().hom(x, x)) autos += v->is_iso(m) ? 1 : 0;
  CHECK(autos == gl2);
  CHECK(gl2 == 6);
  const Subcategory g = interior_groupoid(v->cat_ptr());
  CHECK(g.cat->hom(g.parent_to_object[ix(x)], g.parent_to_object[ix(x)]).size() == 6);
}

TEST_CASE("vect ingressives are the injections") {
  const CtxPtr v = zoo("vect:q=3,N=2");
  const FinCat& c = v->cat();
  const ObjId one = obj(*v, "F3");
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
    // Injective iff no nonzero vector is sent to zero.
    bool injective = true;
    const MorRange vecs = c.hom(one, c.src(m));
    const MorId zero_vec = c.compose(v->from_zero[ix(c.tgt(m))], v->to_zero[ix(one)]);
    for (MorId e : vecs) {
      if (e == c.compose(v->from_zero[ix(c.src(m))], v->to_zero[ix(one)])) continue;
      if (c.compose(m, e) == zero_vec) injective = false;
    }
    CHECK(v->is_cof(m) == injective);
  }
}

TEST_CASE("pointed_sets(3) has four iso classes") {
  const CtxPtr p = zoo("pointed_sets:N=3");
  CHECK(p->num_objects() == 4);
  CHECK(p->isos().num_classes() == 4);
  const CtxPtr s = zoo("pointed_subsets:N=3");
  CHECK(s->num_objects() == 8);
  CHECK(s->isos().num_classes() == 4);
  // Morphisms {*,1..a} -> {*,1..b}: (b+1)^a.
  std::size_t expected = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) {
      std::size_t n = 1;
      for (int i = 0; i < a; ++i) n *= static_cast<std::size_t>(b + 1);
      expected += n;
    }
  CHECK(p->cat().num_morphisms() == expected);
}

TEST_CASE("zero objects of the zoo") {
  CHECK(zero_objects(zoo("pointed_sets:N=3")->cat()) == std::vector<ObjId>{0});
  CHECK(zoo("pointed_sets:N=3")->cat().object_name(0) == "<0>");
  CHECK(zoo("vect:q=2,N=2")->cat().object_name(zoo("vect:q=2,N=2")->zero) == "0");
}

TEST_CASE("vect(2,0) is trivial") {
  const CtxPtr v = zoo("vect:q=2,N=0");
  CHECK(v->num_objects() == 1);
  CHECK(v->cat().num_morphisms() == 1);
  CHECK(v->stats.spans_in_budget == 0);
}

TEST_CASE("zoo errors") {
  CHECK(error_kind([] { zoo("poset01"); }) == ErrorKind::NoZeroObject);
  CHECK(error_kind([] { zoo("nonsense"); }) == ErrorKind::UnknownZoo);
  CHECK(error_kind([] { zoo("vect:q=2,N=5"); }) == ErrorKind::ParamTooLarge);
  CHECK(error_kind([] { zoo("vect:q=4,N=2"); }) == ErrorKind::UsageError);
  CHECK(error_kind([] { zoo("vect:q=2"); }) == ErrorKind::UsageError);
  CHECK(error_kind([] { zoo("vect:q=2,N=2,x=1"); }) == ErrorKind::UsageError);
  CHECK(error_kind([] { zoo("vect:q=2,N=two"); }) == ErrorKind::UsageError);
}

TEST_CASE("axiom suite on the zoo") {
  for (const char* spec : {"trivial", "vect:q=2,N=1", "vect:q=2,N=2", "vect:q=2,N=3", "vect:q=3,N=1",
                           "vect:q=3,N=2", "pointed_sets:N=1", "pointed_sets:N=2", "pointed_sets:N=3",
                           "pointed_sets:N=4"}) {
    CAPTURE(spec);
    CHECK_NOTHROW(zoo(spec));
  }
}

// ---------------------------------------------------------------------------
// Pushouts

TEST_CASE("pushout F2 <- F2 -> F2^2 in vect") {
  const CtxPtr v = zoo("vect:q=2,N=3", 3);
  const FinCat& c = v->cat();
  const ObjId one = obj(*v, "F2");
  const ObjId two = obj(*v, "F2^2");
  for (MorId i : c.hom(one, two)) {
    if (!v->is_cof(i)) continue;
    const Span s{c.id(one), i};
    // Brute force: exactly one apex up to isomorphism admits a universal cocone.
    std::set<ObjId> apexes;
    for (const Cocone& k : all_cocones(c, s))
      if (brute_is_pushout(c, s, k)) apexes.insert(k.apex);
    CHECK(apexes == std::set<ObjId>{two});
    const auto found = find_pushout(c, s);
    REQUIRE(found);
    CHECK(found->pushout.apex == two);
    CHECK(v->pushout(s.f, s.g).apex == two);
  }
}

TEST_CASE("pushout of S0 <- * -> S0 is the three-point wedge") {
  const CtxPtr p = zoo("pointed_sets:N=3");
  const FinCat& c = p->cat();
  const ObjId s0 = obj(*p, "<1>");
  const Span s{p->from_zero[ix(s0)], p->from_zero[ix(s0)]};
  const auto cert = find_pushout(c, s, {}, true);
  REQUIRE(cert);
  CHECK(c.object_name(cert->pushout.apex) == "<2>");
  CHECK(brute_is_pushout(c, s, cert->pushout));
  // Coproduct: cocones into W correspond to pairs of points of W.
  for (ObjId w = 0; w < static_cast<ObjId>(c.num_objects()); ++w) {
    std::size_t cocones = 0;
    for (const Cocone& k : all_cocones(c, s)) cocones += k.apex == w ? 1 : 0;
    CHECK(cocones == c.hom(s0, w).size() * c.hom(s0, w).size());
  }
  CHECK(cert->mediations.size() == all_cocones(c, s).size());
}

TEST_CASE("chosen pushouts agree with brute force") {
  for (const char* spec : {"vect:q=2,N=2", "vect:q=3,N=2", "pointed_sets:N=3", "pointed_subsets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr ctx = zoo(spec);
    const FinCat& c = ctx->cat();
    for (const Span& s : brute_spans(*ctx)) {
      const Cocone k = ctx->pushout(s.f, s.g);
      CHECK(is_cocone(c, s, k));
      CHECK(brute_is_pushout(c, s, k));
      CHECK(ctx->is_cof(k.v));
    }
  }
}

TEST_CASE("orbit representatives cover every span") {
  const CtxPtr ctx = zoo("pointed_sets:N=3");
  const auto orbits = span_orbits(*ctx, true, 1'000'000);
  REQUIRE(orbits.complete);
  const auto spans = brute_spans(*ctx);
  CHECK(orbits.spans == spans.size());
  // Every span is isomorphic to exactly one representative.
  const FinCat& c = ctx->cat();
  auto isomorphic = [&](const Span& s, const Span& t) {
    for (MorId a : c.hom(c.src(s.f), c.src(t.f))) {
      if (!ctx->is_iso(a)) continue;
      bool fy = false, fz = false;
      for (MorId b : c.hom(c.tgt(s.f), c.tgt(t.f)))
        fy = fy || (ctx->is_iso(b) && c.compose(b, s.f) == c.compose(t.f, a));
      for (MorId d : c.hom(c.tgt(s.g), c.tgt(t.g)))
        fz = fz || (ctx->is_iso(d) && c.compose(d, s.g) == c.compose(t.g, a));
      if (fy && fz) return true;
    }
    return false;
  };
  for (const Span& s : spans) {
    int matches = 0;
    for (const Span& r : orbits.reps) matches += isomorphic(s, r) ? 1 : 0;
    CHECK(matches == 1);
  }
}

TEST_CASE("pushout choices do not depend on the search order up to isomorphism") {
  const CtxPtr base = zoo("vect:q=2,N=3");
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    const CtxPtr other = rebuild_with_order(*base, SearchOrder{seed});
    CHECK(other->stats.spans_searched == base->stats.spans_searched);
    for (const Span& s : span_orbits(*base, false, 1'000'000).reps) {
      CHECK(other->pushout(s.f, s.g).apex == base->pushout(s.f, s.g).apex);
    }
  }
}

TEST_CASE("serial and parallel validation agree") {
  WaldOptions serial;
  serial.parallel = false;
  const CtxPtr p = zoo("pointed_sets:N=4");
  const CtxPtr q = rebuild_with_order(*p, SearchOrder{}, serial);
  for (const Span& s : span_orbits(*p, false, 1'000'000).reps) {
    const Cocone a = p->pushout(s.f, s.g);
    const Cocone b = q->pushout(s.f, s.g);
    CHECK(a.apex == b.apex);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
  }
}

TEST_CASE("wedges in vect are biproducts") {
  const CtxPtr v = zoo("vect:q=2,N=3");
  const FinCat& c = v->cat();
  const auto n = static_cast<ObjId>(c.num_objects());
  for (ObjId x = 0; x < n; ++x) {
    for (ObjId y = 0; y < n; ++y) {
      if (!v->in_budget(v->from_zero[ix(x)], v->from_zero[ix(y)])) continue;
      const Cocone k = v->pushout(v->from_zero[ix(x)], v->from_zero[ix(y)]);
      const MorId zyx = c.compose(v->from_zero[ix(x)], v->to_zero[ix(y)]);
      const MorId zxy = c.compose(v->from_zero[ix(y)], v->to_zero[ix(x)]);
      // Projections p, q with p u = 1, q v = 1, p v = 0, q u = 0.
      MorId p = kNone, q = kNone;
      for (MorId m : c.hom(k.apex, x))
        if (c.compose(m, k.u) == c.id(x) && c.compose(m, k.v) == zyx) p = m;
      for (MorId m : c.hom(k.apex, y))
        if (c.compose(m, k.v) == c.id(y) && c.compose(m, k.u) == zxy) q = m;
      REQUIRE(p != kNone);
      REQUIRE(q != kNone);
      // (p, q) is a product cone.
      for (ObjId t = 0; t < n; ++t) {
        std::set<std::pair<MorId, MorId>> pairs;
        for (MorId m : c.hom(t, k.apex)) pairs.insert({c.compose(p, m), c.compose(q, m)});
        CHECK(pairs.size() == c.hom(t, x).size() * c.hom(t, y).size());
        CHECK(c.hom(t, k.apex).size() == pairs.size());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Pairs

TEST_CASE("minimal and maximal pairs") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  const CatPtr c = v->cat_ptr();
  CHECK_NOTHROW(validate_pair(c, minimal_cof(*c, v->isos())));
  CHECK_NOTHROW(validate_pair(c, maximal_cof(*c)));
  MorSet missing = minimal_cof(*c, v->isos());
  const ObjId two = obj(*v, "F2^2");
  for (MorId m : c->hom(two, two))
    if (v->is_iso(m) && !c->is_identity(m)) {
      missing[ix(m)] = 0;
      break;
    }
  CHECK(error_kind([&] { validate_pair(c, missing); }) == ErrorKind::MissingIso);
}

TEST_CASE("pair closure agrees with brute force") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  const CatPtr c = v->cat_ptr();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    MorSet cof = isos_of(*v);
    for (MorId m = 0; m < static_cast<MorId>(c->num_morphisms()); ++m)
      if (rng() % 4 == 0) cof[ix(m)] = 1;
    if (trial % 2 == 0) cof = close_under_composition(*c, cof);
    bool closed = true;
    for (MorId f = 0; f < static_cast<MorId>(c->num_morphisms()); ++f)
      for (MorId g : c->out(c->tgt(f)))
        if (cof[ix(f)] && cof[ix(g)] && !cof[ix(c->compose(g, f))]) closed = false;
    const auto kind = error_kind([&] { validate_pair(c, cof); });
    CHECK((kind == std::nullopt) == closed);
    if (!closed) CHECK(kind == ErrorKind::NotClosedUnderComposition);
  }
}

// ---------------------------------------------------------------------------
// Fixtures

TEST_CASE("shipped fixtures") {
  for (const char* name : {"pointed_one", "pointed_one_maximal", "iso_pair", "square_ok"}) {
    CAPTURE(name);
    CHECK_NOTHROW(make_zoo("file:" + fixture(std::string(name) + ".cat")));
  }
  CHECK(error_kind([] { make_zoo("file:" + fixture("pushout_not_ingressive.cat")); }) ==
        ErrorKind::PushoutNotIngressive);
  CHECK(error_kind([] { make_zoo("file:" + fixture("zero_map_not_ingressive.cat")); }) ==
        ErrorKind::ZeroMapNotIngressive);
  try {
    make_zoo("file:" + fixture("pushout_not_ingressive.cat"));
  } catch (const Error& e) {
    CHECK(e.detail().find("iXY") != std::string::npos);
    CHECK(e.detail().find("iZP") != std::string::npos);
  }
}

TEST_CASE("square fixture pushout") {
  const CtxPtr sq = make_zoo("file:" + fixture("square_ok.cat")).ctx;
  const FinCat& c = sq->cat();
  const Span s{*c.find_morphism("iXY"), *c.find_morphism("iXZ")};
  const Cocone k = sq->pushout(s.f, s.g);
  CHECK(c.object_name(k.apex) == "P");
  CHECK(brute_is_pushout(c, s, k));
}

// ---------------------------------------------------------------------------
// Category files

TEST_CASE("parse a two-object file") {
  std::istringstream in(R"(# zero and a point
OBJECTS
0 P
MORPHISMS
z : 0 -> P
t: P -> 0   # attached colon
e : P -> P
COMPOSE
t o z = id_0
z o t = e
e o z = z
t o e = t
e o e = e
COF
z
SIZE
0 = 0
P = 1
BUDGET 1
)");
  const CategoryFile f = parse_category(in, "inline");
  CHECK(f.raw.objects.size() == 2);
  CHECK(f.raw.morphisms.size() == 5);
  CHECK(f.budget == 1);
  const ZooContext z = load_category(f, "inline");
  CHECK(z.ctx->cat().num_morphisms() == 5);
  CHECK(z.ctx->cat().object_name(z.ctx->zero) == "0");
}

TEST_CASE("parse errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_category(in, "t");
  };
  auto detail = [&](const std::string& text) {
    try {
      parse(text);
    } catch (const Error& e) {
      return e.detail();
    }
    return std::string();
  };
  CHECK(error_kind([&] { parse("OBJECTS\nA B A\n"); }) == ErrorKind::SyntaxError);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nMORPHISMS\nf : A -> B\n"); }) == ErrorKind::UnresolvedReference);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nCOMPOSE\ng o f = h\n"); }) == ErrorKind::UnresolvedReference);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nCOF\nf\n"); }) == ErrorKind::UnresolvedReference);
  CHECK(error_kind([&] { parse("A B\n"); }) == ErrorKind::SyntaxError);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nMORPHISMS\nf A -> A\n"); }) == ErrorKind::SyntaxError);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nSIZE\nA = -1\n"); }) == ErrorKind::SyntaxError);
  CHECK(error_kind([&] { parse("OBJECTS\nA B\nSIZE\nA = 1\n"); }) == ErrorKind::SyntaxError);
  CHECK(error_kind([&] { parse("OBJECTS\nA\nOBJECTS\nB\n"); }) == ErrorKind::SyntaxError);
  CHECK(detail("OBJECTS\nA\n\nMORPHISMS\nf : A -> B\n").find("t:5:") == 0);
  CHECK(detail("# c\nOBJECTS\nA A\n").find("t:3:") == 0);
  // Declared identities.
  const CategoryFile f = parse("OBJECTS\nA\nMORPHISMS\none : A -> A\nID\nA = one\n");
  CHECK(f.raw.morphisms.size() == 1);
  CHECK(f.raw.identity[0] == 0);
  // Incomplete composition tables are rejected when loading.
  CHECK(error_kind([&] {
          load_category(parse("OBJECTS\n0 A\nMORPHISMS\nz : 0 -> A\nt : A -> 0\n"), "x");
        }) == ErrorKind::MissingComposite);
}

TEST_CASE("round trip through the file format") {
  std::vector<ZooContext> cases = {make_zoo("trivial"), make_zoo("vect:q=2,N=2"), make_zoo("pointed_sets:N=2"),
                                   make_zoo("file:" + fixture("square_ok.cat")),
                                   make_zoo("file:" + fixture("iso_pair.cat"))};
  for (const ZooContext& z : cases) {
    CAPTURE(z.ctx->name);
    const MorSet w = isos_of(*z.ctx);
    const std::string first = write_category(*z.ctx, &w);
    std::istringstream in1(first);
    const ZooContext again = load_category(parse_category(in1, "rt"), z.ctx->name);
    REQUIRE(again.w);
    CHECK(again.ctx->num_objects() == z.ctx->num_objects());
    CHECK(again.ctx->cat().num_morphisms() == z.ctx->cat().num_morphisms());
    CHECK(again.ctx->budget == z.ctx->budget);
    CHECK(again.ctx->isos().num_classes() == z.ctx->isos().num_classes());
    CHECK(again.ctx->stats.spans_in_budget == z.ctx->stats.spans_in_budget);
    CHECK(*again.w == isos_of(*again.ctx));
    // The isomorphism by names, checked as a functor that preserves cof both ways.
    const FinCat& a = z.ctx->cat();
    const FinCat& b = again.ctx->cat();
    Functor F{z.ctx->cat_ptr(), again.ctx->cat_ptr(), {}, {}};
    for (ObjId x = 0; x < static_cast<ObjId>(a.num_objects()); ++x) F.obj_map.push_back(*b.find_object(a.object_name(x)));
    for (MorId m = 0; m < static_cast<MorId>(a.num_morphisms()); ++m) {
      std::string name = a.is_identity(m) ? "id_" + a.object_name(a.src(m))
                         : a.has_morphism_names() ? a.morphism_name(m)
                                                  : "m" + std::to_string(m);
      const auto image = b.find_morphism(name);
      REQUIRE(image);
      F.mor_map.push_back(*image);
      CHECK(again.ctx->is_cof(*image) == z.ctx->is_cof(m));
    }
    CHECK_NOTHROW(validate_functor(F));
    CHECK(is_isomorphism_of_categories(F));
    // Writing is stable after one round.
    const std::string second = write_category(*again.ctx, &*again.w);
    std::istringstream in2(second);
    const ZooContext third = load_category(parse_category(in2, "rt"), z.ctx->name);
    CHECK(write_category(*third.ctx, &*third.w) == second);
  }
}

// ---------------------------------------------------------------------------
// Equivalences and exact functors

TEST_CASE("skeleton inclusion of pointed sets is an equivalence") {
  const CtxPtr skel = zoo("pointed_sets:N=3");
  const CtxPtr full = zoo("pointed_subsets:N=3");
  std::vector<ObjId> objs;
  for (const std::string name : {"{}", "{1}", "{1,2}", "{1,2,3}"}) objs.push_back(obj(*full, name));
  const Functor F = functor_by_elements(skel->cat_ptr(), full->cat_ptr(), obj(*skel, "<1>"), obj(*full, "{1}"), objs);
  CHECK_NOTHROW(validate_functor(F));
  const EquivalenceWitness w = equivalence_check(F);
  CHECK(w.equivalent);
  CHECK(!is_isomorphism_of_categories(F));
  // Hom-sets of the skeleton match those of the corresponding subsets.
  for (ObjId a = 0; a < 4; ++a)
    for (ObjId b = 0; b < 4; ++b) CHECK(skel->cat().hom(a, b).size() == full->cat().hom(F(a), F(b)).size());
  const ExactFunctor e = validate_exact(F, skel, full);
  CHECK(e.squares_checked > 0);
}

TEST_CASE("exact functors") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  CHECK_NOTHROW(validate_exact(identity_functor(v->cat_ptr()), v, v));
  const Functor zero = constant_zero(v, v);
  CHECK_NOTHROW(validate_functor(zero));
  CHECK_NOTHROW(validate_exact(zero, v, v));
  // Identity on objects and morphisms from the maximal to the minimal pair.
  const CtxPtr maximal = make_zoo("file:" + fixture("pointed_one_maximal.cat")).ctx;
  const CtxPtr plain = make_zoo("file:" + fixture("pointed_one.cat")).ctx;
  Functor same{maximal->cat_ptr(), plain->cat_ptr(), {0, 1}, {}};
  for (MorId m = 0; m < static_cast<MorId>(maximal->cat().num_morphisms()); ++m)
    same.mor_map.push_back(*plain->cat().find_morphism(maximal->cat().morphism_name(m)));
  CHECK_NOTHROW(validate_functor(same));
  CHECK(error_kind([&] { validate_exact(same, maximal, plain); }) == ErrorKind::CofNotPreserved);
}

TEST_CASE("forgetful functor from vect to pointed sets does not preserve pushouts") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  const CtxPtr p = zoo("pointed_sets:N=3");
  const Functor U = functor_by_elements(v->cat_ptr(), p->cat_ptr(), obj(*v, "F2"), obj(*p, "<1>"),
                                        {obj(*p, "<0>"), obj(*p, "<1>"), obj(*p, "<3>")});
  CHECK_NOTHROW(validate_functor(U));
  for (MorId m = 0; m < static_cast<MorId>(v->cat().num_morphisms()); ++m)
    if (v->is_cof(m)) CHECK(p->is_cof(U.on_morphism(m)));
  CHECK(error_kind([&] { validate_exact(U, v, p); }) == ErrorKind::PushoutNotPreserved);
}

// ---------------------------------------------------------------------------
// Direct sums

TEST_CASE("direct sums") {
  const CtxPtr a = zoo("vect:q=2,N=2");
  const CtxPtr b = zoo("pointed_sets:N=2");
  const DirectSum ab = direct_sum(a, b);
  const DirectSum ba = direct_sum(b, a);
  CHECK(ab.ctx->num_objects() == a->num_objects() * b->num_objects());
  CHECK(ab.ctx->cat().num_morphisms() == 713);
  CHECK(ab.ctx->zero == ab.object(a->zero, b->zero));
  CHECK(ab.ctx->budget == 2);
  // Swap is an isomorphism of categories and an involution.
  const Functor s = sum_swap(ab, ba);
  const Functor t = sum_swap(ba, ab);
  CHECK_NOTHROW(validate_functor(s));
  CHECK(is_isomorphism_of_categories(s));
  const Functor st = compose_functors(t, s);
  CHECK(st.obj_map == identity_functor(ab.ctx->cat_ptr()).obj_map);
  CHECK(st.mor_map == identity_functor(ab.ctx->cat_ptr()).mor_map);
  CHECK_NOTHROW(validate_exact(s, ab.ctx, ba.ctx));
  for (int side : {0, 1}) {
    CHECK_NOTHROW(validate_exact(sum_projection(ab, side), ab.ctx, side == 0 ? a : b));
    CHECK_NOTHROW(validate_exact(sum_inclusion(ab, side), side == 0 ? a : b, ab.ctx));
  }
  // A + 0 is isomorphic to A.
  const DirectSum a0 = direct_sum(a, zoo("trivial"));
  CHECK(is_isomorphism_of_categories(sum_projection(a0, 0)));
  // Chosen pushouts are componentwise up to isomorphism.
  for (const Span& sp : span_orbits(*ab.ctx, false, 1'000'000).reps) {
    const Cocone k = ab.ctx->pushout(sp.f, sp.g);
    const auto [fa, fb] = ab.split(sp.f);
    const auto [ga, gb] = ab.split(sp.g);
    const ObjId pa = a->pushout_any(fa, ga)->apex;
    const ObjId pb = b->pushout_any(fb, gb)->apex;
    CHECK(k.apex == ab.object(pa, pb));
  }
}

TEST_CASE("direct sum zoo spec") {
  const ZooContext z = make_zoo("vect:q=2,N=2+vect:q=2,N=2");
  REQUIRE(z.sum);
  CHECK(z.summands.size() == 2);
  CHECK(z.ctx->num_objects() == 9);
  CHECK(z.ctx->cat().num_morphisms() == 31 * 31);
  CHECK(z.ctx->cat().object_name(z.sum->object(1, 2)) == "(F2,F2^2)");
}

// ---------------------------------------------------------------------------
// Labelings

TEST_CASE("trivial labelings") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  const Labeling iso = validate_labeling(v, isos_of(*v));
  CHECK(iso.complete);
  CHECK(iso.cubes_checked > 0);
  CHECK(labeled_objects(iso).ctx->num_objects() == 1);
  const Labeling all = validate_labeling(v, MorSet(v->cat().num_morphisms(), 1));
  CHECK(labeled_objects(all).ctx->num_objects() == v->num_objects());
  MorSet missing = isos_of(*v);
  missing[ix(v->cat().id(obj(*v, "F2")))] = 0;
  CHECK(error_kind([&] { validate_labeling(v, missing); }) == ErrorKind::MissingIso);
}

TEST_CASE("factor labeling on a direct sum") {
  auto factor = [](const DirectSum& s) {
    MorSet w(s.ctx->cat().num_morphisms(), 0);
    for (MorId m = 0; m < static_cast<MorId>(w.size()); ++m) w[ix(m)] = s.left->is_iso(s.split(m).first) ? 1 : 0;
    return w;
  };
  const DirectSum small = direct_sum(zoo("vect:q=2,N=2"), zoo("pointed_sets:N=1"));
  CHECK(brute_gluing(*small.ctx, factor(small)));
  CHECK(validate_labeling(small.ctx, factor(small)).complete);
  const DirectSum s = direct_sum(zoo("vect:q=2,N=2"), zoo("vect:q=2,N=2"));
  const Labeling l = validate_labeling(s.ctx, factor(s));
  CHECK(l.complete);
  // A^w: objects (0, V).
  CHECK(labeled_objects(l).ctx->num_objects() == 3);
}

TEST_CASE("gluing violation") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  MorSet w = isos_of(*v);
  for (MorId m : v->cat().hom(v->zero, obj(*v, "F2"))) w[ix(m)] = 1;
  CHECK(!brute_gluing(*v, w));
  CHECK(error_kind([&] { validate_labeling(v, w); }) == ErrorKind::GluingAxiomViolated);
  try {
    validate_labeling(v, w);
  } catch (const Error& e) {
    CHECK(e.detail().find("cube") != std::string::npos);
  }
}

TEST_CASE("gluing verdicts agree with brute force") {
  for (const char* spec : {"vect:q=2,N=2", "pointed_sets:N=2"}) {
    CAPTURE(spec);
    const CtxPtr v = zoo(spec);
    const FinCat& c = v->cat();
    std::mt19937 rng(11);
    int violations = 0;
    for (int trial = 0; trial < 40; ++trial) {
      MorSet w = isos_of(*v);
      for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m)
        if (rng() % 6 == 0) w[ix(m)] = 1;
      w = close_under_composition(c, w);
      const bool ok = brute_gluing(*v, w);
      const auto kind = error_kind([&] { validate_labeling(v, w); });
      CHECK(ok == !kind.has_value());
      if (!ok) {
        CHECK(kind == ErrorKind::GluingAxiomViolated);
        ++violations;
      }
    }
    CHECK(violations > 0);
  }
}

// ---------------------------------------------------------------------------
// Weak cofinality

TEST_CASE("even-dimensional spaces are weakly cofinal") {
  const CtxPtr v = zoo("vect:q=2,N=4");
  const SubContext even = full_subcontext(v, {0, 2, 4}, "even");
  const CofinalityWitness w = weakly_cofinal_check(even);
  CHECK(w.cofinal);
  REQUIRE(w.complements.size() == 5);
  // Parity: dim X + dim Y is even.
  for (std::size_t x = 0; x < w.complements.size(); ++x) {
    const auto [y, wedge] = w.complements[x];
    CHECK((static_cast<long>(x) + v->size_of(y)) % 2 == 0);
    CHECK(v->size_of(wedge) == static_cast<long>(x) + v->size_of(y));
  }
}

TEST_CASE("cofinality edge cases") {
  const CtxPtr v = zoo("vect:q=2,N=2");
  CHECK(weakly_cofinal_check(full_subcontext(v, {0, 1, 2}, "all")).cofinal);
  const CofinalityWitness zero = weakly_cofinal_check(full_subcontext(v, {0}, "zero"));
  CHECK(!zero.cofinal);
  CHECK(zero.reason.find("F2") != std::string::npos);
  // The odd-dimensional spaces do not form a Waldhausen subcategory.
  CHECK(error_kind([&] { full_subcontext(zoo("vect:q=2,N=3"), {0, 1, 3}, "odd"); }) == ErrorKind::MissingPushout);
  // At budget 2 the wedge F2^3 v F2 cannot be formed.
  const CtxPtr small = zoo("vect:q=2,N=4", 2);
  CHECK(error_kind([&] { weakly_cofinal_check(full_subcontext(small, {0, 2, 4}, "even")); }) ==
        ErrorKind::BudgetTooSmallForWedge);
}
