#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "waldkit/diagram.hpp"
#include "waldkit/fincat.hpp"
#include "waldkit/kernels.hpp"

using namespace waldkit;

namespace {

// Builds a raw category from named morphisms and composites; identities are
// named id_<obj> and added automatically.
struct Builder {
  RawCategory raw;
  std::map<std::string, MorId> mor;

  ObjId object(const std::string& name) {
    raw.objects.push_back(name);
    const auto x = static_cast<ObjId>(raw.objects.size() - 1);
    raw.identity.push_back(add("id_" + name, x, x));
    return x;
  }
  MorId add(const std::string& name, ObjId s, ObjId t) {
    raw.morphisms.push_back({name, s, t});
    return mor[name] = static_cast<MorId>(raw.morphisms.size() - 1);
  }
  void comp(const std::string& g, const std::string& f, const std::string& h) {
    raw.composites.push_back({mor.at(g), mor.at(f), mor.at(h)});
  }
};

bool brute_associative(const std::vector<std::vector<int>>& t) {
  const int k = static_cast<int>(t.size());
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        if (t[a][t[b][c]] != t[t[a][b]][c]) return false;
  return true;
}

// Category with a span whose only cocone factors through two mediators.
FinCat weak_pushout_category() {
  Builder b;
  const ObjId x = b.object("X");
  const ObjId y = b.object("Y");
  const ObjId z = b.object("Z");
  const ObjId p = b.object("P");
  b.add("f", x, y);
  b.add("g", x, z);
  b.add("u", y, p);
  b.add("v", z, p);
  b.add("w", x, p);
  b.add("e", p, p);
  b.comp("u", "f", "w");
  b.comp("v", "g", "w");
  b.comp("e", "u", "u");
  b.comp("e", "v", "v");
  b.comp("e", "w", "w");
  b.comp("e", "e", "e");
  return validate_fincat(b.raw);
}

}  // namespace

TEST_CASE("poset 0<1<2 is a category with 6 morphisms") {
  CatPtr c = poset_chain(2);
  CHECK(c->num_objects() == 3);
  CHECK(c->num_morphisms() == 6);
  const MorId m01 = c->hom(0, 1).first;
  const MorId m12 = c->hom(1, 2).first;
  CHECK(c->compose(m12, m01) == c->hom(0, 2).first);
  CHECK(c->compose(c->id(1), m01) == m01);
  CHECK(c->compose(m01, c->id(0)) == m01);
  CHECK_THROWS_AS(c->compose(m01, m12), Error);
  try {
    c->compose(m01, m12);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotComposable);
  }
  CHECK(zero_objects(*poset_chain(1)).empty());
}

TEST_CASE("mistyped composite is rejected") {
  Builder b;
  const ObjId x = b.object("x");
  const ObjId y = b.object("y");
  b.add("f", x, y);
  b.comp("f", "id_x", "id_x");
  try {
    validate_fincat(b.raw);
    FAIL("expected IllTypedComposite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllTypedComposite);
    CHECK(e.detail().find("f[") != std::string::npos);
  }
}

TEST_CASE("missing composite and missing identity are reported") {
  Builder b;
  const ObjId x = b.object("x");
  const ObjId y = b.object("y");
  const ObjId z = b.object("z");
  b.add("f", x, y);
  b.add("g", y, z);
  try {
    validate_fincat(b.raw);
    FAIL("expected MissingComposite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingComposite);
  }
  RawCategory bad = b.raw;
  bad.identity[1] = b.mor["f"];
  try {
    validate_fincat(bad);
    FAIL("expected MissingIdentity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingIdentity);
  }
}

TEST_CASE("monoid tables: Z/2 is valid, a non-associative table is not") {
  CatPtr z2 = monoid_category({{0, 1}, {1, 0}}, 0);
  CHECK(z2->num_morphisms() == 2);
  auto g = interior_groupoid(z2);
  CHECK(g.cat->num_morphisms() == 2);

  const std::vector<std::vector<int>> table = {{0, 1, 2}, {1, 2, 2}, {2, 1, 1}};
  REQUIRE_FALSE(brute_associative(table));
  try {
    monoid_category(table, 0);
    FAIL("expected NonAssociative");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonAssociative);
  }
}

TEST_CASE("interior groupoid of a poset is discrete") {
  auto g = interior_groupoid(poset_chain(1));
  CHECK(g.cat->num_objects() == 2);
  CHECK(g.cat->num_morphisms() == 2);
  check_category_axioms(*g.cat);
}

TEST_CASE("pushout in a poset is the join") {
  Builder b;
  const ObjId a = b.object("a");
  const ObjId x = b.object("b");
  const ObjId c = b.object("c");
  const ObjId d = b.object("d");
  b.add("ab", a, x);
  b.add("ac", a, c);
  b.add("bd", x, d);
  b.add("cd", c, d);
  b.add("ad", a, d);
  b.comp("bd", "ab", "ad");
  b.comp("cd", "ac", "ad");
  const FinCat cat = validate_fincat(b.raw);
  const Span s{*cat.find_morphism("ab"), *cat.find_morphism("ac")};
  auto po = find_pushout(cat, s, {}, true);
  REQUIRE(po);
  CHECK(po->pushout.apex == d);
  // one cocone, at d, mediated by the identity
  REQUIRE(po->mediations.size() == 1);
  CHECK(po->mediations[0].mediator == cat.id(d));
  CHECK(certify_pushout(cat, s, po->pushout).has_value());
  // the same span inside the full subcategory without d has no pushout
  auto sub = full_subcategory(std::make_shared<const FinCat>(cat), {a, x, c});
  const Span s2{sub.parent_to_morphism[static_cast<std::size_t>(s.f)],
                sub.parent_to_morphism[static_cast<std::size_t>(s.g)]};
  CHECK_FALSE(find_pushout(*sub.cat, s2).has_value());
}

TEST_CASE("weakly universal cocone with two mediators is NonUniqueMediator") {
  const FinCat cat = weak_pushout_category();
  const Span s{*cat.find_morphism("f"), *cat.find_morphism("g")};
  try {
    find_pushout(cat, s);
    FAIL("expected NonUniqueMediator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUniqueMediator);
  }
}

TEST_CASE("search order does not change the pushout apex up to iso") {
  Builder b;
  const ObjId a = b.object("a");
  const ObjId x = b.object("b");
  const ObjId c = b.object("c");
  const ObjId d = b.object("d");
  b.add("ab", a, x);
  b.add("ac", a, c);
  b.add("bd", x, d);
  b.add("cd", c, d);
  b.add("ad", a, d);
  b.comp("bd", "ab", "ad");
  b.comp("cd", "ac", "ad");
  const FinCat cat = validate_fincat(b.raw);
  const Span s{*cat.find_morphism("ab"), *cat.find_morphism("ac")};
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    auto po = find_pushout(cat, s, SearchOrder{seed});
    REQUIRE(po);
    CHECK(po->pushout.apex == d);
  }
}

TEST_CASE("equivalence check") {
  CatPtr c = poset_chain(2);
  auto w = equivalence_check(identity_functor(c));
  CHECK(w.equivalent);
  CHECK(w.iso_choice.size() == 3);
  CHECK(is_isomorphism_of_categories(identity_functor(c)));

  CatPtr d = discrete_category(2);
  Functor constant{d, d, {0, 0}, {d->id(0), d->id(0)}};
  validate_functor(constant);
  CHECK_FALSE(equivalence_check(constant).equivalent);
}

TEST_CASE("functor validation catches broken composition") {
  CatPtr c = poset_chain(2);
  Functor f = identity_functor(c);
  validate_functor(f);
  f.obj_map[1] = 2;
  CHECK_THROWS_AS(validate_functor(f), Error);
}

TEST_CASE("functor categories") {
  CatPtr p1 = poset_chain(1);
  SUBCASE("Fun(point, C) is C") {
    auto fc = functor_category(poset_chain(0), p1);
    CHECK(fc.cat->num_objects() == p1->num_objects());
    CHECK(fc.cat->num_morphisms() == p1->num_morphisms());
    check_category_axioms(*fc.cat);
  }
  SUBCASE("Fun(0<1, 0<1) has as many objects as monotone maps") {
    int monotone = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) monotone += a <= b ? 1 : 0;
    auto fc = functor_category(p1, p1);
    CHECK(fc.cat->num_objects() == static_cast<std::size_t>(monotone));
    check_category_axioms(*fc.cat);
    // natural transformations between monotone maps: pointwise order
    std::size_t mors = 0;
    for (const auto& f : fc.objects)
      for (const auto& g : fc.objects)
        if (f.obj_map[0] <= g.obj_map[0] && f.obj_map[1] <= g.obj_map[1]) ++mors;
    CHECK(fc.cat->num_morphisms() == mors);
  }
  SUBCASE("Fun over the empty category is terminal") {
    auto fc = functor_category(discrete_category(0), p1);
    CHECK(fc.cat->num_objects() == 1);
    CHECK(fc.cat->num_morphisms() == 1);
  }
  SUBCASE("functor ceiling") {
    DiagramOptions opt;
    opt.functor_limit = 2;
    try {
      functor_category(p1, p1, opt);
      FAIL("expected EnumerationLimitExceeded");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EnumerationLimitExceeded);
    }
  }
  SUBCASE("evaluation is a functor") {
    auto fc = functor_category(p1, poset_chain(2));
    validate_functor(fc.evaluation(0));
    validate_functor(fc.evaluation(1));
  }
}

TEST_CASE("iso classes use lowest-index representatives") {
  Builder b;
  const ObjId x = b.object("x");
  const ObjId y = b.object("y");
  const ObjId z = b.object("z");
  b.add("i", y, z);
  b.add("j", z, y);
  b.add("k", x, y);
  b.add("kk", x, z);
  b.comp("j", "i", "id_y");
  b.comp("i", "j", "id_z");
  b.comp("i", "k", "kk");
  b.comp("j", "kk", "k");
  const FinCat cat = validate_fincat(b.raw);
  const IsoData iso = compute_isos(cat);
  CHECK(iso.num_classes() == 2);
  CHECK(iso.representatives == std::vector<ObjId>{x, y});
  CHECK(iso.class_of[static_cast<std::size_t>(z)] == iso.class_of[static_cast<std::size_t>(y)]);
  CHECK(isomorphisms(cat).size() == 5);  // three identities, i, j
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const FinCat cat = weak_pushout_category();
  CHECK_FALSE(kernels::associativity_serial(cat).has_value());
  CHECK_FALSE(kernels::associativity_parallel(cat).has_value());
  auto fc = functor_category(poset_chain(1), poset_chain(3));
  const auto layout = kernels::block_layout(*fc.cat);
  CHECK(kernels::block_table_serial(*fc.cat, layout) == kernels::block_table_parallel(*fc.cat, layout));
  const FinCat fast = with_block_tables(*fc.cat);
  for (MorId f = 0; f < static_cast<MorId>(fast.num_morphisms()); ++f)
    for (MorId g : fast.out(fast.tgt(f))) CHECK(fast.compose_unchecked(g, f) == fc.cat->compose_unchecked(g, f));
}

TEST_CASE("subcategory closure is verified") {
  CatPtr c = poset_chain(2);
  // keep 0->1 and 1->2 but not their composite
  const MorId m02 = c->hom(0, 2).first;
  try {
    make_subcategory(c, {0, 1, 2}, [&](MorId m) { return m != m02; }, true);
    FAIL("expected NotASubcategory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotASubcategory);
  }
}
