#pragma once

// Finite categories as explicit object/morphism tables.
//
// Morphisms are numbered so that every hom-set Hom(a, b) is a contiguous
// index range; morphisms are sorted by (source, target). Composition is
// delegated to a Composer, which is either an explicit table (categories read
// from files), a per-block lookup table, or a structural rule (matrix
// product, componentwise composition of tuples).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "waldkit/errors.hpp"

namespace waldkit {

using ObjId = std::int32_t;
using MorId = std::int32_t;
inline constexpr std::int32_t kNone = -1;

struct MorRange {
  MorId first = 0;
  MorId last = 0;  // one past the end

  struct iterator {
    MorId value;
    MorId operator*() const { return value; }
    iterator& operator++() {
      ++value;
      return *this;
    }
    bool operator==(const iterator&) const = default;
  };
  iterator begin() const { return {first}; }
  iterator end() const { return {last}; }
  std::size_t size() const { return static_cast<std::size_t>(last - first); }
  bool empty() const { return first == last; }
  bool contains(MorId m) const { return m >= first && m < last; }
  MorId operator[](std::size_t i) const { return first + static_cast<MorId>(i); }
};

class Composer {
 public:
  virtual ~Composer() = default;
  // g o f for a composable pair.
  virtual MorId compose(MorId g, MorId f) const = 0;
  // Direct inverse computation: kNone when f is not invertible, nullopt when
  // this composer has no shortcut and the caller must search.
  virtual std::optional<MorId> fast_inverse(MorId f) const {
    (void)f;
    return std::nullopt;
  }
};

class FinCat {
 public:
  FinCat() = default;
  // Morphisms must already be sorted by (src, tgt).
  FinCat(std::vector<std::string> object_names, std::vector<ObjId> src,
         std::vector<ObjId> tgt, std::vector<MorId> identity,
         std::shared_ptr<const Composer> composer,
         std::vector<std::string> morphism_names = {});

  std::size_t num_objects() const { return object_names_.size(); }
  std::size_t num_morphisms() const { return src_.size(); }

  ObjId src(MorId m) const { return src_[static_cast<std::size_t>(m)]; }
  ObjId tgt(MorId m) const { return tgt_[static_cast<std::size_t>(m)]; }
  MorId id(ObjId x) const { return identity_[static_cast<std::size_t>(x)]; }
  bool is_identity(MorId m) const { return id(src(m)) == m; }

  MorRange hom(ObjId a, ObjId b) const;
  MorRange out(ObjId a) const;
  std::size_t local_index(MorId m) const {
    return static_cast<std::size_t>(m - hom(src(m), tgt(m)).first);
  }

  // Throws NotComposable when tgt(f) != src(g).
  MorId compose(MorId g, MorId f) const;
  MorId compose_unchecked(MorId g, MorId f) const { return composer_->compose(g, f); }

  const std::string& object_name(ObjId x) const {
    return object_names_[static_cast<std::size_t>(x)];
  }
  std::string morphism_name(MorId m) const;
  bool has_morphism_names() const { return !morphism_names_.empty(); }
  std::optional<ObjId> find_object(const std::string& name) const;
  std::optional<MorId> find_morphism(const std::string& name) const;

  const Composer& composer() const { return *composer_; }
  std::shared_ptr<const Composer> composer_ptr() const { return composer_; }
  FinCat with_composer(std::shared_ptr<const Composer> composer) const;

  const std::vector<std::string>& object_names() const { return object_names_; }

 private:
  std::vector<std::string> object_names_;
  std::vector<ObjId> src_;
  std::vector<ObjId> tgt_;
  std::vector<MorId> identity_;
  std::vector<MorId> out_offset_;
  std::vector<std::string> morphism_names_;
  std::shared_ptr<const Composer> composer_;
};

using CatPtr = std::shared_ptr<const FinCat>;

// ---------------------------------------------------------------------------
// Raw tables and validation

struct RawCategory {
  struct Morphism {
    std::string name;
    ObjId src = 0;
    ObjId tgt = 0;
  };
  struct Composite {
    MorId g = 0;
    MorId f = 0;
    MorId h = 0;  // g o f = h
  };
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<MorId> identity;  // per object, index into morphisms
  std::vector<Composite> composites;
};

// Builds a FinCat backed by an explicit composition table. Checks identities,
// typing, totality, unit laws and associativity; the first violation is
// thrown with the offending indices (raw numbering).
FinCat validate_fincat(const RawCategory& raw);

// Unit laws and exhaustive associativity for an already-built category.
// Throws MissingIdentity / NonAssociative.
void check_category_axioms(const FinCat& c, bool parallel = true);

// Replaces the composer by per-(a,b,c) lookup tables when the number of
// composable pairs is at most `max_pairs`; otherwise returns c unchanged.
FinCat with_block_tables(const FinCat& c, std::size_t max_pairs = std::size_t{1} << 24);

// Small categories used throughout: the poset 0 < 1 < ... < m, discrete
// categories and one-object monoids from a multiplication table.
CatPtr poset_chain(int m);
CatPtr discrete_category(int n);
CatPtr monoid_category(const std::vector<std::vector<int>>& table, int unit);

// ---------------------------------------------------------------------------
// Functors and natural transformations

struct Functor {
  CatPtr source;
  CatPtr target;
  std::vector<ObjId> obj_map;
  std::vector<MorId> mor_map;

  ObjId operator()(ObjId x) const { return obj_map[static_cast<std::size_t>(x)]; }
  MorId on_morphism(MorId m) const { return mor_map[static_cast<std::size_t>(m)]; }
};

// Preservation of src/tgt, identities and (exhaustively) composition.
void validate_functor(const Functor& f);
Functor identity_functor(CatPtr c);
Functor compose_functors(const Functor& g, const Functor& f);

struct NatTrans {
  Functor source;
  Functor target;
  std::vector<MorId> components;
};

void validate_nat_trans(const NatTrans& t);

// ---------------------------------------------------------------------------
// Isomorphisms

struct IsoData {
  std::vector<MorId> inverse;        // kNone for non-isomorphisms
  std::vector<std::int32_t> class_of;  // object -> iso class number
  std::vector<ObjId> representatives;  // lowest-index object of each class
  // Per object: a generating set of Aut(x), chosen greedily in index order.
  std::vector<std::vector<MorId>> aut_generators;

  bool is_iso(MorId m) const { return inverse[static_cast<std::size_t>(m)] != kNone; }
  std::size_t num_classes() const { return representatives.size(); }
};

IsoData compute_isos(const FinCat& c);
std::vector<MorId> isomorphisms(const FinCat& c);

// ---------------------------------------------------------------------------
// Subcategories

struct Subcategory {
  CatPtr parent;
  CatPtr cat;
  std::vector<ObjId> object_to_parent;
  std::vector<MorId> morphism_to_parent;
  std::vector<ObjId> parent_to_object;     // kNone outside
  std::vector<MorId> parent_to_morphism;   // kNone outside

  Functor inclusion() const;
};

// Subcategory on `objects` keeping parent morphisms between them that satisfy
// `keep`. With verify=true, identities and closure under composition are
// checked exhaustively (NotASubcategory).
Subcategory make_subcategory(CatPtr parent, std::vector<ObjId> objects,
                             const std::function<bool(MorId)>& keep, bool verify);
Subcategory full_subcategory(CatPtr parent, std::vector<ObjId> objects);

// Wide subcategory of isomorphisms; a groupoid.
Subcategory interior_groupoid(CatPtr c);

std::vector<ObjId> zero_objects(const FinCat& c);

// ---------------------------------------------------------------------------
// Spans, cocones and pushouts

struct Span {
  MorId f = kNone;  // X -> Y
  MorId g = kNone;  // X -> Z
};

struct Cocone {
  ObjId apex = kNone;
  MorId u = kNone;  // Y -> apex
  MorId v = kNone;  // Z -> apex
};

bool is_cocone(const FinCat& c, const Span& s, const Cocone& k);

// Search order for the enumeration of candidate pushouts. seed == 0 is the
// natural (lowest index first) order; other seeds permute candidate objects
// and candidate cocones deterministically.
struct SearchOrder {
  std::uint64_t seed = 0;
};

struct Mediation {
  Cocone cocone;
  MorId mediator = kNone;
};

struct PushoutCertificate {
  Cocone pushout;
  std::size_t cocones_checked = 0;
  std::vector<Mediation> mediations;  // filled only when requested
};

// Enumeration search for a pushout of s. Returns nullopt when no colimit
// cocone exists; throws NonUniqueMediator if the best candidate admits
// mediators for every cocone but not uniquely.
std::optional<PushoutCertificate> find_pushout(const FinCat& c, const Span& s,
                                               const SearchOrder& order = {},
                                               bool record_mediations = false);

// Number of cocones verified when k is a pushout of s, nullopt otherwise.
std::optional<std::size_t> certify_pushout(const FinCat& c, const Span& s, const Cocone& k);

// The unique h: k.apex -> w.apex with h u = w.u and h v = w.v, kNone if none.
MorId find_mediator(const FinCat& c, const Cocone& k, const Cocone& w);

// ---------------------------------------------------------------------------
// Equivalences

struct EquivalenceWitness {
  bool equivalent = false;
  std::string reason;
  // For every target object y: a source object x and an iso F(x) -> y.
  std::vector<std::pair<ObjId, MorId>> iso_choice;
  std::size_t hom_sets_checked = 0;
};

EquivalenceWitness equivalence_check(const Functor& f);
// Bijective on objects and on every hom-set.
bool is_isomorphism_of_categories(const Functor& f);

}  // namespace waldkit
