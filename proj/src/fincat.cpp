#include "waldkit/fincat.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "waldkit/kernels.hpp"

namespace waldkit {

FinCat::FinCat(std::vector<std::string> object_names, std::vector<ObjId> src,
               std::vector<ObjId> tgt, std::vector<MorId> identity,
               std::shared_ptr<const Composer> composer,
               std::vector<std::string> morphism_names)
    : object_names_(std::move(object_names)),
      src_(std::move(src)),
      tgt_(std::move(tgt)),
      identity_(std::move(identity)),
      morphism_names_(std::move(morphism_names)),
      composer_(std::move(composer)) {
  const std::size_t n = object_names_.size();
  out_offset_.assign(n + 1, 0);
  for (ObjId s : src_) ++out_offset_[static_cast<std::size_t>(s) + 1];
  for (std::size_t i = 0; i < n; ++i) out_offset_[i + 1] += out_offset_[i];
}

MorRange FinCat::out(ObjId a) const {
  const auto i = static_cast<std::size_t>(a);
  return {out_offset_[i], out_offset_[i + 1]};
}

MorRange FinCat::hom(ObjId a, ObjId b) const {
  const MorRange o = out(a);
  const auto* base = tgt_.data();
  const auto* lo = std::lower_bound(base + o.first, base + o.last, b);
  const auto* hi = std::upper_bound(lo, base + o.last, b);
  return {static_cast<MorId>(lo - base), static_cast<MorId>(hi - base)};
}

MorId FinCat::compose(MorId g, MorId f) const {
  if (tgt(f) != src(g)) {
    throw Error(ErrorKind::NotComposable,
                morphism_name(g) + " o " + morphism_name(f) + ": target " +
                    object_name(tgt(f)) + " != source " + object_name(src(g)));
  }
  return composer_->compose(g, f);
}

std::string FinCat::morphism_name(MorId m) const {
  if (!morphism_names_.empty()) return morphism_names_[static_cast<std::size_t>(m)];
  std::ostringstream out;
  out << object_name(src(m)) << "->" << object_name(tgt(m)) << '#' << local_index(m);
  return out.str();
}

std::optional<ObjId> FinCat::find_object(const std::string& name) const {
  for (std::size_t i = 0; i < object_names_.size(); ++i) {
    if (object_names_[i] == name) return static_cast<ObjId>(i);
  }
  return std::nullopt;
}

std::optional<MorId> FinCat::find_morphism(const std::string& name) const {
  for (MorId m = 0; m < static_cast<MorId>(num_morphisms()); ++m) {
    if (morphism_name(m) == name) return m;
  }
  return std::nullopt;
}

FinCat FinCat::with_composer(std::shared_ptr<const Composer> composer) const {
  FinCat copy = *this;
  copy.composer_ = std::move(composer);
  return copy;
}

// ---------------------------------------------------------------------------

namespace {

class TableComposer final : public Composer {
 public:
  TableComposer(std::size_t n, std::vector<MorId> table) : n_(n), table_(std::move(table)) {}
  MorId compose(MorId g, MorId f) const override {
    return table_[static_cast<std::size_t>(f) * n_ + static_cast<std::size_t>(g)];
  }

 private:
  std::size_t n_;
  std::vector<MorId> table_;
};

class BlockComposer final : public Composer {
 public:
  BlockComposer(const FinCat& c, kernels::BlockLayout layout, std::vector<MorId> table)
      : n_(c.num_objects()),
        layout_(std::move(layout)),
        table_(std::move(table)),
        base_(c.composer_ptr()) {
    src_.resize(c.num_morphisms());
    tgt_.resize(c.num_morphisms());
    local_.resize(c.num_morphisms());
    for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
      src_[static_cast<std::size_t>(m)] = c.src(m);
      tgt_[static_cast<std::size_t>(m)] = c.tgt(m);
      local_[static_cast<std::size_t>(m)] = static_cast<std::int32_t>(c.local_index(m));
    }
    hom_size_.assign(n_ * n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        hom_size_[a * n_ + b] =
            static_cast<std::int32_t>(c.hom(static_cast<ObjId>(a), static_cast<ObjId>(b)).size());
      }
    }
  }

  MorId compose(MorId g, MorId f) const override {
    const auto a = static_cast<std::size_t>(src_[static_cast<std::size_t>(f)]);
    const auto b = static_cast<std::size_t>(tgt_[static_cast<std::size_t>(f)]);
    const auto d = static_cast<std::size_t>(tgt_[static_cast<std::size_t>(g)]);
    const auto off = static_cast<std::size_t>(layout_.offset[(a * n_ + b) * n_ + d]);
    const auto width = static_cast<std::size_t>(hom_size_[b * n_ + d]);
    return table_[off + static_cast<std::size_t>(local_[static_cast<std::size_t>(f)]) * width +
                  static_cast<std::size_t>(local_[static_cast<std::size_t>(g)])];
  }

  std::optional<MorId> fast_inverse(MorId f) const override { return base_->fast_inverse(f); }

 private:
  std::size_t n_;
  kernels::BlockLayout layout_;
  std::vector<MorId> table_;
  std::shared_ptr<const Composer> base_;
  std::vector<ObjId> src_;
  std::vector<ObjId> tgt_;
  std::vector<std::int32_t> local_;
  std::vector<std::int32_t> hom_size_;
};

std::string raw_name(const RawCategory& raw, MorId m) {
  if (m < 0 || static_cast<std::size_t>(m) >= raw.morphisms.size()) {
    return "#" + std::to_string(m);
  }
  return raw.morphisms[static_cast<std::size_t>(m)].name + "[" + std::to_string(m) + "]";
}

}  // namespace

FinCat validate_fincat(const RawCategory& raw) {
  const std::size_t n_obj = raw.objects.size();
  const std::size_t n_mor = raw.morphisms.size();
  if (n_mor > 4096) {
    throw Error(ErrorKind::EnumerationLimitExceeded,
                std::to_string(n_mor) + " morphisms exceed the explicit-table limit of 4096");
  }
  for (std::size_t m = 0; m < n_mor; ++m) {
    const auto& mor = raw.morphisms[m];
    if (mor.src < 0 || static_cast<std::size_t>(mor.src) >= n_obj || mor.tgt < 0 ||
        static_cast<std::size_t>(mor.tgt) >= n_obj) {
      throw Error(ErrorKind::IllTypedComposite,
                  "morphism " + raw_name(raw, static_cast<MorId>(m)) + " has an unknown endpoint");
    }
  }
  if (raw.identity.size() != n_obj) {
    throw Error(ErrorKind::MissingIdentity, "identity table has " +
                                                std::to_string(raw.identity.size()) +
                                                " entries for " + std::to_string(n_obj) + " objects");
  }
  for (std::size_t x = 0; x < n_obj; ++x) {
    const MorId i = raw.identity[x];
    if (i < 0 || static_cast<std::size_t>(i) >= n_mor ||
        raw.morphisms[static_cast<std::size_t>(i)].src != static_cast<ObjId>(x) ||
        raw.morphisms[static_cast<std::size_t>(i)].tgt != static_cast<ObjId>(x)) {
      throw Error(ErrorKind::MissingIdentity,
                  "object " + raw.objects[x] + " has no identity endomorphism (" + raw_name(raw, i) + ")");
    }
  }

  // Raw table with kNone for undefined entries, in raw numbering.
  std::vector<MorId> table(n_mor * n_mor, kNone);
  auto at = [&](MorId g, MorId f) -> MorId& {
    return table[static_cast<std::size_t>(f) * n_mor + static_cast<std::size_t>(g)];
  };
  for (const auto& e : raw.composites) {
    for (MorId m : {e.g, e.f, e.h}) {
      if (m < 0 || static_cast<std::size_t>(m) >= n_mor) {
        throw Error(ErrorKind::IllTypedComposite, "composite refers to unknown morphism " + raw_name(raw, m));
      }
    }
    const auto& g = raw.morphisms[static_cast<std::size_t>(e.g)];
    const auto& f = raw.morphisms[static_cast<std::size_t>(e.f)];
    const auto& h = raw.morphisms[static_cast<std::size_t>(e.h)];
    if (f.tgt != g.src || h.src != f.src || h.tgt != g.tgt) {
      throw Error(ErrorKind::IllTypedComposite, raw_name(raw, e.g) + " o " + raw_name(raw, e.f) +
                                                    " = " + raw_name(raw, e.h) + " is ill-typed");
    }
    MorId& slot = at(e.g, e.f);
    if (slot != kNone && slot != e.h) {
      throw Error(ErrorKind::IllTypedComposite, raw_name(raw, e.g) + " o " + raw_name(raw, e.f) +
                                                    " is assigned both " + raw_name(raw, slot) +
                                                    " and " + raw_name(raw, e.h));
    }
    slot = e.h;
  }
  // Unit laws: fill missing identity composites, reject contradicting ones.
  for (std::size_t m = 0; m < n_mor; ++m) {
    const auto f = static_cast<MorId>(m);
    const auto& mor = raw.morphisms[m];
    for (auto [g, ff] : {std::pair{raw.identity[static_cast<std::size_t>(mor.tgt)], f},
                         std::pair{f, raw.identity[static_cast<std::size_t>(mor.src)]}}) {
      MorId& slot = at(g, ff);
      if (slot == kNone) slot = f;
      if (slot != f) {
        throw Error(ErrorKind::MissingIdentity, raw_name(raw, g) + " o " + raw_name(raw, ff) +
                                                    " = " + raw_name(raw, slot) + ", expected " +
                                                    raw_name(raw, f) + " (unit law)");
      }
    }
  }
  for (std::size_t f = 0; f < n_mor; ++f) {
    for (std::size_t g = 0; g < n_mor; ++g) {
      if (raw.morphisms[f].tgt != raw.morphisms[g].src) continue;
      if (at(static_cast<MorId>(g), static_cast<MorId>(f)) == kNone) {
        throw Error(ErrorKind::MissingComposite, raw_name(raw, static_cast<MorId>(g)) + " o " +
                                                     raw_name(raw, static_cast<MorId>(f)) +
                                                     " is not defined");
      }
    }
  }

  // Renumber morphisms by (src, tgt, raw index).
  std::vector<MorId> order(n_mor);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](MorId x, MorId y) {
    const auto& a = raw.morphisms[static_cast<std::size_t>(x)];
    const auto& b = raw.morphisms[static_cast<std::size_t>(y)];
    return std::pair{a.src, a.tgt} < std::pair{b.src, b.tgt};
  });
  std::vector<MorId> new_id(n_mor);
  for (std::size_t i = 0; i < n_mor; ++i) new_id[static_cast<std::size_t>(order[i])] = static_cast<MorId>(i);

  std::vector<ObjId> src(n_mor), tgt(n_mor);
  std::vector<std::string> names(n_mor);
  for (std::size_t i = 0; i < n_mor; ++i) {
    const auto& mor = raw.morphisms[static_cast<std::size_t>(order[i])];
    src[i] = mor.src;
    tgt[i] = mor.tgt;
    names[i] = mor.name;
  }
  std::vector<MorId> ident(n_obj);
  for (std::size_t x = 0; x < n_obj; ++x) ident[x] = new_id[static_cast<std::size_t>(raw.identity[x])];
  std::vector<MorId> renumbered(n_mor * n_mor, kNone);
  for (std::size_t f = 0; f < n_mor; ++f) {
    for (std::size_t g = 0; g < n_mor; ++g) {
      const MorId h = table[f * n_mor + g];
      if (h == kNone) continue;
      renumbered[static_cast<std::size_t>(new_id[f]) * n_mor + static_cast<std::size_t>(new_id[g])] =
          new_id[static_cast<std::size_t>(h)];
    }
  }
  FinCat cat(raw.objects, std::move(src), std::move(tgt), std::move(ident),
             std::make_shared<TableComposer>(n_mor, std::move(renumbered)), std::move(names));

  if (auto bad = kernels::associativity_serial(cat)) {
    throw Error(ErrorKind::NonAssociative,
                "(" + cat.morphism_name(bad->h) + " o " + cat.morphism_name(bad->g) + ") o " +
                    cat.morphism_name(bad->f) + " != " + cat.morphism_name(bad->h) + " o (" +
                    cat.morphism_name(bad->g) + " o " + cat.morphism_name(bad->f) + ")");
  }
  return cat;
}

void check_category_axioms(const FinCat& c, bool parallel) {
  for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) {
    const MorId i = c.id(x);
    if (c.src(i) != x || c.tgt(i) != x) {
      throw Error(ErrorKind::MissingIdentity, "identity of " + c.object_name(x) + " is mistyped");
    }
  }
  for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
    if (c.compose_unchecked(c.id(c.tgt(f)), f) != f || c.compose_unchecked(f, c.id(c.src(f))) != f) {
      throw Error(ErrorKind::MissingIdentity, "unit law fails for " + c.morphism_name(f));
    }
  }
  auto bad = parallel ? kernels::associativity_parallel(c) : kernels::associativity_serial(c);
  if (bad) {
    throw Error(ErrorKind::NonAssociative, "(" + c.morphism_name(bad->h) + ", " +
                                               c.morphism_name(bad->g) + ", " +
                                               c.morphism_name(bad->f) + ")");
  }
}

FinCat with_block_tables(const FinCat& c, std::size_t max_pairs) {
  if (c.num_objects() > 160) return c;
  if (kernels::composable_pairs(c) > max_pairs) return c;
  auto layout = kernels::block_layout(c);
  auto table = kernels::block_table_parallel(c, layout);
  return c.with_composer(std::make_shared<BlockComposer>(c, std::move(layout), std::move(table)));
}

CatPtr poset_chain(int m) {
  RawCategory raw;
  std::map<std::pair<int, int>, MorId> idx;
  for (int i = 0; i <= m; ++i) raw.objects.push_back(std::to_string(i));
  for (int i = 0; i <= m; ++i) {
    for (int j = i; j <= m; ++j) {
      idx[{i, j}] = static_cast<MorId>(raw.morphisms.size());
      raw.morphisms.push_back({std::to_string(i) + "<=" + std::to_string(j), i, j});
    }
  }
  for (int i = 0; i <= m; ++i) raw.identity.push_back(idx[{i, i}]);
  for (int i = 0; i <= m; ++i) {
    for (int j = i; j <= m; ++j) {
      for (int k = j; k <= m; ++k) raw.composites.push_back({idx[{j, k}], idx[{i, j}], idx[{i, k}]});
    }
  }
  return std::make_shared<const FinCat>(validate_fincat(raw));
}

CatPtr discrete_category(int n) {
  RawCategory raw;
  for (int i = 0; i < n; ++i) {
    raw.objects.push_back(std::to_string(i));
    raw.morphisms.push_back({"id_" + std::to_string(i), i, i});
    raw.identity.push_back(i);
  }
  return std::make_shared<const FinCat>(validate_fincat(raw));
}

CatPtr monoid_category(const std::vector<std::vector<int>>& table, int unit) {
  RawCategory raw;
  raw.objects.push_back("*");
  const int k = static_cast<int>(table.size());
  for (int i = 0; i < k; ++i) raw.morphisms.push_back({i == unit ? "e" : "m" + std::to_string(i), 0, 0});
  raw.identity.push_back(unit);
  for (int g = 0; g < k; ++g) {
    for (int f = 0; f < k; ++f) raw.composites.push_back({g, f, table[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)]});
  }
  return std::make_shared<const FinCat>(validate_fincat(raw));
}

// ---------------------------------------------------------------------------

void validate_functor(const Functor& F) {
  const FinCat& s = *F.source;
  const FinCat& t = *F.target;
  if (F.obj_map.size() != s.num_objects() || F.mor_map.size() != s.num_morphisms()) {
    throw Error(ErrorKind::InvalidFunctor, "object or morphism map has the wrong length");
  }
  for (ObjId x = 0; x < static_cast<ObjId>(s.num_objects()); ++x) {
    const ObjId y = F(x);
    if (y < 0 || static_cast<std::size_t>(y) >= t.num_objects()) {
      throw Error(ErrorKind::InvalidFunctor, "object " + s.object_name(x) + " maps outside the target");
    }
    if (F.on_morphism(s.id(x)) != t.id(y)) {
      throw Error(ErrorKind::InvalidFunctor, "identity of " + s.object_name(x) + " is not preserved");
    }
  }
  for (MorId m = 0; m < static_cast<MorId>(s.num_morphisms()); ++m) {
    const MorId fm = F.on_morphism(m);
    if (fm < 0 || static_cast<std::size_t>(fm) >= t.num_morphisms() || t.src(fm) != F(s.src(m)) ||
        t.tgt(fm) != F(s.tgt(m))) {
      throw Error(ErrorKind::InvalidFunctor, "morphism " + s.morphism_name(m) + " is sent to a mistyped morphism");
    }
  }
  for (MorId f = 0; f < static_cast<MorId>(s.num_morphisms()); ++f) {
    for (MorId g : s.out(s.tgt(f))) {
      if (F.on_morphism(s.compose_unchecked(g, f)) !=
          t.compose_unchecked(F.on_morphism(g), F.on_morphism(f))) {
        throw Error(ErrorKind::InvalidFunctor, "composite " + s.morphism_name(g) + " o " +
                                                   s.morphism_name(f) + " is not preserved");
      }
    }
  }
}

Functor identity_functor(CatPtr c) {
  Functor F{c, c, {}, {}};
  F.obj_map.resize(c->num_objects());
  std::iota(F.obj_map.begin(), F.obj_map.end(), 0);
  F.mor_map.resize(c->num_morphisms());
  std::iota(F.mor_map.begin(), F.mor_map.end(), 0);
  return F;
}

Functor compose_functors(const Functor& g, const Functor& f) {
  Functor h{f.source, g.target, {}, {}};
  h.obj_map.reserve(f.obj_map.size());
  for (ObjId y : f.obj_map) h.obj_map.push_back(g(y));
  h.mor_map.reserve(f.mor_map.size());
  for (MorId m : f.mor_map) h.mor_map.push_back(g.on_morphism(m));
  return h;
}

void validate_nat_trans(const NatTrans& t) {
  const FinCat& s = *t.source.source;
  const FinCat& c = *t.source.target;
  if (t.components.size() != s.num_objects()) {
    throw Error(ErrorKind::InvalidNatTrans, "wrong number of components");
  }
  for (ObjId x = 0; x < static_cast<ObjId>(s.num_objects()); ++x) {
    const MorId a = t.components[static_cast<std::size_t>(x)];
    if (a < 0 || static_cast<std::size_t>(a) >= c.num_morphisms() || c.src(a) != t.source(x) ||
        c.tgt(a) != t.target(x)) {
      throw Error(ErrorKind::InvalidNatTrans, "component at " + s.object_name(x) + " is mistyped");
    }
  }
  for (MorId m = 0; m < static_cast<MorId>(s.num_morphisms()); ++m) {
    const MorId a = t.components[static_cast<std::size_t>(s.src(m))];
    const MorId b = t.components[static_cast<std::size_t>(s.tgt(m))];
    if (c.compose_unchecked(t.target.on_morphism(m), a) != c.compose_unchecked(b, t.source.on_morphism(m))) {
      throw Error(ErrorKind::InvalidNatTrans, "naturality fails at " + s.morphism_name(m));
    }
  }
}

// ---------------------------------------------------------------------------

IsoData compute_isos(const FinCat& c) {
  const auto n_mor = static_cast<MorId>(c.num_morphisms());
  IsoData data;
  data.inverse.assign(c.num_morphisms(), kNone);
  for (MorId f = 0; f < n_mor; ++f) {
    if (auto inv = c.composer().fast_inverse(f)) {
      data.inverse[static_cast<std::size_t>(f)] = *inv;
      continue;
    }
    const ObjId a = c.src(f);
    const ObjId b = c.tgt(f);
    for (MorId g : c.hom(b, a)) {
      if (c.compose_unchecked(g, f) == c.id(a) && c.compose_unchecked(f, g) == c.id(b)) {
        data.inverse[static_cast<std::size_t>(f)] = g;
        break;
      }
    }
  }
  // union-find over objects
  std::vector<ObjId> parent(c.num_objects());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](ObjId x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (MorId f = 0; f < n_mor; ++f) {
    if (data.inverse[static_cast<std::size_t>(f)] == kNone) continue;
    ObjId a = find(c.src(f));
    ObjId b = find(c.tgt(f));
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
  data.class_of.assign(c.num_objects(), -1);
  std::vector<std::int32_t> root_class(c.num_objects(), -1);
  for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) {
    const ObjId r = find(x);
    auto& cls = root_class[static_cast<std::size_t>(r)];
    if (cls < 0) {
      cls = static_cast<std::int32_t>(data.representatives.size());
      data.representatives.push_back(x);
    }
    data.class_of[static_cast<std::size_t>(x)] = cls;
  }
  data.aut_generators.resize(c.num_objects());
  for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) {
    const MorRange h = c.hom(x, x);
    std::vector<char> member(h.size(), 0);
    std::vector<MorId> elements{c.id(x)};
    member[c.local_index(c.id(x))] = 1;
    auto& gens = data.aut_generators[static_cast<std::size_t>(x)];
    for (MorId e : h) {
      if (data.inverse[static_cast<std::size_t>(e)] == kNone || member[c.local_index(e)]) continue;
      gens.push_back(e);
      for (std::size_t i = 0; i < elements.size(); ++i) {
        for (MorId s : gens) {
          const MorId k = c.compose_unchecked(s, elements[i]);
          if (!member[c.local_index(k)]) {
            member[c.local_index(k)] = 1;
            elements.push_back(k);
          }
        }
      }
    }
  }
  return data;
}

std::vector<MorId> isomorphisms(const FinCat& c) {
  const IsoData data = compute_isos(c);
  std::vector<MorId> out;
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
    if (data.is_iso(m)) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class SubComposer final : public Composer {
 public:
  SubComposer(CatPtr parent, std::vector<MorId> to_parent, std::vector<MorId> from_parent)
      : parent_(std::move(parent)), to_parent_(std::move(to_parent)), from_parent_(std::move(from_parent)) {}

  MorId compose(MorId g, MorId f) const override {
    const MorId p = parent_->compose_unchecked(to_parent_[static_cast<std::size_t>(g)],
                                               to_parent_[static_cast<std::size_t>(f)]);
    const MorId s = from_parent_[static_cast<std::size_t>(p)];
    if (s == kNone) {
      throw Error(ErrorKind::NotASubcategory,
                  "composite " + parent_->morphism_name(p) + " is not in the subcategory");
    }
    return s;
  }

  std::optional<MorId> fast_inverse(MorId f) const override {
    auto inv = parent_->composer().fast_inverse(to_parent_[static_cast<std::size_t>(f)]);
    if (!inv) return std::nullopt;
    if (*inv == kNone) return kNone;
    return from_parent_[static_cast<std::size_t>(*inv)];
  }

 private:
  CatPtr parent_;
  std::vector<MorId> to_parent_;
  std::vector<MorId> from_parent_;
};

}  // namespace

Functor Subcategory::inclusion() const {
  return Functor{cat, parent, object_to_parent, morphism_to_parent};
}

Subcategory make_subcategory(CatPtr parent, std::vector<ObjId> objects,
                             const std::function<bool(MorId)>& keep, bool verify) {
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  Subcategory sub;
  sub.parent = parent;
  sub.object_to_parent = objects;
  sub.parent_to_object.assign(parent->num_objects(), kNone);
  sub.parent_to_morphism.assign(parent->num_morphisms(), kNone);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    sub.parent_to_object[static_cast<std::size_t>(objects[i])] = static_cast<ObjId>(i);
  }
  std::vector<std::string> obj_names;
  std::vector<ObjId> src, tgt;
  std::vector<std::string> mor_names;
  for (ObjId a : objects) obj_names.push_back(parent->object_name(a));
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = 0; j < objects.size(); ++j) {
      for (MorId m : parent->hom(objects[i], objects[j])) {
        if (!keep(m)) continue;
        sub.parent_to_morphism[static_cast<std::size_t>(m)] = static_cast<MorId>(sub.morphism_to_parent.size());
        sub.morphism_to_parent.push_back(m);
        src.push_back(static_cast<ObjId>(i));
        tgt.push_back(static_cast<ObjId>(j));
        if (parent->has_morphism_names()) mor_names.push_back(parent->morphism_name(m));
      }
    }
  }
  std::vector<MorId> ident;
  for (ObjId a : objects) {
    const MorId s = sub.parent_to_morphism[static_cast<std::size_t>(parent->id(a))];
    if (s == kNone) {
      throw Error(ErrorKind::NotASubcategory, "identity of " + parent->object_name(a) + " is missing");
    }
    ident.push_back(s);
  }
  auto composer = std::make_shared<SubComposer>(parent, sub.morphism_to_parent, sub.parent_to_morphism);
  sub.cat = std::make_shared<const FinCat>(std::move(obj_names), std::move(src), std::move(tgt),
                                           std::move(ident), composer, std::move(mor_names));
  if (verify) {
    const FinCat& c = *sub.cat;
    for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
      for (MorId g : c.out(c.tgt(f))) (void)c.compose_unchecked(g, f);
    }
  }
  return sub;
}

Subcategory full_subcategory(CatPtr parent, std::vector<ObjId> objects) {
  return make_subcategory(std::move(parent), std::move(objects), [](MorId) { return true; }, false);
}

Subcategory interior_groupoid(CatPtr c) {
  const IsoData data = compute_isos(*c);
  std::vector<ObjId> all(c->num_objects());
  std::iota(all.begin(), all.end(), 0);
  return make_subcategory(c, std::move(all), [&](MorId m) { return data.is_iso(m); }, false);
}

std::vector<ObjId> zero_objects(const FinCat& c) {
  std::vector<ObjId> out;
  const auto n = static_cast<ObjId>(c.num_objects());
  for (ObjId x = 0; x < n; ++x) {
    bool zero = true;
    for (ObjId y = 0; y < n && zero; ++y) zero = c.hom(x, y).size() == 1 && c.hom(y, x).size() == 1;
    if (zero) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

EquivalenceWitness equivalence_check(const Functor& F) {
  EquivalenceWitness w;
  const FinCat& s = *F.source;
  const FinCat& t = *F.target;
  const auto ns = static_cast<ObjId>(s.num_objects());
  std::vector<char> seen;
  for (ObjId a = 0; a < ns; ++a) {
    for (ObjId b = 0; b < ns; ++b) {
      const MorRange src_hom = s.hom(a, b);
      const MorRange tgt_hom = t.hom(F(a), F(b));
      ++w.hom_sets_checked;
      if (src_hom.size() != tgt_hom.size()) {
        w.reason = "Hom(" + s.object_name(a) + ", " + s.object_name(b) + ") has " +
                   std::to_string(src_hom.size()) + " elements, its image hom-set " +
                   std::to_string(tgt_hom.size());
        return w;
      }
      seen.assign(tgt_hom.size(), 0);
      for (MorId m : src_hom) {
        auto& slot = seen[static_cast<std::size_t>(F.on_morphism(m) - tgt_hom.first)];
        if (slot) {
          w.reason = "not faithful on Hom(" + s.object_name(a) + ", " + s.object_name(b) + ")";
          return w;
        }
        slot = 1;
      }
    }
  }
  const IsoData isos = compute_isos(t);
  for (ObjId y = 0; y < static_cast<ObjId>(t.num_objects()); ++y) {
    std::optional<std::pair<ObjId, MorId>> found;
    for (ObjId x = 0; x < ns && !found; ++x) {
      for (MorId m : t.hom(F(x), y)) {
        if (isos.is_iso(m)) {
          found = std::pair{x, m};
          break;
        }
      }
    }
    if (!found) {
      w.reason = "object " + t.object_name(y) + " is not in the essential image";
      w.iso_choice.clear();
      return w;
    }
    w.iso_choice.push_back(*found);
  }
  w.equivalent = true;
  return w;
}

bool is_isomorphism_of_categories(const Functor& F) {
  const FinCat& s = *F.source;
  const FinCat& t = *F.target;
  if (s.num_objects() != t.num_objects() || s.num_morphisms() != t.num_morphisms()) return false;
  std::vector<char> seen(t.num_objects(), 0);
  for (ObjId y : F.obj_map) {
    if (seen[static_cast<std::size_t>(y)]) return false;
    seen[static_cast<std::size_t>(y)] = 1;
  }
  seen.assign(t.num_morphisms(), 0);
  for (MorId m : F.mor_map) {
    if (seen[static_cast<std::size_t>(m)]) return false;
    seen[static_cast<std::size_t>(m)] = 1;
  }
  return true;
}

}  // namespace waldkit
