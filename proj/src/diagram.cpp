#include "waldkit/diagram.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace waldkit {

namespace {

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

std::uint64_t hash_row(std::span<const std::int32_t> row) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::int32_t v : row) h = mix(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e37));
  return h;
}

}  // namespace

std::size_t InternTable::slot_of(std::span<const std::int32_t> row) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t s = static_cast<std::size_t>(hash_row(row)) & mask;
  while (true) {
    const std::int32_t i = slots_[s];
    if (i == kNone) return s;
    auto existing = this->row(i);
    if (std::equal(existing.begin(), existing.end(), row.begin(), row.end())) return s;
    s = (s + 1) & mask;
  }
}

void InternTable::grow() {
  const std::size_t n = size();
  std::size_t cap = 16;
  while (cap < 2 * (n + 1)) cap *= 2;
  if (cap <= slots_.size()) return;
  slots_.assign(cap, kNone);
  for (std::size_t i = 0; i < n; ++i) slots_[slot_of(row(static_cast<std::int32_t>(i)))] = static_cast<std::int32_t>(i);
}

std::int32_t InternTable::insert(std::span<const std::int32_t> row) {
  if (width_ == 0) {
    // every empty row is the same row
    if (count_ == 0) count_ = 1;
    return 0;
  }
  if (slots_.size() < 2 * (size() + 1)) grow();
  const std::size_t s = slot_of(row);
  if (slots_[s] != kNone) return slots_[s];
  const auto idx = static_cast<std::int32_t>(size());
  rows_.insert(rows_.end(), row.begin(), row.end());
  slots_[s] = idx;
  return idx;
}

std::int32_t InternTable::find(std::span<const std::int32_t> row) const {
  if (width_ == 0) return count_ > 0 ? 0 : kNone;
  if (slots_.empty()) return kNone;
  return slots_[slot_of(row)];
}

// ---------------------------------------------------------------------------

TupleComposer::TupleComposer(std::vector<CatPtr> components, InternTable rows,
                             std::vector<std::shared_ptr<const IsoData>> component_isos)
    : components_(std::move(components)), rows_(std::move(rows)), isos_(std::move(component_isos)) {}

MorId TupleComposer::compose(MorId g, MorId f) const {
  const std::size_t k = components_.size();
  std::array<std::int32_t, 64> key{};
  if (k + 2 > key.size()) throw Error(ErrorKind::EnumerationLimitExceeded, "tuple arity above 62");
  auto rf = rows_.row(f);
  auto rg = rows_.row(g);
  key[0] = rf[0];
  key[1] = rg[1];
  for (std::size_t i = 0; i < k; ++i) key[i + 2] = components_[i]->compose_unchecked(rg[i + 2], rf[i + 2]);
  const MorId h = rows_.find({key.data(), k + 2});
  if (h == kNone) throw Error(ErrorKind::MissingComposite, "componentwise composite is not a morphism");
  return h;
}

std::optional<MorId> TupleComposer::fast_inverse(MorId f) const {
  const std::size_t k = components_.size();
  if (isos_.size() != k) return std::nullopt;
  std::array<std::int32_t, 64> key{};
  auto rf = rows_.row(f);
  key[0] = rf[1];
  key[1] = rf[0];
  for (std::size_t i = 0; i < k; ++i) {
    if (!isos_[i]) return std::nullopt;
    const MorId inv = isos_[i]->inverse[static_cast<std::size_t>(rf[i + 2])];
    if (inv == kNone) return kNone;
    key[i + 2] = inv;
  }
  return rows_.find({key.data(), k + 2});
}

MorId TupleComposer::find(ObjId a, ObjId b, std::span<const MorId> comps) const {
  std::array<std::int32_t, 64> key{};
  key[0] = a;
  key[1] = b;
  std::copy(comps.begin(), comps.end(), key.begin() + 2);
  return rows_.find({key.data(), comps.size() + 2});
}

TupleCategory make_tuple_category(std::vector<std::string> object_names,
                                  std::vector<CatPtr> components, InternTable rows,
                                  std::vector<MorId> identities,
                                  std::vector<std::shared_ptr<const IsoData>> component_isos) {
  std::vector<ObjId> src, tgt;
  src.reserve(rows.size());
  tgt.reserve(rows.size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    auto r = rows.row(static_cast<std::int32_t>(m));
    src.push_back(r[0]);
    tgt.push_back(r[1]);
  }
  auto composer = std::make_shared<const TupleComposer>(std::move(components), std::move(rows),
                                                        std::move(component_isos));
  auto cat = std::make_shared<const FinCat>(std::move(object_names), std::move(src), std::move(tgt),
                                            std::move(identities), composer);
  return {cat, composer};
}

// ---------------------------------------------------------------------------

namespace {

struct ShapePlan {
  // Processing order of non-identity shape morphisms; forced[i] holds a
  // factorization (d2, d1) of order[i] through earlier morphisms, or kNone.
  std::vector<MorId> order;
  std::vector<std::pair<MorId, MorId>> forced;
  // Composition constraints d2 o d1 = d3 among non-identity morphisms, keyed
  // by the position at which the last of the three is assigned.
  std::vector<std::vector<std::array<MorId, 3>>> checks;
};

ShapePlan plan_shape(const FinCat& shape) {
  ShapePlan plan;
  const auto n = static_cast<MorId>(shape.num_morphisms());
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (MorId d = 0; d < n; ++d) {
    if (shape.is_identity(d)) pos[static_cast<std::size_t>(d)] = -2;
  }
  auto assigned = [&](MorId d) { return pos[static_cast<std::size_t>(d)] != -1; };
  while (true) {
    MorId pick = kNone;
    std::pair<MorId, MorId> fact{kNone, kNone};
    for (MorId d = 0; d < n && pick == kNone; ++d) {
      if (assigned(d)) continue;
      for (MorId d1 : shape.out(shape.src(d))) {
        if (shape.is_identity(d1) || !assigned(d1)) continue;
        for (MorId d2 : shape.hom(shape.tgt(d1), shape.tgt(d))) {
          if (shape.is_identity(d2) || !assigned(d2)) continue;
          if (shape.compose_unchecked(d2, d1) == d) {
            pick = d;
            fact = {d2, d1};
            break;
          }
        }
        if (pick != kNone) break;
      }
    }
    if (pick == kNone) {
      for (MorId d = 0; d < n; ++d) {
        if (!assigned(d)) {
          pick = d;
          break;
        }
      }
    }
    if (pick == kNone) break;
    pos[static_cast<std::size_t>(pick)] = static_cast<int>(plan.order.size());
    plan.order.push_back(pick);
    plan.forced.push_back(fact);
  }
  plan.checks.resize(plan.order.size());
  for (MorId d1 = 0; d1 < n; ++d1) {
    if (shape.is_identity(d1)) continue;
    for (MorId d2 : shape.out(shape.tgt(d1))) {
      if (shape.is_identity(d2)) continue;
      const MorId d3 = shape.compose_unchecked(d2, d1);
      int last = std::max(pos[static_cast<std::size_t>(d1)], pos[static_cast<std::size_t>(d2)]);
      last = std::max(last, pos[static_cast<std::size_t>(d3)]);
      plan.checks[static_cast<std::size_t>(last)].push_back({d2, d1, d3});
    }
  }
  return plan;
}

}  // namespace

std::vector<FunctorData> enumerate_functors(const FinCat& shape, const FinCat& base,
                                            const DiagramOptions& options) {
  std::vector<FunctorData> out;
  const std::size_t n_obj = shape.num_objects();
  const ShapePlan plan = plan_shape(shape);
  FunctorData cur;
  cur.obj_map.assign(n_obj, 0);
  cur.mor_map.assign(shape.num_morphisms(), kNone);

  auto image = [&](MorId d) {
    if (shape.is_identity(d)) return base.id(cur.obj_map[static_cast<std::size_t>(shape.src(d))]);
    return cur.mor_map[static_cast<std::size_t>(d)];
  };
  auto checks_pass = [&](std::size_t i) {
    for (const auto& [d2, d1, d3] : plan.checks[i]) {
      if (base.compose_unchecked(image(d2), image(d1)) != image(d3)) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> assign_mor = [&](std::size_t i) {
    if (i == plan.order.size()) {
      for (ObjId x = 0; x < static_cast<ObjId>(n_obj); ++x) {
        cur.mor_map[static_cast<std::size_t>(shape.id(x))] = base.id(cur.obj_map[static_cast<std::size_t>(x)]);
      }
      if (options.functor_filter && !options.functor_filter(cur.obj_map, cur.mor_map)) return;
      if (out.size() >= options.functor_limit) {
        throw Error(ErrorKind::EnumerationLimitExceeded,
                    "more than " + std::to_string(options.functor_limit) + " functors");
      }
      out.push_back(cur);
      return;
    }
    const MorId d = plan.order[i];
    auto try_candidate = [&](MorId c) {
      if (options.morphism_filter && !options.morphism_filter(d, c)) return;
      cur.mor_map[static_cast<std::size_t>(d)] = c;
      if (checks_pass(i)) assign_mor(i + 1);
    };
    const auto [d2, d1] = plan.forced[i];
    if (d2 != kNone) {
      try_candidate(base.compose_unchecked(image(d2), image(d1)));
    } else {
      const ObjId a = cur.obj_map[static_cast<std::size_t>(shape.src(d))];
      const ObjId b = cur.obj_map[static_cast<std::size_t>(shape.tgt(d))];
      for (MorId c : base.hom(a, b)) try_candidate(c);
    }
    cur.mor_map[static_cast<std::size_t>(d)] = kNone;
  };

  std::function<void(std::size_t)> assign_obj = [&](std::size_t x) {
    if (x == n_obj) {
      if (options.object_filter && !options.object_filter(cur.obj_map)) return;
      assign_mor(0);
      return;
    }
    for (ObjId y = 0; y < static_cast<ObjId>(base.num_objects()); ++y) {
      cur.obj_map[x] = y;
      assign_obj(x + 1);
    }
  };
  assign_obj(0);
  return out;
}

std::vector<std::vector<MorId>> enumerate_nat_trans(const FinCat& shape, const FinCat& base,
                                                    const FunctorData& F, const FunctorData& G,
                                                    MorphismScope scope, const IsoData* base_isos) {
  const std::size_t n = shape.num_objects();
  // naturality constraints keyed by the later of the two endpoints
  std::vector<std::vector<MorId>> checks(n);
  for (MorId d = 0; d < static_cast<MorId>(shape.num_morphisms()); ++d) {
    if (shape.is_identity(d)) continue;
    const auto last = static_cast<std::size_t>(std::max(shape.src(d), shape.tgt(d)));
    checks[last].push_back(d);
  }
  std::vector<std::vector<MorId>> out;
  std::vector<MorId> comp(n, kNone);
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (x == n) {
      out.push_back(comp);
      return;
    }
    const ObjId fx = F.obj_map[x];
    const ObjId gx = G.obj_map[x];
    for (MorId c : base.hom(fx, gx)) {
      if (scope == MorphismScope::IsosOnly && !base_isos->is_iso(c)) continue;
      comp[x] = c;
      bool ok = true;
      for (MorId d : checks[x]) {
        const auto a = static_cast<std::size_t>(shape.src(d));
        const auto b = static_cast<std::size_t>(shape.tgt(d));
        if (base.compose_unchecked(G.mor_map[static_cast<std::size_t>(d)], comp[a]) !=
            base.compose_unchecked(comp[b], F.mor_map[static_cast<std::size_t>(d)])) {
          ok = false;
          break;
        }
      }
      if (ok) rec(x + 1);
    }
    comp[x] = kNone;
  };
  rec(0);
  return out;
}

ObjId DiagramCategory::find_object(const FunctorData& f) const {
  std::vector<std::int32_t> key(f.obj_map.begin(), f.obj_map.end());
  key.insert(key.end(), f.mor_map.begin(), f.mor_map.end());
  return object_index.find(key);
}

Functor DiagramCategory::as_functor(ObjId x) const {
  const auto& o = objects[static_cast<std::size_t>(x)];
  return Functor{shape, base, o.obj_map, o.mor_map};
}

Functor DiagramCategory::evaluation(ObjId shape_obj) const {
  Functor e{cat, base, {}, {}};
  e.obj_map.reserve(objects.size());
  for (const auto& o : objects) e.obj_map.push_back(o.obj_map[static_cast<std::size_t>(shape_obj)]);
  e.mor_map.reserve(cat->num_morphisms());
  for (MorId m = 0; m < static_cast<MorId>(cat->num_morphisms()); ++m) {
    e.mor_map.push_back(components(m)[static_cast<std::size_t>(shape_obj)]);
  }
  return e;
}

DiagramCategory diagram_category(CatPtr shape, CatPtr base, std::vector<FunctorData> objects,
                                 const DiagramOptions& options,
                                 const std::function<std::string(const FunctorData&)>& namer) {
  DiagramCategory dc;
  dc.shape = shape;
  dc.base = base;
  const std::size_t k = shape->num_objects();
  dc.object_index = InternTable(k + shape->num_morphisms());
  std::vector<std::string> names;
  for (const auto& o : objects) {
    std::vector<std::int32_t> key(o.obj_map.begin(), o.obj_map.end());
    key.insert(key.end(), o.mor_map.begin(), o.mor_map.end());
    dc.object_index.insert(key);
    if (namer) {
      names.push_back(namer(o));
    } else {
      std::ostringstream s;
      s << '(';
      for (std::size_t i = 0; i < o.obj_map.size(); ++i) {
        if (i) s << ',';
        s << base->object_name(o.obj_map[i]);
      }
      s << ")#" << names.size();
      names.push_back(s.str());
    }
  }
  InternTable rows(k + 2);
  std::vector<MorId> identities(objects.size(), kNone);
  std::vector<std::int32_t> row(k + 2);
  for (std::size_t a = 0; a < objects.size(); ++a) {
    for (std::size_t b = 0; b < objects.size(); ++b) {
      auto trans = enumerate_nat_trans(*shape, *base, objects[a], objects[b], options.scope,
                                       options.base_isos.get());
      for (const auto& t : trans) {
        row[0] = static_cast<std::int32_t>(a);
        row[1] = static_cast<std::int32_t>(b);
        std::copy(t.begin(), t.end(), row.begin() + 2);
        const MorId m = rows.insert(row);
        if (a == b) {
          bool ident = true;
          for (std::size_t x = 0; x < k; ++x) ident = ident && base->is_identity(t[x]);
          if (ident) identities[a] = m;
        }
      }
      if (rows.size() > options.morphism_limit) {
        throw Error(ErrorKind::EnumerationLimitExceeded,
                    "more than " + std::to_string(options.morphism_limit) + " natural transformations");
      }
    }
  }
  std::vector<std::shared_ptr<const IsoData>> isos;
  if (options.base_isos) isos.assign(k, options.base_isos);
  std::vector<CatPtr> comps(k, base);
  auto tc = make_tuple_category(std::move(names), std::move(comps), std::move(rows), std::move(identities),
                                std::move(isos));
  dc.cat = tc.cat;
  dc.composer = tc.composer;
  dc.objects = std::move(objects);
  return dc;
}

DiagramCategory functor_category(CatPtr shape, CatPtr base, const DiagramOptions& options) {
  auto objects = enumerate_functors(*shape, *base, options);
  return diagram_category(shape, base, std::move(objects), options);
}

}  // namespace waldkit
