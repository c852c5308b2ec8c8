#include "waldkit/wald.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "waldkit/diagram.hpp"
#include "waldkit/kernels.hpp"

namespace waldkit {

namespace {

std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }

std::string describe(const FinCat& c, MorId m) {
  return c.morphism_name(m) + ": " + c.object_name(c.src(m)) + " -> " + c.object_name(c.tgt(m));
}

std::string describe_span(const FinCat& c, const Span& s) {
  return "span (" + describe(c, s.f) + ", " + describe(c, s.g) + ")";
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index becomes the root, so roots are orbit minima.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Positions of the members of Hom(a, b) selected by `keep`.
struct HomList {
  std::vector<MorId> items;
  std::vector<std::int32_t> pos;  // local index -> position or -1
};

HomList hom_list(const FinCat& c, ObjId a, ObjId b, const std::function<bool(MorId)>& keep) {
  HomList l;
  const MorRange h = c.hom(a, b);
  l.pos.assign(h.size(), -1);
  for (MorId m : h) {
    if (!keep(m)) continue;
    l.pos[idx(m - h.first)] = static_cast<std::int32_t>(l.items.size());
    l.items.push_back(m);
  }
  return l;
}

// Position of s o m (left action) or m o s (right action) for each item.
std::vector<std::int32_t> act(const FinCat& c, const HomList& l, MorId s, bool left) {
  std::vector<std::int32_t> out(l.items.size(), -1);
  for (std::size_t i = 0; i < l.items.size(); ++i) {
    const MorId m = l.items[i];
    const MorId k = left ? c.compose_unchecked(s, m) : c.compose_unchecked(m, s);
    out[i] = l.pos[c.local_index(k)];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pairs

MorSet minimal_cof(const FinCat& c, const IsoData& isos) {
  MorSet s(c.num_morphisms(), 0);
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) s[idx(m)] = isos.is_iso(m) ? 1 : 0;
  return s;
}

MorSet maximal_cof(const FinCat& c) { return MorSet(c.num_morphisms(), 1); }

PairCat validate_pair(CatPtr c, MorSet cof, std::shared_ptr<const IsoData> isos) {
  if (!isos) isos = std::make_shared<const IsoData>(compute_isos(*c));
  if (cof.size() != c->num_morphisms()) {
    throw Error(ErrorKind::MissingIso, "cof has " + std::to_string(cof.size()) + " flags for " +
                                           std::to_string(c->num_morphisms()) + " morphisms");
  }
  const auto n_mor = static_cast<MorId>(c->num_morphisms());
  for (MorId m = 0; m < n_mor; ++m) {
    if (isos->is_iso(m) && !cof[idx(m)]) {
      throw Error(ErrorKind::MissingIso, "isomorphism " + describe(*c, m) + " is not in cof");
    }
  }
  auto closure_error = [&](MorId g, MorId f) {
    return Error(ErrorKind::NotClosedUnderComposition,
                 describe(*c, g) + " o " + describe(*c, f) + " is not in cof");
  };
  // Closure under automorphisms on both sides, checked on generators.
  for (MorId f = 0; f < n_mor; ++f) {
    if (!cof[idx(f)]) continue;
    for (MorId a : isos->aut_generators[idx(c->src(f))]) {
      if (!cof[idx(c->compose_unchecked(f, a))]) throw closure_error(f, a);
    }
    for (MorId b : isos->aut_generators[idx(c->tgt(f))]) {
      if (!cof[idx(c->compose_unchecked(b, f))]) throw closure_error(b, f);
    }
  }
  // With that, g o f is in cof for all f, g once it is for one g per orbit.
  const auto n_obj = static_cast<ObjId>(c->num_objects());
  auto in_cof = [&](MorId m) { return cof[idx(m)] != 0; };
  std::vector<std::vector<MorId>> cof_into(c->num_objects());
  for (MorId f = 0; f < n_mor; ++f) {
    if (cof[idx(f)]) cof_into[idx(c->tgt(f))].push_back(f);
  }
  for (ObjId b = 0; b < n_obj; ++b) {
    for (ObjId d = 0; d < n_obj; ++d) {
      const HomList l = hom_list(*c, b, d, in_cof);
      if (l.items.empty()) continue;
      UnionFind uf(l.items.size());
      for (MorId a : isos->aut_generators[idx(b)]) {
        const auto moved = act(*c, l, a, false);
        for (std::size_t i = 0; i < moved.size(); ++i) uf.unite(i, idx(moved[i]));
      }
      for (MorId a : isos->aut_generators[idx(d)]) {
        const auto moved = act(*c, l, a, true);
        for (std::size_t i = 0; i < moved.size(); ++i) uf.unite(i, idx(moved[i]));
      }
      for (std::size_t i = 0; i < l.items.size(); ++i) {
        if (uf.find(i) != i) continue;
        const MorId g = l.items[i];
        for (MorId f : cof_into[idx(b)]) {
          if (!cof[idx(c->compose_unchecked(g, f))]) throw closure_error(g, f);
        }
      }
    }
  }
  return PairCat{std::move(c), std::move(cof), std::move(isos)};
}

// ---------------------------------------------------------------------------
// Contexts

bool is_zero_object(const FinCat& c, ObjId x) {
  for (ObjId y = 0; y < static_cast<ObjId>(c.num_objects()); ++y) {
    if (c.hom(x, y).size() != 1 || c.hom(y, x).size() != 1) return false;
  }
  return true;
}

bool SizedWaldContext::in_budget(MorId f, MorId g) const {
  if (is_iso(f) || is_iso(g)) return true;
  const FinCat& c = cat();
  if (size_of(c.tgt(f)) + size_of(c.tgt(g)) - size_of(c.src(f)) > budget) return false;
  return !span_filter || span_filter(f, g);
}

std::size_t SizedWaldContext::memo_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

void SizedWaldContext::remember(const Span& s, const Cocone& k) const {
  const auto key = static_cast<std::uint64_t>(s.f) * cat().num_morphisms() + static_cast<std::uint64_t>(s.g);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, k);
}

std::optional<Cocone> SizedWaldContext::lookup(const Span& s) const {
  const auto key = static_cast<std::uint64_t>(s.f) * cat().num_morphisms() + static_cast<std::uint64_t>(s.g);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

Cocone SizedWaldContext::compute_pushout(const Span& s, bool require_budget) const {
  const FinCat& c = cat();
  if (c.src(s.f) != c.src(s.g)) {
    throw Error(ErrorKind::NotComposable, "legs of " + describe_span(c, s) + " have different sources");
  }
  if (is_iso(s.f)) return Cocone{c.tgt(s.g), c.compose_unchecked(s.g, inverse(s.f)), c.id(c.tgt(s.g))};
  if (is_iso(s.g)) return Cocone{c.tgt(s.f), c.id(c.tgt(s.f)), c.compose_unchecked(s.f, inverse(s.g))};
  if (require_budget && !in_budget(s.f, s.g)) {
    throw Error(ErrorKind::PushoutOutOfBudget, describe_span(c, s) + " at budget " + std::to_string(budget));
  }
  std::optional<Cocone> k;
  if (search) {
    k = search(s);
  } else if (auto cert = find_pushout(c, s, order)) {
    k = cert->pushout;
  }
  if (!k) throw Error(ErrorKind::MissingPushout, describe_span(c, s));
  if (require_budget && is_cof(s.f) && !is_cof(k->v)) {
    throw Error(ErrorKind::PushoutNotIngressive,
                describe_span(c, s) + ": pushed-forward " + describe(c, k->v) + " is not in cof");
  }
  return *k;
}

Cocone SizedWaldContext::pushout(MorId f, MorId g) const {
  const Span s{f, g};
  if (auto k = lookup(s)) return *k;
  const Cocone k = compute_pushout(s, true);
  remember(s, k);
  return k;
}

std::optional<Cocone> SizedWaldContext::pushout_any(MorId f, MorId g) const {
  if (in_budget(f, g)) return pushout(f, g);
  try {
    return compute_pushout(Span{f, g}, false);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MissingPushout) return std::nullopt;
    throw;
  }
}

SpanOrbits span_orbits(const SizedWaldContext& ctx, bool include_canonical, std::size_t pair_limit) {
  const FinCat& c = ctx.cat();
  const IsoData& iso = ctx.isos();
  const auto n = static_cast<ObjId>(c.num_objects());
  SpanOrbits out;
  // Pass 1: count.
  for (ObjId x = 0; x < n && out.complete; ++x) {
    for (ObjId y = 0; y < n; ++y) {
      std::size_t nf = 0;
      for (MorId f : c.hom(x, y)) nf += ctx.is_cof(f) && (include_canonical || !ctx.is_iso(f)) ? 1 : 0;
      if (nf == 0) continue;
      for (ObjId z = 0; z < n; ++z) {
        if (!include_canonical &&
            ctx.size_of(y) + ctx.size_of(z) - ctx.size_of(x) > ctx.budget) continue;
        out.spans += nf * c.hom(x, z).size();
      }
    }
    if (out.spans > pair_limit) out.complete = false;
  }
  if (!out.complete) return out;
  out.spans = 0;
  for (ObjId x = 0; x < n; ++x) {
    for (ObjId y = 0; y < n; ++y) {
      const HomList fl = hom_list(c, x, y, [&](MorId f) {
        return ctx.is_cof(f) && (include_canonical || !ctx.is_iso(f));
      });
      if (fl.items.empty()) continue;
      std::vector<std::vector<std::int32_t>> f_right, f_left;
      for (MorId a : iso.aut_generators[idx(x)]) f_right.push_back(act(c, fl, a, false));
      for (MorId b : iso.aut_generators[idx(y)]) f_left.push_back(act(c, fl, b, true));
      for (ObjId z = 0; z < n; ++z) {
        const HomList gl = hom_list(c, x, z, [&](MorId g) { return include_canonical || !ctx.is_iso(g); });
        if (gl.items.empty()) continue;
        const std::size_t ng = gl.items.size();
        std::vector<char> keep(fl.items.size() * ng, 0);
        std::size_t kept = 0;
        for (std::size_t i = 0; i < fl.items.size(); ++i) {
          for (std::size_t j = 0; j < ng; ++j) {
            if (ctx.in_budget(fl.items[i], gl.items[j])) {
              keep[i * ng + j] = 1;
              ++kept;
            }
          }
        }
        if (kept == 0) continue;
        out.spans += kept;
        UnionFind uf(keep.size());
        std::vector<std::vector<std::int32_t>> g_right, g_left;
        for (MorId a : iso.aut_generators[idx(x)]) g_right.push_back(act(c, gl, a, false));
        for (MorId b : iso.aut_generators[idx(z)]) g_left.push_back(act(c, gl, b, true));
        for (std::size_t i = 0; i < fl.items.size(); ++i) {
          for (std::size_t j = 0; j < ng; ++j) {
            if (!keep[i * ng + j]) continue;
            for (std::size_t k = 0; k < f_right.size(); ++k) {
              uf.unite(i * ng + j, idx(f_right[k][i]) * ng + idx(g_right[k][j]));
            }
            for (const auto& l : f_left) uf.unite(i * ng + j, idx(l[i]) * ng + j);
            for (const auto& l : g_left) uf.unite(i * ng + j, i * ng + idx(l[j]));
          }
        }
        std::vector<char> seen(keep.size(), 0);
        for (std::size_t p = 0; p < keep.size(); ++p) {
          if (!keep[p] || seen[uf.find(p)]) continue;
          seen[uf.find(p)] = 1;
          out.reps.push_back(Span{fl.items[p / ng], gl.items[p % ng]});
        }
      }
    }
  }
  return out;
}

std::vector<MorId> hom_orbit_representatives(const FinCat& c, const IsoData& iso, ObjId a, ObjId b,
                                             const std::function<bool(MorId)>& member) {
  const HomList l = hom_list(c, a, b, member);
  UnionFind uf(l.items.size());
  for (MorId s : iso.aut_generators[idx(a)]) {
    const auto moved = act(c, l, s, false);
    for (std::size_t i = 0; i < moved.size(); ++i) uf.unite(i, idx(moved[i]));
  }
  for (MorId s : iso.aut_generators[idx(b)]) {
    const auto moved = act(c, l, s, true);
    for (std::size_t i = 0; i < moved.size(); ++i) uf.unite(i, idx(moved[i]));
  }
  std::vector<MorId> reps;
  for (std::size_t i = 0; i < l.items.size(); ++i) {
    if (uf.find(i) == i) reps.push_back(l.items[i]);
  }
  return reps;
}

std::vector<MorId> cofibration_representatives(const SizedWaldContext& ctx) {
  std::vector<MorId> out;
  const auto n = static_cast<ObjId>(ctx.num_objects());
  for (ObjId a = 0; a < n; ++a) {
    for (ObjId b = 0; b < n; ++b) {
      auto reps = hom_orbit_representatives(ctx.cat(), ctx.isos(), a, b,
                                            [&](MorId m) { return ctx.is_cof(m); });
      out.insert(out.end(), reps.begin(), reps.end());
    }
  }
  return out;
}

namespace {

std::shared_ptr<SizedWaldContext> make_context(const PairCat& pair, std::vector<long> size, long budget,
                                               const SearchOrder& order, std::string name,
                                               std::function<bool(MorId, MorId)> span_filter,
                                               PushoutSearch search) {
  auto ctx = std::make_shared<SizedWaldContext>();
  ctx->name = std::move(name);
  ctx->pair = pair;
  ctx->size = std::move(size);
  ctx->budget = budget;
  ctx->order = order;
  ctx->span_filter = std::move(span_filter);
  ctx->search = std::move(search);
  const FinCat& c = *pair.base;
  if (ctx->size.size() != c.num_objects()) {
    throw Error(ErrorKind::UsageError, "size table has " + std::to_string(ctx->size.size()) +
                                           " entries for " + std::to_string(c.num_objects()) + " objects");
  }
  const auto zeros = zero_objects(c);
  if (zeros.empty()) throw Error(ErrorKind::NoZeroObject, "no object is both initial and terminal");
  ctx->zero = zeros.front();
  const auto n = static_cast<ObjId>(c.num_objects());
  for (ObjId x = 0; x < n; ++x) {
    ctx->from_zero.push_back(c.hom(ctx->zero, x).first);
    ctx->to_zero.push_back(c.hom(x, ctx->zero).first);
  }
  for (ObjId x = 0; x < n; ++x) {
    const MorId z = ctx->from_zero[idx(x)];
    if (!ctx->is_cof(z)) {
      throw Error(ErrorKind::ZeroMapNotIngressive, describe(c, z) + " is not in cof");
    }
  }
  return ctx;
}

void fill_table(SizedWaldContext& ctx, const WaldOptions& options) {
  const SpanOrbits orbits = span_orbits(ctx, false, options.eager_span_limit);
  ctx.stats.eager = orbits.complete;
  if (!orbits.complete) return;
  ctx.stats.spans_in_budget = orbits.spans;
  ctx.stats.spans_searched = orbits.reps.size();
  const auto found = kernels::map_indexed<Cocone>(orbits.reps.size(), options.parallel, [&](std::size_t i) {
    return ctx.compute_pushout(orbits.reps[i], true);
  });
  for (std::size_t i = 0; i < found.size(); ++i) ctx.remember(orbits.reps[i], found[i]);
}

}  // namespace

CtxPtr validate_waldhausen(const PairCat& pair, std::vector<long> size, long budget,
                           const WaldOptions& options, std::string name,
                           std::function<bool(MorId, MorId)> span_filter, PushoutSearch search) {
  auto ctx = make_context(pair, std::move(size), budget, options.order, std::move(name),
                          std::move(span_filter), std::move(search));
  fill_table(*ctx, options);
  return ctx;
}

CtxPtr rebuild_with_order(const SizedWaldContext& ctx, const SearchOrder& order, const WaldOptions& options) {
  WaldOptions o = options;
  o.order = order;
  return validate_waldhausen(ctx.pair, ctx.size, ctx.budget, o, ctx.name, ctx.span_filter, ctx.search);
}

SubContext full_subcontext(CtxPtr parent, std::vector<ObjId> objects, std::string name,
                           const WaldOptions& options) {
  SubContext out;
  out.parent = parent;
  out.sub = full_subcategory(parent->cat_ptr(), std::move(objects));
  const Subcategory& sub = out.sub;
  MorSet cof(sub.cat->num_morphisms(), 0);
  for (MorId m = 0; m < static_cast<MorId>(sub.cat->num_morphisms()); ++m) {
    cof[idx(m)] = parent->is_cof(sub.morphism_to_parent[idx(m)]) ? 1 : 0;
  }
  std::vector<long> size;
  for (ObjId x : sub.object_to_parent) size.push_back(parent->size_of(x));
  PairCat pair = validate_pair(sub.cat, std::move(cof));
  // The search closure keeps copies, so the context does not dangle.
  auto search = [parent, to_parent = sub.morphism_to_parent, obj = sub.parent_to_object,
                 mor = sub.parent_to_morphism, cat = sub.cat](const Span& s) -> std::optional<Cocone> {
    const Cocone k = parent->pushout(to_parent[idx(s.f)], to_parent[idx(s.g)]);
    if (obj[idx(k.apex)] == kNone) return std::nullopt;
    return Cocone{obj[idx(k.apex)], mor[idx(k.u)], mor[idx(k.v)]};
  };
  std::function<bool(MorId, MorId)> filter;
  if (parent->span_filter) {
    filter = [parent, to_parent = sub.morphism_to_parent](MorId f, MorId g) {
      return parent->span_filter(to_parent[idx(f)], to_parent[idx(g)]);
    };
  }
  WaldOptions o = options;
  o.order = parent->order;
  out.ctx = validate_waldhausen(pair, std::move(size), parent->budget, o, std::move(name), std::move(filter),
                                search);
  return out;
}

// ---------------------------------------------------------------------------
// Exact functors

ExactFunctor validate_exact(const Functor& f, CtxPtr source, CtxPtr target) {
  const FinCat& a = source->cat();
  const FinCat& b = target->cat();
  ExactFunctor out{f, source, target, 0};
  const ObjId z = f(source->zero);
  if (!is_zero_object(b, z)) {
    throw Error(ErrorKind::ZeroNotPreserved, "zero object maps to " + b.object_name(z));
  }
  for (MorId m = 0; m < static_cast<MorId>(a.num_morphisms()); ++m) {
    if (source->is_cof(m) && !target->is_cof(f.on_morphism(m))) {
      throw Error(ErrorKind::CofNotPreserved,
                  describe(a, m) + " maps to " + describe(b, f.on_morphism(m)) + ", which is not in cof");
    }
  }
  // Preservation of pushouts is invariant under isomorphism of spans, so one
  // span per orbit suffices; canonical squares are preserved by any functor.
  const SpanOrbits orbits = span_orbits(*source, false, std::size_t{1} << 26);
  for (const Span& s : orbits.reps) {
    const Cocone k = source->pushout(s.f, s.g);
    const Span fs{f.on_morphism(s.f), f.on_morphism(s.g)};
    const Cocone fk{f(k.apex), f.on_morphism(k.u), f.on_morphism(k.v)};
    bool ok;
    if (target->is_iso(fs.f)) {
      ok = target->is_iso(fk.v);
    } else if (target->is_iso(fs.g)) {
      ok = target->is_iso(fk.u);
    } else if (auto chosen = target->pushout_any(fs.f, fs.g)) {
      const MorId h = find_mediator(b, *chosen, fk);
      ok = h != kNone && target->is_iso(h);
    } else {
      ok = false;
    }
    ++out.squares_checked;
    if (!ok) {
      throw Error(ErrorKind::PushoutNotPreserved,
                  "image of the pushout of " + describe_span(a, s) + " at " + a.object_name(k.apex) +
                      " is not a pushout at " + b.object_name(fk.apex));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct sums

MorId DirectSum::morphism(MorId f, MorId g) const {
  const FinCat& a = left->cat();
  const FinCat& b = right->cat();
  const auto tc = std::static_pointer_cast<const TupleComposer>(ctx->cat().composer_ptr());
  const MorId comps[2] = {f, g};
  return tc->find(object(a.src(f), b.src(g)), object(a.tgt(f), b.tgt(g)), comps);
}

std::pair<MorId, MorId> DirectSum::split(MorId m) const {
  const auto comps = std::static_pointer_cast<const TupleComposer>(ctx->cat().composer_ptr())->components(m);
  return {comps[0], comps[1]};
}

DirectSum direct_sum(CtxPtr a, CtxPtr b, const WaldOptions& options) {
  const FinCat& ca = a->cat();
  const FinCat& cb = b->cat();
  const auto na = static_cast<ObjId>(ca.num_objects());
  const auto nb = static_cast<ObjId>(cb.num_objects());
  std::vector<std::string> names;
  for (ObjId x = 0; x < na; ++x)
    for (ObjId y = 0; y < nb; ++y) names.push_back("(" + ca.object_name(x) + "," + cb.object_name(y) + ")");
  InternTable rows(4);
  std::vector<MorId> identities(names.size(), kNone);
  std::int32_t row[4];
  for (ObjId sa = 0; sa < na; ++sa)
    for (ObjId sb = 0; sb < nb; ++sb)
      for (ObjId ta = 0; ta < na; ++ta)
        for (ObjId tb = 0; tb < nb; ++tb)
          for (MorId f : ca.hom(sa, ta))
            for (MorId g : cb.hom(sb, tb)) {
              row[0] = sa * nb + sb;
              row[1] = ta * nb + tb;
              row[2] = f;
              row[3] = g;
              const MorId m = rows.insert(row);
              if (ca.is_identity(f) && cb.is_identity(g)) identities[idx(row[0])] = m;
            }
  auto tc = make_tuple_category(std::move(names), {a->cat_ptr(), b->cat_ptr()}, std::move(rows),
                                std::move(identities), {a->pair.isos, b->pair.isos});
  const FinCat& c = *tc.cat;
  MorSet cof(c.num_morphisms(), 0);
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
    const auto comps = tc.composer->components(m);
    cof[idx(m)] = a->is_cof(comps[0]) && b->is_cof(comps[1]) ? 1 : 0;
  }
  std::vector<long> size;
  for (ObjId x = 0; x < na; ++x)
    for (ObjId y = 0; y < nb; ++y) size.push_back(a->size_of(x) + b->size_of(y));
  PairCat pair = validate_pair(tc.cat, std::move(cof));
  DirectSum out;
  out.left = a;
  out.right = b;
  out.ctx = validate_waldhausen(pair, std::move(size), std::min(a->budget, b->budget), options,
                                a->name + "+" + b->name);
  return out;
}

namespace {

std::shared_ptr<const TupleComposer> tuple_of(const SizedWaldContext& ctx) {
  return std::static_pointer_cast<const TupleComposer>(ctx.cat().composer_ptr());
}

}  // namespace

Functor sum_swap(const DirectSum& ab, const DirectSum& ba) {
  const FinCat& c = ab.ctx->cat();
  const auto tc = tuple_of(*ab.ctx);
  Functor f{ab.ctx->cat_ptr(), ba.ctx->cat_ptr(), {}, {}};
  const auto nb = static_cast<ObjId>(ab.right->num_objects());
  for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) f.obj_map.push_back(ba.object(x % nb, x / nb));
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
    const auto comps = tc->components(m);
    f.mor_map.push_back(ba.morphism(comps[1], comps[0]));
  }
  return f;
}

Functor sum_projection(const DirectSum& s, int side) {
  const FinCat& c = s.ctx->cat();
  const auto tc = tuple_of(*s.ctx);
  const CtxPtr& part = side == 0 ? s.left : s.right;
  Functor f{s.ctx->cat_ptr(), part->cat_ptr(), {}, {}};
  const auto nb = static_cast<ObjId>(s.right->num_objects());
  for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) f.obj_map.push_back(side == 0 ? x / nb : x % nb);
  for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) {
    f.mor_map.push_back(tc->components(m)[static_cast<std::size_t>(side)]);
  }
  return f;
}

Functor sum_inclusion(const DirectSum& s, int side) {
  const CtxPtr& part = side == 0 ? s.left : s.right;
  const CtxPtr& other = side == 0 ? s.right : s.left;
  const FinCat& p = part->cat();
  const FinCat& o = other->cat();
  Functor f{part->cat_ptr(), s.ctx->cat_ptr(), {}, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(p.num_objects()); ++x) {
    f.obj_map.push_back(side == 0 ? s.object(x, other->zero) : s.object(other->zero, x));
  }
  const MorId z = o.id(other->zero);
  for (MorId m = 0; m < static_cast<MorId>(p.num_morphisms()); ++m) {
    f.mor_map.push_back(side == 0 ? s.morphism(m, z) : s.morphism(z, m));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Labelings

Labeling validate_labeling(CtxPtr ctx, MorSet w, std::size_t cube_limit) {
  const FinCat& c = ctx->cat();
  const auto n_mor = static_cast<MorId>(c.num_morphisms());
  for (MorId m = 0; m < n_mor; ++m) {
    if (ctx->is_iso(m) && !w[idx(m)]) {
      throw Error(ErrorKind::MissingIso, "isomorphism " + describe(c, m) + " is not labeled");
    }
  }
  for (MorId f = 0; f < n_mor; ++f) {
    if (!w[idx(f)]) continue;
    for (MorId g : c.out(c.tgt(f))) {
      if (w[idx(g)] && !w[idx(c.compose_unchecked(g, f))]) {
        throw Error(ErrorKind::NotClosedUnderComposition,
                    describe(c, g) + " o " + describe(c, f) + " is not labeled");
      }
    }
  }
  Labeling out{ctx, std::move(w), 0, true};
  const MorSet& lab = out.w;
  // Cubes are enumerated up to isomorphism of the front and back spans;
  // labeledness of the comparison maps is invariant under that.
  const SpanOrbits orbits = span_orbits(*ctx, true, std::size_t{1} << 26);
  std::vector<std::vector<Span>> reps_from(c.num_objects());
  for (const Span& s : orbits.reps) reps_from[idx(c.src(s.f))].push_back(s);
  for (const Span& s : orbits.reps) {
    const ObjId x = c.src(s.f);
    const ObjId y = c.tgt(s.f);
    const ObjId z = c.tgt(s.g);
    const Cocone k = ctx->pushout(s.f, s.g);
    for (MorId a : c.out(x)) {
      if (!lab[idx(a)]) continue;
      for (const Span& t : reps_from[idx(c.tgt(a))]) {
        const ObjId y2 = c.tgt(t.f);
        const ObjId z2 = c.tgt(t.g);
        const MorId fa = c.compose_unchecked(t.f, a);
        const MorId ga = c.compose_unchecked(t.g, a);
        std::vector<MorId> bs, cs;
        for (MorId b : c.hom(y, y2))
          if (lab[idx(b)] && c.compose_unchecked(b, s.f) == fa) bs.push_back(b);
        if (bs.empty()) continue;
        for (MorId cc : c.hom(z, z2))
          if (lab[idx(cc)] && c.compose_unchecked(cc, s.g) == ga) cs.push_back(cc);
        if (cs.empty()) continue;
        const Cocone k2 = ctx->pushout(t.f, t.g);
        bool all_labeled = true;
        for (MorId h : c.hom(k.apex, k2.apex)) all_labeled = all_labeled && lab[idx(h)];
        for (MorId b : bs) {
          for (MorId cc : cs) {
            if (out.cubes_checked >= cube_limit) {
              out.complete = false;
              return out;
            }
            ++out.cubes_checked;
            if (all_labeled) continue;
            const Cocone target{k2.apex, c.compose_unchecked(k2.u, b), c.compose_unchecked(k2.v, cc)};
            const MorId h = find_mediator(c, k, target);
            if (h == kNone || !lab[idx(h)]) {
              std::ostringstream msg;
              msg << "cube from " << describe_span(c, s) << " to " << describe_span(c, t) << " via "
                  << describe(c, a) << ", " << describe(c, b) << ", " << describe(c, cc)
                  << ": induced map " << (h == kNone ? std::string("missing") : describe(c, h))
                  << " is not labeled";
              throw Error(ErrorKind::GluingAxiomViolated, msg.str());
            }
          }
        }
      }
    }
  }
  return out;
}

SubContext labeled_objects(const Labeling& l) {
  std::vector<ObjId> objects;
  for (ObjId x = 0; x < static_cast<ObjId>(l.ctx->num_objects()); ++x) {
    if (l.labeled(l.ctx->from_zero[idx(x)])) objects.push_back(x);
  }
  return full_subcontext(l.ctx, std::move(objects), l.ctx->name + "^w");
}

// ---------------------------------------------------------------------------
// Weak cofinality

CofinalityWitness weakly_cofinal_check(const SubContext& sub) {
  const SizedWaldContext& ctx = *sub.parent;
  const FinCat& c = ctx.cat();
  const auto& in_sub = sub.sub.parent_to_object;
  auto member = [&](ObjId x) { return in_sub[idx(x)] != kNone; };
  CofinalityWitness out;
  for (MorId f : cofibration_representatives(ctx)) {
    const ObjId x1 = c.src(f);
    if (!member(x1) || !ctx.in_budget(f, ctx.to_zero[idx(x1)])) continue;
    const Cocone q = ctx.cofiber(f);
    if (member(q.apex) && !member(c.tgt(f))) {
      out.reason = "extension " + c.object_name(x1) + " >-> " + c.object_name(c.tgt(f)) + " ->> " +
                   c.object_name(q.apex) + " leaves the subcategory";
      return out;
    }
  }
  long max_sub = 0;
  for (ObjId x : sub.sub.object_to_parent) max_sub = std::max(max_sub, ctx.size_of(x));
  const auto n = static_cast<ObjId>(c.num_objects());
  for (ObjId x = 0; x < n; ++x) {
    bool found = false;
    bool beyond = false;
    for (ObjId y = 0; y < n && !found; ++y) {
      const MorId fx = ctx.from_zero[idx(x)];
      const MorId fy = ctx.from_zero[idx(y)];
      if (!ctx.in_budget(fx, fy)) {
        beyond = beyond || ctx.size_of(x) + ctx.size_of(y) <= max_sub;
        continue;
      }
      const Cocone w = ctx.pushout(fx, fy);
      if (member(w.apex)) {
        out.complements.emplace_back(y, w.apex);
        found = true;
      }
    }
    if (!found) {
      if (beyond) {
        throw Error(ErrorKind::BudgetTooSmallForWedge,
                    "no complement for " + c.object_name(x) + " within budget " + std::to_string(ctx.budget));
      }
      out.complements.clear();
      out.reason = "no complement for " + c.object_name(x);
      return out;
    }
  }
  out.cofinal = true;
  return out;
}

}  // namespace waldkit
