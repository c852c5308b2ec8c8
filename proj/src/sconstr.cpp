#include "waldkit/sconstr.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "waldkit/errors.hpp"
#include "waldkit/kernels.hpp"

namespace waldkit {

namespace {

std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }

int length(const FunctorData& x) { return static_cast<int>(x.obj_map.size()) - 1; }

// The mediator k -> w of a chosen pushout k; an invertible leg of k gives it
// directly.
MorId mediate(const SizedWaldContext& base, const Cocone& k, const Cocone& w) {
  const FinCat& c = base.cat();
  if (base.is_iso(k.u)) return c.compose_unchecked(w.u, base.inverse(k.u));
  if (base.is_iso(k.v)) return c.compose_unchecked(w.v, base.inverse(k.v));
  const MorId h = find_mediator(c, k, w);
  if (h == kNone) {
    throw Error(ErrorKind::MissingPushout, "no mediator into " + c.object_name(w.apex));
  }
  return h;
}

std::string chain_name(const FinCat& c, const FunctorData& x) {
  std::string s;
  for (std::size_t i = 0; i < x.obj_map.size(); ++i) {
    if (i) s += " >-> ";
    s += c.object_name(x.obj_map[i]);
  }
  return s;
}

bool quotients_in_budget(const SizedWaldContext& base, std::span<const MorId> mor_map, int m) {
  const FinCat& c = base.cat();
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const MorId s = mor_map[idx(chain_morphism(m, i, j))];
      if (!base.in_budget(s, base.to_zero[idx(c.src(s))])) return false;
    }
  }
  return true;
}

bool is_totally_filtered(const SizedWaldContext& base, const FunctorData& x) {
  return x.obj_map[0] == base.zero && quotients_in_budget(base, x.mor_map, length(x));
}

}  // namespace

// ---------------------------------------------------------------------------
// Simplicial operators

SimplicialOperator SimplicialOperator::identity(int n) {
  SimplicialOperator e{n, n, std::vector<int>(static_cast<std::size_t>(n) + 1)};
  std::iota(e.map.begin(), e.map.end(), 0);
  return e;
}

SimplicialOperator SimplicialOperator::face(int n, int i) {
  SimplicialOperator e{n - 1, n, {}};
  for (int k = 0; k < n; ++k) e.map.push_back(k < i ? k : k + 1);
  return e;
}

SimplicialOperator SimplicialOperator::degeneracy(int n, int j) {
  SimplicialOperator e{n + 1, n, {}};
  for (int k = 0; k <= n + 1; ++k) e.map.push_back(k <= j ? k : k - 1);
  return e;
}

SimplicialOperator SimplicialOperator::after(const SimplicialOperator& theta) const {
  if (theta.target != source) {
    throw Error(ErrorKind::NotComposable, to_string() + " after " + theta.to_string());
  }
  SimplicialOperator e{theta.source, target, {}};
  for (int k : theta.map) e.map.push_back(map[idx(k)]);
  return e;
}

std::string SimplicialOperator::to_string() const {
  std::ostringstream s;
  s << '[' << source << "]->[" << target << "](";
  for (std::size_t k = 0; k < map.size(); ++k) s << (k ? "," : "") << map[k];
  s << ')';
  return s.str();
}

void validate_operator(const SimplicialOperator& eta) {
  bool ok = eta.source >= 0 && eta.target >= 0 && eta.map.size() == idx(eta.source) + 1;
  for (std::size_t k = 0; ok && k < eta.map.size(); ++k) {
    ok = eta.map[k] >= 0 && eta.map[k] <= eta.target && (k == 0 || eta.map[k - 1] <= eta.map[k]);
  }
  if (!ok) throw Error(ErrorKind::UsageError, "not a monotone map: " + eta.to_string());
}

std::vector<SimplicialOperator> monotone_maps(int source, int target) {
  std::vector<SimplicialOperator> out;
  SimplicialOperator cur{source, target, std::vector<int>(idx(source) + 1)};
  std::function<void(int, int)> rec = [&](int k, int low) {
    if (k > source) {
      out.push_back(cur);
      return;
    }
    for (int v = low; v <= target; ++v) {
      cur.map[idx(k)] = v;
      rec(k + 1, v);
    }
  };
  rec(0, 0);
  return out;
}

MorId chain_morphism(int m, int i, int j) {
  MorId before = 0;
  for (int s = 0; s < i; ++s) before += m + 1 - s;
  return before + (j - i);
}

MorId filtration_step(const FunctorData& x, int i, int j) {
  return x.mor_map[idx(chain_morphism(length(x), i, j))];
}

FunctorData filtration_from_steps(const FinCat& base, const std::vector<MorId>& steps, ObjId first) {
  const int m = static_cast<int>(steps.size());
  FunctorData x;
  x.obj_map.push_back(first);
  for (MorId s : steps) x.obj_map.push_back(base.tgt(s));
  for (int i = 0; i <= m; ++i) {
    MorId cur = base.id(x.obj_map[idx(i)]);
    x.mor_map.push_back(cur);
    for (int j = i + 1; j <= m; ++j) {
      cur = base.compose_unchecked(steps[idx(j - 1)], cur);
      x.mor_map.push_back(cur);
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// F_m and S_m

namespace {

DiagramOptions enumeration_options(const SizedWaldContext& base, long size_cap, std::size_t limit) {
  DiagramOptions o;
  o.functor_limit = limit;
  o.morphism_filter = [&base](MorId, MorId c) { return base.is_cof(c); };
  o.object_filter = [&base, size_cap](std::span<const ObjId> objs) {
    long total = 0;
    for (ObjId x : objs) total += base.size_of(x);
    return total <= size_cap;
  };
  return o;
}

}  // namespace

std::vector<FunctorData> filtered_objects(const SizedWaldContext& base, int m, long size_cap,
                                          std::size_t limit) {
  const DiagramOptions o = enumeration_options(base, size_cap, limit);
  return enumerate_functors(*poset_chain(m), base.cat(), o);
}

std::vector<FunctorData> totally_filtered_objects(const SizedWaldContext& base, int m, long size_cap,
                                                  std::size_t limit) {
  DiagramOptions o = enumeration_options(base, size_cap, limit);
  auto fits = o.object_filter;
  o.object_filter = [&base, fits](std::span<const ObjId> objs) { return objs[0] == base.zero && fits(objs); };
  o.functor_filter = [&base, m](std::span<const ObjId>, std::span<const MorId> mors) {
    return quotients_in_budget(base, mors, m);
  };
  return enumerate_functors(*poset_chain(m), base.cat(), o);
}

bool filtered_ingressive(const SizedWaldContext& base, const FunctorData& x, const FunctorData& y,
                         std::span<const MorId> comps, bool monotone_sizes) {
  const FinCat& c = base.cat();
  const int m = length(x);
  if (m == 0) return base.is_cof(comps[0]);
  for (int i = 1; i <= m; ++i) {
    const MorId prev = comps[idx(i - 1)];
    if (!base.is_cof(prev)) return false;
    const MorId sx = filtration_step(x, i - 1, i);
    const MorId sy = filtration_step(y, i - 1, i);
    if (!base.in_budget(sx, prev)) {
      if (monotone_sizes) return false;
      throw Error(ErrorKind::PushoutOutOfBudget,
                  "comparison pushout of " + c.morphism_name(sx) + " and " + c.morphism_name(prev) +
                      " at budget " + std::to_string(base.budget));
    }
    const Cocone k = base.pushout(sx, prev);
    const MorId h = mediate(base, k, Cocone{y.obj_map[idx(i)], comps[idx(i)], sy});
    if (!base.is_cof(h)) return false;
  }
  return true;
}

namespace {

FilteredPtr build_filtered(CtxPtr base, int m, long size_cap, std::vector<FunctorData> objects,
                           const FilteredOptions& options, std::string name) {
  auto F = std::make_shared<FilteredContext>();
  F->m = m;
  F->base = base;
  F->size_cap = size_cap;
  const FinCat& c = base->cat();
  for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
    if (base->is_cof(f) && base->size_of(c.src(f)) > base->size_of(c.tgt(f))) F->monotone_sizes = false;
  }
  DiagramOptions d;
  d.morphism_limit = options.morphism_limit;
  d.base_isos = base->pair.isos;
  auto diagram = std::make_shared<const DiagramCategory>(
      diagram_category(poset_chain(m), base->cat_ptr(), std::move(objects), d,
                       [&c](const FunctorData& x) { return chain_name(c, x); }));
  F->diagram = diagram;
  const FinCat& fc = *diagram->cat;
  const bool monotone = F->monotone_sizes;
  const auto flags = kernels::map_indexed<char>(fc.num_morphisms(), options.wald.parallel, [&](std::size_t i) {
    const auto f = static_cast<MorId>(i);
    return static_cast<char>(filtered_ingressive(*base, diagram->objects[idx(fc.src(f))],
                                                 diagram->objects[idx(fc.tgt(f))], diagram->components(f),
                                                 monotone));
  });
  MorSet cof(flags.begin(), flags.end());
  auto isos = std::make_shared<const IsoData>(compute_isos(fc));
  PairCat pair = validate_pair(diagram->cat, std::move(cof), isos);
  std::vector<long> size;
  for (const auto& x : diagram->objects) {
    long s = 0;
    for (ObjId o : x.obj_map) s += base->size_of(o);
    size.push_back(s);
  }
  auto filter = [base, diagram](MorId f, MorId g) {
    const auto cf = diagram->components(f);
    const auto cg = diagram->components(g);
    for (std::size_t i = 0; i < cf.size(); ++i) {
      if (!base->in_budget(cf[i], cg[i])) return false;
    }
    return true;
  };
  // Pushouts are computed levelwise; the levelwise pushout is a pushout in
  // F_m whenever it is an object of F_m.
  auto search = [base, diagram, m](const Span& s) -> std::optional<Cocone> {
    const FinCat& bc = base->cat();
    const FinCat& fc = *diagram->cat;
    const auto cf = diagram->components(s.f);
    const auto cg = diagram->components(s.g);
    const FunctorData& y = diagram->objects[idx(fc.tgt(s.f))];
    const FunctorData& z = diagram->objects[idx(fc.tgt(s.g))];
    std::vector<Cocone> k;
    for (int i = 0; i <= m; ++i) {
      auto ki = base->pushout_any(cf[idx(i)], cg[idx(i)]);
      if (!ki) return std::nullopt;
      k.push_back(*ki);
    }
    std::vector<MorId> steps;
    for (int i = 1; i <= m; ++i) {
      const Cocone& ki = k[idx(i)];
      steps.push_back(mediate(*base, k[idx(i - 1)],
                              Cocone{ki.apex, bc.compose_unchecked(ki.u, filtration_step(y, i - 1, i)),
                                     bc.compose_unchecked(ki.v, filtration_step(z, i - 1, i))}));
    }
    const ObjId p = diagram->find_object(filtration_from_steps(bc, steps, k[0].apex));
    if (p == kNone) return std::nullopt;
    std::vector<MorId> u, v;
    for (const Cocone& ki : k) {
      u.push_back(ki.u);
      v.push_back(ki.v);
    }
    return Cocone{p, diagram->find_morphism(fc.tgt(s.f), p, u), diagram->find_morphism(fc.tgt(s.g), p, v)};
  };
  F->ctx = validate_waldhausen(pair, std::move(size), F->size_cap, options.wald, std::move(name), filter, search);
  return F;
}

long default_cap(const SizedWaldContext& base, int m, const FilteredOptions& options) {
  long largest = base.budget;
  for (long s : base.size) largest = std::max(largest, s);
  return options.size_cap.value_or(static_cast<long>(m + 1) * largest);
}

}  // namespace

FilteredPtr build_Fm(CtxPtr base, int m, const FilteredOptions& options) {
  const long cap = default_cap(*base, m, options);
  auto objects = filtered_objects(*base, m, cap, options.functor_limit);
  std::string name = "F_" + std::to_string(m) + "(" + base->name + ")";
  return build_filtered(std::move(base), m, cap, std::move(objects), options, std::move(name));
}

MorSet f1_generated_cof(const FilteredContext& f1) {
  const SizedWaldContext& base = *f1.base;
  const FinCat& bc = base.cat();
  const FinCat& c = f1.cat();
  const auto n = static_cast<MorId>(c.num_morphisms());
  MorSet in(idx(n), 0);
  std::vector<MorId> members;
  for (MorId f = 0; f < n; ++f) {
    const auto comps = f1.components(f);
    const FunctorData& x = f1.object(c.src(f));
    const FunctorData& y = f1.object(c.tgt(f));
    const bool iso_then_cof = base.is_iso(comps[0]) && base.is_cof(comps[1]);
    const bool pushout_square =
        base.is_cof(comps[0]) &&
        certify_pushout(bc, Span{filtration_step(x, 0, 1), comps[0]},
                        Cocone{y.obj_map[1], comps[1], filtration_step(y, 0, 1)})
            .has_value();
    if (iso_then_cof || pushout_square) {
      in[idx(f)] = 1;
      members.push_back(f);
    }
  }
  std::vector<std::vector<MorId>> by_src(c.num_objects()), by_tgt(c.num_objects());
  for (MorId f : members) {
    by_src[idx(c.src(f))].push_back(f);
    by_tgt[idx(c.tgt(f))].push_back(f);
  }
  for (std::size_t next = 0; next < members.size(); ++next) {
    const MorId e = members[next];
    std::vector<MorId> fresh;
    for (MorId g : by_src[idx(c.tgt(e))]) fresh.push_back(c.compose_unchecked(g, e));
    for (MorId f : by_tgt[idx(c.src(e))]) fresh.push_back(c.compose_unchecked(e, f));
    for (MorId h : fresh) {
      if (in[idx(h)]) continue;
      in[idx(h)] = 1;
      members.push_back(h);
      by_src[idx(c.src(h))].push_back(h);
      by_tgt[idx(c.tgt(h))].push_back(h);
    }
  }
  return in;
}

SmContext build_Sm(CtxPtr base, int m, const FilteredOptions& options) {
  const long cap = default_cap(*base, m, options);
  auto objects = totally_filtered_objects(*base, m, cap, options.functor_limit);
  std::string name = "S_" + std::to_string(m) + "(" + base->name + ")";
  return SmContext{build_filtered(std::move(base), m, cap, std::move(objects), options, std::move(name))};
}

Functor sm_inclusion(const SmContext& S, const FilteredContext& F) {
  const FinCat& a = S.cat();
  Functor j{S.ctx()->cat_ptr(), F.ctx->cat_ptr(), {}, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(a.num_objects()); ++x) {
    const ObjId y = F.dc().find_object(S.object(x));
    if (y == kNone) throw Error(ErrorKind::InvalidFunctor, a.object_name(x) + " is not an object of F_m");
    j.obj_map.push_back(y);
  }
  for (MorId f = 0; f < static_cast<MorId>(a.num_morphisms()); ++f) {
    j.mor_map.push_back(F.dc().find_morphism(j(a.src(f)), j(a.tgt(f)), S.components(f)));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Quotients and the simplicial action

Quotient quotient_object(const SizedWaldContext& base, const FunctorData& x) {
  const FinCat& c = base.cat();
  const int m = length(x);
  std::vector<Cocone> k;
  for (int i = 0; i <= m; ++i) k.push_back(base.cofiber(filtration_step(x, 0, i)));
  std::vector<MorId> steps;
  for (int i = 1; i <= m; ++i) {
    const Cocone& ki = k[idx(i)];
    steps.push_back(mediate(base, k[idx(i - 1)],
                            Cocone{ki.apex, c.compose_unchecked(ki.u, filtration_step(x, i - 1, i)), ki.v}));
  }
  Quotient q;
  q.object = filtration_from_steps(c, steps, k[0].apex);
  for (const Cocone& ki : k) q.unit.push_back(ki.u);
  return q;
}

std::vector<MorId> quotient_components(const SizedWaldContext& base, const FunctorData& x,
                                       const FunctorData& y, std::span<const MorId> comps) {
  const FinCat& c = base.cat();
  std::vector<MorId> out;
  for (int i = 0; i <= length(x); ++i) {
    const Cocone kx = base.cofiber(filtration_step(x, 0, i));
    const Cocone ky = base.cofiber(filtration_step(y, 0, i));
    out.push_back(mediate(base, kx, Cocone{ky.apex, c.compose_unchecked(ky.u, comps[idx(i)]), ky.v}));
  }
  return out;
}

FunctorData restrict_along(const FunctorData& x, const SimplicialOperator& eta) {
  if (eta.target != length(x)) {
    throw Error(ErrorKind::NotComposable,
                eta.to_string() + " applied to a filtration of length " + std::to_string(length(x)));
  }
  FunctorData r;
  for (int k : eta.map) r.obj_map.push_back(x.obj_map[idx(k)]);
  for (int a = 0; a <= eta.source; ++a) {
    for (int b = a; b <= eta.source; ++b) r.mor_map.push_back(filtration_step(x, eta.map[idx(a)], eta.map[idx(b)]));
  }
  return r;
}

FunctorData act_S(const SizedWaldContext& base, const SimplicialOperator& eta, const FunctorData& x) {
  return quotient_object(base, restrict_along(x, eta)).object;
}

std::vector<MorId> act_S_components(const SizedWaldContext& base, const SimplicialOperator& eta,
                                    const FunctorData& x, const FunctorData& y,
                                    std::span<const MorId> comps) {
  std::vector<MorId> rc;
  for (int k : eta.map) rc.push_back(comps[idx(k)]);
  return quotient_components(base, restrict_along(x, eta), restrict_along(y, eta), rc);
}

std::vector<MorId> act_comparison(const SizedWaldContext& base, const SimplicialOperator& eta,
                                  const SimplicialOperator& theta, const FunctorData& x) {
  const FinCat& c = base.cat();
  const FunctorData direct = restrict_along(x, eta.after(theta));
  const Quotient first = quotient_object(base, restrict_along(x, eta));
  const FunctorData again = restrict_along(first.object, theta);
  const Quotient second = quotient_object(base, again);
  std::vector<MorId> out;
  for (int k = 0; k <= theta.source; ++k) {
    const Cocone kd = base.cofiber(filtration_step(direct, 0, k));
    const Cocone ks = base.cofiber(filtration_step(again, 0, k));
    const MorId to_second =
        c.compose_unchecked(second.unit[idx(k)], first.unit[idx(theta.map[idx(k)])]);
    out.push_back(mediate(base, kd, Cocone{ks.apex, to_second, ks.v}));
  }
  return out;
}

Functor act_S_functor(const SmContext& from, const SmContext& to, const SimplicialOperator& eta) {
  validate_operator(eta);
  if (eta.target != from.m() || eta.source != to.m()) {
    throw Error(ErrorKind::NotComposable, eta.to_string() + " does not act S_" + std::to_string(from.m()) +
                                              " -> S_" + std::to_string(to.m()));
  }
  const SizedWaldContext& base = *from.S->base;
  const FinCat& a = from.cat();
  Functor f{from.ctx()->cat_ptr(), to.ctx()->cat_ptr(), {}, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(a.num_objects()); ++x) {
    const ObjId y = to.find_object(act_S(base, eta, from.object(x)));
    if (y == kNone) {
      throw Error(ErrorKind::InvalidFunctor, eta.to_string() + " sends " + a.object_name(x) + " outside S_" +
                                                 std::to_string(to.m()));
    }
    f.obj_map.push_back(y);
  }
  f.mor_map = kernels::map_indexed<MorId>(a.num_morphisms(), true, [&](std::size_t i) {
    const auto m = static_cast<MorId>(i);
    const auto comps = act_S_components(base, eta, from.object(a.src(m)), from.object(a.tgt(m)),
                                        from.components(m));
    const MorId r = to.find_morphism(f(a.src(m)), f(a.tgt(m)), comps);
    if (r == kNone) {
      throw Error(ErrorKind::InvalidFunctor, eta.to_string() + " sends a morphism outside S_" +
                                                 std::to_string(to.m()));
    }
    return r;
  });
  return f;
}

Functor quotient_functor(const FilteredContext& F, const SmContext& S) {
  const SizedWaldContext& base = *F.base;
  const FinCat& a = F.cat();
  Functor q{F.ctx->cat_ptr(), S.ctx()->cat_ptr(), {}, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(a.num_objects()); ++x) {
    const ObjId y = S.find_object(quotient_object(base, F.object(x)).object);
    if (y == kNone) {
      throw Error(ErrorKind::InvalidFunctor, "quotient of " + a.object_name(x) + " is outside S_" +
                                                 std::to_string(F.m));
    }
    q.obj_map.push_back(y);
  }
  q.mor_map = kernels::map_indexed<MorId>(a.num_morphisms(), true, [&](std::size_t i) {
    const auto m = static_cast<MorId>(i);
    const auto comps = quotient_components(base, F.object(a.src(m)), F.object(a.tgt(m)), F.components(m));
    const MorId r = S.find_morphism(q(a.src(m)), q(a.tgt(m)), comps);
    if (r == kNone) throw Error(ErrorKind::InvalidFunctor, "quotient of a morphism is outside S_m");
    return r;
  });
  return q;
}

QuotientAdjunction quotient_adjunction(const FilteredContext& F, const SmContext& S) {
  const FinCat& fc = F.cat();
  const FinCat& sc = S.cat();
  QuotientAdjunction out;
  out.quotient = quotient_functor(F, S);
  out.inclusion = sm_inclusion(S, F);
  const Functor jf = compose_functors(out.inclusion, out.quotient);
  const Functor fj = compose_functors(out.quotient, out.inclusion);
  out.unit = NatTrans{identity_functor(F.ctx->cat_ptr()), jf, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(fc.num_objects()); ++x) {
    const Quotient q = quotient_object(*F.base, F.object(x));
    out.unit.components.push_back(F.dc().find_morphism(x, jf(x), q.unit));
  }
  validate_nat_trans(out.unit);
  out.counit = NatTrans{fj, identity_functor(S.ctx()->cat_ptr()), {}};
  out.counit_is_identity = true;
  for (ObjId y = 0; y < static_cast<ObjId>(sc.num_objects()); ++y) {
    // the inverse of the unit at J y, read in S_m
    const MorId eta = out.unit.components[idx(out.inclusion(y))];
    const MorId inv = F.ctx->inverse(eta);
    const MorId e = inv == kNone ? kNone : S.find_morphism(fj(y), y, F.components(inv));
    if (e == kNone) throw Error(ErrorKind::InvalidNatTrans, "unit at " + sc.object_name(y) + " is not invertible");
    out.counit.components.push_back(e);
    out.counit_is_identity = out.counit_is_identity && fj(y) == y && sc.is_identity(e);
  }
  validate_nat_trans(out.counit);
  out.triangles_hold = true;
  for (ObjId x = 0; x < static_cast<ObjId>(fc.num_objects()) && out.triangles_hold; ++x) {
    const ObjId qx = out.quotient(x);
    const MorId t = sc.compose(out.counit.components[idx(qx)],
                               out.quotient.on_morphism(out.unit.components[idx(x)]));
    if (t != sc.id(qx)) {
      out.triangles_hold = false;
      out.failure = "eps F . F eta is not the identity at " + fc.object_name(x);
    }
  }
  for (ObjId y = 0; y < static_cast<ObjId>(sc.num_objects()) && out.triangles_hold; ++y) {
    const ObjId jy = out.inclusion(y);
    const MorId t = fc.compose(out.inclusion.on_morphism(out.counit.components[idx(y)]),
                               out.unit.components[idx(jy)]);
    if (t != fc.id(jy)) {
      out.triangles_hold = false;
      out.failure = "J eps . eta J is not the identity at " + sc.object_name(y);
    }
  }
  return out;
}

Functor face_zero_functor(const SmContext& s1m, const FilteredContext& fm) {
  if (s1m.m() != fm.m + 1) throw Error(ErrorKind::NotComposable, "d_0 needs S_{1+m} and F_m");
  const SimplicialOperator d0 = SimplicialOperator::face(s1m.m(), 0);
  const FinCat& a = s1m.cat();
  Functor f{s1m.ctx()->cat_ptr(), fm.ctx->cat_ptr(), {}, {}};
  for (ObjId x = 0; x < static_cast<ObjId>(a.num_objects()); ++x) {
    const ObjId y = fm.dc().find_object(restrict_along(s1m.object(x), d0));
    if (y == kNone) throw Error(ErrorKind::InvalidFunctor, "d_0 of " + a.object_name(x) + " is not in F_m");
    f.obj_map.push_back(y);
  }
  for (MorId m = 0; m < static_cast<MorId>(a.num_morphisms()); ++m) {
    const auto comps = s1m.components(m);
    const MorId r = fm.dc().find_morphism(f(a.src(m)), f(a.tgt(m)), comps.subspan(1));
    if (r == kNone) throw Error(ErrorKind::InvalidFunctor, "d_0 of a morphism is not in F_m");
    f.mor_map.push_back(r);
  }
  return f;
}

Functor evaluation_zero(const FilteredContext& F) { return F.dc().evaluation(0); }

// ---------------------------------------------------------------------------
// Segal maps

SegalReport segal_check(const FilteredContext& fm, const FilteredContext& f1) {
  SegalReport r;
  const int m = fm.m;
  if (f1.m != 1) throw Error(ErrorKind::UsageError, "segal_check needs F_1");
  if (m == 0) {
    r.holds = true;
    r.objects = fm.cat().num_objects();
    r.morphisms = fm.cat().num_morphisms();
    return r;
  }
  const FinCat& c1 = f1.cat();
  const auto n1 = static_cast<ObjId>(c1.num_objects());
  std::vector<std::vector<ObjId>> by_start(fm.base->num_objects());
  for (ObjId y = 0; y < n1; ++y) by_start[idx(f1.level(y, 0))].push_back(y);

  // objects of F_1 x_{F_0} ... x_{F_0} F_1
  InternTable objects(idx(m));
  std::vector<std::int32_t> row(idx(m));
  std::function<void(int)> chains = [&](int k) {
    if (k == m) {
      objects.insert(row);
      return;
    }
    if (k == 0) {
      for (ObjId y = 0; y < n1; ++y) {
        row[0] = y;
        chains(1);
      }
      return;
    }
    for (ObjId y : by_start[idx(f1.level(row[idx(k - 1)], 1))]) {
      row[idx(k)] = y;
      chains(k + 1);
    }
  };
  chains(0);
  const auto nobj = static_cast<ObjId>(objects.size());
  std::vector<std::string> names;
  for (ObjId a = 0; a < nobj; ++a) names.push_back("#" + std::to_string(a));

  InternTable rows(idx(m) + 2);
  std::vector<MorId> identities(idx(nobj), kNone);
  std::vector<std::int32_t> mrow(idx(m) + 2);
  for (ObjId a = 0; a < nobj; ++a) {
    const auto ra = objects.row(a);
    for (ObjId b = 0; b < nobj; ++b) {
      const auto rb = objects.row(b);
      mrow[0] = a;
      mrow[1] = b;
      std::function<void(int)> rec = [&](int k) {
        if (k == m) {
          const MorId id = rows.insert(mrow);
          if (a == b) {
            bool ident = true;
            for (int i = 0; i < m; ++i) ident = ident && c1.is_identity(mrow[idx(i) + 2]);
            if (ident) identities[idx(a)] = id;
          }
          return;
        }
        for (MorId g : c1.hom(ra[idx(k)], rb[idx(k)])) {
          if (k > 0 && f1.components(g)[0] != f1.components(mrow[idx(k) + 1])[1]) continue;
          mrow[idx(k) + 2] = g;
          rec(k + 1);
        }
      };
      rec(0);
    }
  }
  r.objects = idx(nobj);
  r.morphisms = rows.size();
  auto fib = make_tuple_category(std::move(names), std::vector<CatPtr>(idx(m), f1.ctx->cat_ptr()),
                                 std::move(rows), std::move(identities));

  const FinCat& cm = fm.cat();
  Functor seg{fm.ctx->cat_ptr(), fib.cat, {}, {}};
  std::vector<SimplicialOperator> pieces;
  for (int k = 1; k <= m; ++k) pieces.push_back(SimplicialOperator{1, m, {k - 1, k}});
  for (ObjId x = 0; x < static_cast<ObjId>(cm.num_objects()); ++x) {
    for (int k = 0; k < m; ++k) {
      const ObjId y = f1.dc().find_object(restrict_along(fm.object(x), pieces[idx(k)]));
      if (y == kNone) {
        r.reason = "restriction of " + cm.object_name(x) + " is not in F_1";
        return r;
      }
      row[idx(k)] = y;
    }
    seg.obj_map.push_back(objects.find(row));
  }
  std::vector<MorId> comps(idx(m));
  for (MorId f = 0; f < static_cast<MorId>(cm.num_morphisms()); ++f) {
    const auto cf = fm.components(f);
    const ObjId a = seg(cm.src(f));
    const ObjId b = seg(cm.tgt(f));
    for (int k = 0; k < m; ++k) {
      const std::array<MorId, 2> pair{cf[idx(k)], cf[idx(k) + 1]};
      comps[idx(k)] = f1.dc().find_morphism(objects.row(a)[idx(k)], objects.row(b)[idx(k)], pair);
    }
    seg.mor_map.push_back(fib.composer->find(a, b, comps));
  }
  validate_functor(seg);
  r.holds = is_isomorphism_of_categories(seg);
  if (!r.holds) r.reason = "the Segal map is not bijective";
  return r;
}

// ---------------------------------------------------------------------------
// Grothendieck total category

namespace {

class GrothendieckComposer final : public Composer {
 public:
  struct Data {
    std::vector<SmContext> fibers;
    std::vector<SimplicialOperator> ops;
    std::vector<std::vector<int>> op_compose;  // [i][j]: ops[i] o ops[j] or -1
    std::vector<Functor> act;                  // per op: S_target -> S_source
    std::unordered_map<std::uint64_t, MorId> comparison;
    std::vector<std::pair<int, ObjId>> objects;
    InternTable rows{4};  // (src, tgt, op, psi)
  };

  explicit GrothendieckComposer(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  static std::uint64_t key(int i, int j, ObjId x) {
    return (static_cast<std::uint64_t>(i) << 40) | (static_cast<std::uint64_t>(j) << 20) |
           static_cast<std::uint64_t>(x);
  }

  MorId compose(MorId g, MorId f) const override {
    const auto rf = d_->rows.row(f);
    const auto rg = d_->rows.row(g);
    const int i = rf[2];
    const int j = rg[2];
    const int k = d_->op_compose[idx(i)][idx(j)];
    const int m = d_->ops[idx(j)].source;
    const FinCat& s = d_->fibers[idx(m)].cat();
    const ObjId x = d_->objects[idx(rf[0])].second;
    const MorId moved = d_->act[idx(j)].on_morphism(rf[3]);
    const MorId psi = s.compose_unchecked(rg[3], s.compose_unchecked(moved, d_->comparison.at(key(i, j, x))));
    const std::array<std::int32_t, 4> r{rf[0], rg[1], k, psi};
    return d_->rows.find(r);
  }

 private:
  std::shared_ptr<const Data> d_;
};

}  // namespace

ObjId GrothendieckTotal::object(int m, ObjId x) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].first == m && objects[i].second == x) return static_cast<ObjId>(i);
  }
  return kNone;
}

int GrothendieckTotal::operator_index(const SimplicialOperator& eta) const {
  for (std::size_t i = 0; i < operators.size(); ++i) {
    if (operators[i] == eta) return static_cast<int>(i);
  }
  return -1;
}

GrothendieckTotal grothendieck_total(CtxPtr base, int N, const FilteredOptions& options) {
  GrothendieckTotal g;
  g.N = N;
  auto d = std::make_shared<GrothendieckComposer::Data>();
  for (int m = 0; m <= N; ++m) d->fibers.push_back(build_Sm(base, m, options));
  for (int a = 0; a <= N; ++a) {
    for (int b = 0; b <= N; ++b) {
      for (auto& e : monotone_maps(a, b)) d->ops.push_back(std::move(e));
    }
  }
  const auto& ops = d->ops;
  auto op_index = [&](const SimplicialOperator& e) {
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (ops[i] == e) return static_cast<int>(i);
    }
    return -1;
  };
  d->op_compose.assign(ops.size(), std::vector<int>(ops.size(), -1));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    d->act.push_back(act_S_functor(d->fibers[idx(ops[i].target)], d->fibers[idx(ops[i].source)], ops[i]));
    for (std::size_t j = 0; j < ops.size(); ++j) {
      if (ops[j].target == ops[i].source) d->op_compose[i][j] = op_index(ops[i].after(ops[j]));
    }
  }
  const SizedWaldContext& bc = *base;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const int k = d->op_compose[i][j];
      if (k < 0) continue;
      const SmContext& from = d->fibers[idx(ops[i].target)];
      const SmContext& to = d->fibers[idx(ops[j].source)];
      for (ObjId x = 0; x < static_cast<ObjId>(from.cat().num_objects()); ++x) {
        const auto comps = act_comparison(bc, ops[i], ops[j], from.object(x));
        const ObjId a = d->act[idx(k)](x);
        const ObjId b = d->act[j](d->act[i](x));
        const MorId c = to.find_morphism(a, b, comps);
        if (c == kNone || !to.ctx()->is_iso(c)) {
          throw Error(ErrorKind::InvalidNatTrans, "no comparison iso for " + ops[i].to_string() + " and " +
                                                      ops[j].to_string());
        }
        d->comparison.emplace(GrothendieckComposer::key(static_cast<int>(i), static_cast<int>(j), x), c);
      }
    }
  }
  std::vector<std::string> names;
  for (int m = 0; m <= N; ++m) {
    const FinCat& s = d->fibers[idx(m)].cat();
    for (ObjId x = 0; x < static_cast<ObjId>(s.num_objects()); ++x) {
      d->objects.emplace_back(m, x);
      names.push_back(std::to_string(m) + ":" + s.object_name(x));
    }
  }
  const auto n = static_cast<ObjId>(d->objects.size());
  std::vector<ObjId> src, tgt;
  std::vector<MorId> identities(idx(n), kNone);
  for (ObjId s = 0; s < n; ++s) {
    const auto [ms, x] = d->objects[idx(s)];
    for (ObjId t = 0; t < n; ++t) {
      const auto [mt, y] = d->objects[idx(t)];
      const FinCat& fiber = d->fibers[idx(mt)].cat();
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].source != mt || ops[i].target != ms) continue;
        const ObjId moved = d->act[i](x);
        for (MorId psi : fiber.hom(moved, y)) {
          const std::array<std::int32_t, 4> r{s, t, static_cast<std::int32_t>(i), psi};
          const MorId e = d->rows.insert(r);
          src.push_back(s);
          tgt.push_back(t);
          g.edges.push_back({static_cast<int>(i), psi});
          if (s == t && ops[i] == SimplicialOperator::identity(ms) && moved == x && fiber.is_identity(psi)) {
            identities[idx(s)] = e;
          }
        }
      }
    }
  }
  for (ObjId s = 0; s < n; ++s) {
    if (identities[idx(s)] == kNone) {
      throw Error(ErrorKind::MissingIdentity, "identity operator does not fix " + names[idx(s)]);
    }
  }
  g.fibers = d->fibers;
  g.operators = d->ops;
  g.objects = d->objects;
  auto composer = std::make_shared<const GrothendieckComposer>(d);
  g.cat = std::make_shared<const FinCat>(std::move(names), std::move(src), std::move(tgt), std::move(identities),
                                         composer);

  // Marked edges: e over eta is initial among lifts of eta from its source,
  // i.e. chi -> chi o e is a bijection from morphisms over the identity out
  // of tgt(e) onto lifts of eta out of src(e), for every target.
  const FinCat& c = *g.cat;
  const auto nm = c.num_morphisms();
  const auto flags = kernels::map_indexed<char>(nm, options.wald.parallel, [&](std::size_t i) {
    const auto e = static_cast<MorId>(i);
    const ObjId s = c.src(e);
    const ObjId t = c.tgt(e);
    const int mt = d->objects[idx(t)].first;
    const int op = g.edges[i].op;
    const int id_op = op_index(SimplicialOperator::identity(mt));
    for (ObjId t2 = 0; t2 < n; ++t2) {
      if (d->objects[idx(t2)].first != mt) continue;
      std::size_t lifts = 0;
      for (MorId e2 : c.hom(s, t2)) lifts += g.edges[idx(e2)].op == op ? 1 : 0;
      std::vector<MorId> images;
      for (MorId chi : c.hom(t, t2)) {
        if (g.edges[idx(chi)].op == id_op) images.push_back(c.compose_unchecked(chi, e));
      }
      std::sort(images.begin(), images.end());
      if (images.size() != lifts || std::adjacent_find(images.begin(), images.end()) != images.end()) return char{0};
    }
    return char{1};
  });
  g.marked.assign(flags.begin(), flags.end());
  return g;
}

GrothendieckReport check_grothendieck(const GrothendieckTotal& g) {
  GrothendieckReport r;
  const FinCat& c = *g.cat;
  const auto n = static_cast<ObjId>(c.num_objects());
  auto id_op = [&](int m) { return g.operator_index(SimplicialOperator::identity(m)); };
  auto is_marked = [&](MorId e) { return g.marked[idx(e)] != 0; };

  r.fibers_isomorphic = true;
  for (int m = 0; m <= g.N && r.fibers_isomorphic; ++m) {
    const SmContext& s = g.fibers[idx(m)];
    const FinCat& sc = s.cat();
    Functor inc{s.ctx()->cat_ptr(), g.cat, {}, {}};
    for (ObjId x = 0; x < static_cast<ObjId>(sc.num_objects()); ++x) inc.obj_map.push_back(g.object(m, x));
    std::size_t over_id = 0;
    for (ObjId a : inc.obj_map) {
      for (ObjId b : inc.obj_map) {
        for (MorId e : c.hom(a, b)) over_id += g.edges[idx(e)].op == id_op(m) ? 1 : 0;
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(sc.num_morphisms()); ++f) {
      MorId found = kNone;
      for (MorId e : c.hom(inc(sc.src(f)), inc(sc.tgt(f)))) {
        if (g.edges[idx(e)].op == id_op(m) && g.edges[idx(e)].psi == f) found = e;
      }
      inc.mor_map.push_back(found);
    }
    try {
      validate_functor(inc);
    } catch (const Error&) {
      r.fibers_isomorphic = false;
    }
    r.fibers_isomorphic = r.fibers_isomorphic && over_id == sc.num_morphisms();
  }

  r.lifts_exist = true;
  r.marked_are_isos = true;
  for (MorId e = 0; e < static_cast<MorId>(c.num_morphisms()); ++e) {
    const int mt = g.objects[idx(c.tgt(e))].first;
    const bool iso = g.fibers[idx(mt)].ctx()->is_iso(g.edges[idx(e)].psi);
    r.marked_are_isos = r.marked_are_isos && iso == is_marked(e);
    r.marked += is_marked(e) ? 1 : 0;
  }
  for (ObjId s = 0; s < n; ++s) {
    const int ms = g.objects[idx(s)].first;
    for (std::size_t i = 0; i < g.operators.size(); ++i) {
      if (g.operators[i].target != ms) continue;
      bool found = false;
      for (MorId e : c.out(s)) found = found || (g.edges[idx(e)].op == static_cast<int>(i) && is_marked(e));
      r.lifts_exist = r.lifts_exist && found;
    }
  }

  r.composites_marked = true;
  for (MorId e = 0; e < static_cast<MorId>(c.num_morphisms()) && r.composites_marked; ++e) {
    if (!is_marked(e)) continue;
    for (MorId e2 : c.out(c.tgt(e))) {
      if (is_marked(e2) && !is_marked(c.compose_unchecked(e2, e))) {
        r.composites_marked = false;
        break;
      }
    }
  }

  r.lifts_unique = true;
  for (ObjId s = 0; s < n && r.lifts_unique; ++s) {
    std::vector<MorId> marked_out;
    for (MorId e : c.out(s)) {
      if (is_marked(e)) marked_out.push_back(e);
    }
    for (MorId e1 : marked_out) {
      for (MorId e2 : marked_out) {
        if (g.edges[idx(e1)].op != g.edges[idx(e2)].op) continue;
        const int mt = g.objects[idx(c.tgt(e1))].first;
        std::size_t count = 0;
        bool iso = false;
        for (MorId chi : c.hom(c.tgt(e1), c.tgt(e2))) {
          if (g.edges[idx(chi)].op != id_op(mt) || c.compose_unchecked(chi, e1) != e2) continue;
          ++count;
          iso = g.fibers[idx(mt)].ctx()->is_iso(g.edges[idx(chi)].psi);
        }
        r.lifts_unique = r.lifts_unique && count == 1 && iso;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// iota S

namespace {

struct CoreMap {
  std::vector<ObjId> obj;
  std::vector<MorId> mor;
};

CoreMap act_on_core(const SizedWaldContext& base, const DiagramCategory& from, const DiagramCategory& to,
                    const SimplicialOperator& eta) {
  CoreMap out;
  const FinCat& a = *from.cat;
  for (const auto& x : from.objects) {
    const ObjId y = to.find_object(act_S(base, eta, x));
    if (y == kNone) throw Error(ErrorKind::InvalidFunctor, eta.to_string() + " leaves the interior groupoid");
    out.obj.push_back(y);
  }
  out.mor = kernels::map_indexed<MorId>(a.num_morphisms(), true, [&](std::size_t i) {
    const auto m = static_cast<MorId>(i);
    const auto comps = act_S_components(base, eta, from.objects[idx(a.src(m))], from.objects[idx(a.tgt(m))],
                                        from.components(m));
    const MorId r = to.find_morphism(out.obj[idx(a.src(m))], out.obj[idx(a.tgt(m))], comps);
    if (r == kNone) throw Error(ErrorKind::InvalidFunctor, eta.to_string() + " leaves the interior groupoid");
    return r;
  });
  return out;
}

Table map_chains(const InternTable& from, const InternTable& to, int k, const CoreMap& f) {
  Table out(from.size());
  std::vector<std::int32_t> row(k == 0 ? 1 : idx(k));
  for (std::size_t s = 0; s < from.size(); ++s) {
    const auto r = from.row(static_cast<std::int32_t>(s));
    if (k == 0) {
      row[0] = f.obj[idx(r[0])];
    } else {
      for (std::size_t i = 0; i < r.size(); ++i) row[i] = f.mor[idx(r[i])];
    }
    out[s] = to.find(row);
    if (out[s] < 0) throw Error(ErrorKind::InvalidFunctor, "image of a chain is not a simplex");
  }
  return out;
}

}  // namespace

std::int32_t IotaS::object_loop(ObjId x) const {
  const SizedWaldContext& b = *base;
  const FunctorData obj = filtration_from_steps(b.cat(), {b.from_zero[idx(x)]}, b.zero);
  const ObjId o = cores[1].find_object(obj);
  if (o == kNone) return -1;
  const std::array<std::int32_t, 1> r{cores[1].cat->id(o)};
  return chains[1][1].find(r);
}

IotaS iota_S_bisimplicial(CtxPtr base, int M, int K, std::size_t limit, const FilteredOptions& options) {
  IotaS out;
  out.base = base;
  BisimpSet& b = out.bisimp;
  b.resize(M, K);
  std::vector<TruncSSet> nerves;
  for (int m = 0; m <= M; ++m) {
    const long cap = default_cap(*base, m, options);
    auto objects = totally_filtered_objects(*base, m, cap, options.functor_limit);
    DiagramOptions d;
    d.scope = MorphismScope::IsosOnly;
    d.base_isos = base->pair.isos;
    d.morphism_limit = options.morphism_limit;
    const FinCat& bc = base->cat();
    out.cores.push_back(diagram_category(poset_chain(m), base->cat_ptr(), std::move(objects), d,
                                         [&bc](const FunctorData& x) { return chain_name(bc, x); }));
    out.chains.emplace_back();
    nerves.push_back(nerve(*out.cores.back().cat, K, limit, &out.chains.back()));
  }
  for (int m = 0; m <= M; ++m) {
    const TruncSSet& ns = nerves[idx(m)];
    for (int k = 0; k <= K; ++k) {
      b.count[idx(m)][idx(k)] = ns.count[idx(k)];
      if (k >= 1) b.vface[idx(m)][idx(k)] = ns.face[idx(k)];
      if (k < K) b.vdegen[idx(m)][idx(k)] = ns.degen[idx(k)];
    }
  }
  const SizedWaldContext& bc = *base;
  for (int m = 0; m <= M; ++m) {
    if (m >= 1) {
      for (int i = 0; i <= m; ++i) {
        const CoreMap f = act_on_core(bc, out.cores[idx(m)], out.cores[idx(m - 1)], SimplicialOperator::face(m, i));
        for (int k = 0; k <= K; ++k) {
          b.hface[idx(m)][idx(k)].push_back(
              map_chains(out.chains[idx(m)][idx(k)], out.chains[idx(m - 1)][idx(k)], k, f));
        }
      }
    }
    if (m < M) {
      for (int j = 0; j <= m; ++j) {
        const CoreMap f =
            act_on_core(bc, out.cores[idx(m)], out.cores[idx(m + 1)], SimplicialOperator::degeneracy(m, j));
        for (int k = 0; k <= K; ++k) {
          b.hdegen[idx(m)][idx(k)].push_back(
              map_chains(out.chains[idx(m)][idx(k)], out.chains[idx(m + 1)][idx(k)], k, f));
        }
      }
    }
  }
  return out;
}

}  // namespace waldkit
