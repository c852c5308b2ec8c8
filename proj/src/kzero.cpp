#include "waldkit/kzero.hpp"

#include <numeric>
#include <set>

#include "waldkit/errors.hpp"
#include "waldkit/simpset.hpp"

namespace waldkit {

namespace {

std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }

std::string relation_text(const IntVec& row) {
  std::string s = "(";
  for (std::size_t i = 0; i < row.size(); ++i) s += (i ? " " : "") + row[i].get_str();
  return s + ")";
}

}  // namespace

IntVec K0::image(ObjId x) const {
  IntVec e(generators.size());
  e[idx(class_of[idx(x)])] = 1;
  return quotient->coords(e);
}

std::string K0::describe(ObjId x) const {
  const IntVec c = image(x);
  return c.empty() ? "0" : quotient->format_coords(c);
}

K0 k0(CtxPtr ctx, const MorSet* w) {
  K0 out;
  out.ctx = ctx;
  const IsoData& iso = ctx->isos();
  out.generators = iso.representatives;
  out.class_of = iso.class_of;
  const std::size_t n = out.generators.size();
  out.relations = Lattice(n);
  const FinCat& c = ctx->cat();
  for (MorId f : cofibration_representatives(*ctx)) {
    const ObjId a = c.src(f);
    if (!ctx->in_budget(f, ctx->to_zero[idx(a)])) continue;
    const Cocone k = ctx->cofiber(f);
    std::vector<long> row(n, 0);
    row[idx(out.class_of[idx(c.tgt(f))])] += 1;
    row[idx(out.class_of[idx(a)])] -= 1;
    row[idx(out.class_of[idx(k.apex)])] -= 1;
    out.relations.insert_small(row);
    ++out.sequence_relations;
  }
  if (w != nullptr) {
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
      if ((*w)[idx(f)] == 0) continue;
      const std::int32_t a = out.class_of[idx(c.src(f))];
      const std::int32_t b = out.class_of[idx(c.tgt(f))];
      if (a == b || !seen.emplace(a, b).second) continue;
      std::vector<long> row(n, 0);
      row[idx(a)] = 1;
      row[idx(b)] = -1;
      out.relations.insert_small(row);
      ++out.labeled_relations;
    }
  }
  out.quotient.emplace(out.relations);
  return out;
}

K0Map k0_map_to_sum(const K0& source, const std::vector<std::pair<const K0*, std::vector<ObjId>>>& parts) {
  K0Map out;
  std::size_t total = 0;
  for (const auto& [k, map] : parts) total += k->generators.size();
  out.source = source.relations;
  out.target = Lattice(total);
  out.matrix = IntMatrix(total, source.generators.size());
  std::size_t offset = 0;
  for (const auto& [k, map] : parts) {
    const std::size_t n = k->generators.size();
    for (const IntVec& b : k->relations.basis()) {
      IntVec v(total);
      for (std::size_t i = 0; i < n; ++i) v[offset + i] = b[i];
      out.target.insert(std::move(v));
    }
    for (std::size_t g = 0; g < source.generators.size(); ++g) {
      const ObjId y = map[idx(source.generators[g])];
      out.matrix(offset + idx(k->class_of[idx(y)]), g) += 1;
    }
    offset += n;
  }
  const GroupHom h = out.hom();
  const long bad = first_unpreserved_relation(h);
  if (bad >= 0) {
    throw Error(ErrorKind::RelationNotPreserved,
                "relation " + relation_text(source.relations.basis()[idx(static_cast<std::int32_t>(bad))]) +
                    " of " + source.ctx->name + " is not carried into the target relations");
  }
  out.injective = is_injective(h);
  out.surjective = is_surjective(h);
  out.kernel = kernel_group(h);
  out.cokernel = cokernel_group(h);
  return out;
}

K0Map k0_map(const K0& source, const K0& target, const std::vector<ObjId>& object_map) {
  return k0_map_to_sum(source, {{&target, object_map}});
}

K0Map k0_induced(const Functor& f, const K0& source, const K0& target) {
  return k0_map(source, target, f.obj_map);
}

Pi1Comparison k0_via_pi1(const IotaS& io, const K0& k) {
  if (io.bisimp.M < 2 || io.bisimp.K < 2) {
    throw Error(ErrorKind::TruncationTooLow, "pi_1 of iota S needs M >= 2 and K >= 2, got M = " +
                                                 std::to_string(io.bisimp.M) + ", K = " +
                                                 std::to_string(io.bisimp.K));
  }
  if (io.base.get() != k.ctx.get()) throw Error(ErrorKind::UsageError, "iota S and K_0 of different contexts");
  Pi1Comparison out;
  const TruncSSet d = diagonal(io.bisimp);
  const GroupPresentation p = pi1_presentation(d, 0);
  const Lattice rel = abelianized_relations(p);
  out.group = QuotientGroup(rel).group();
  out.loops = p.generators;
  out.relators = p.relators.size();
  out.matching = IntMatrix(p.generators, k.generators.size());
  for (std::size_t g = 0; g < k.generators.size(); ++g) {
    const std::int32_t loop = io.object_loop(k.generators[g]);
    if (loop < 0) {
      out.reason = "no loop for " + k.ctx->cat().object_name(k.generators[g]);
      return out;
    }
    const std::int32_t e = p.edge_generator[idx(loop)];
    if (e >= 0) out.matching(idx(e), g) += 1;
  }
  const GroupHom h{&k.relations, &rel, out.matching};
  const long bad = first_unpreserved_relation(h);
  out.well_defined = bad < 0;
  if (!out.well_defined) {
    out.reason = "relation " + relation_text(k.relations.basis()[idx(static_cast<std::int32_t>(bad))]) +
                 " does not hold among the loops";
    return out;
  }
  out.isomorphism = is_injective(h) && is_surjective(h);
  if (!out.isomorphism) out.reason = "loops of objects do not give an isomorphism";
  return out;
}

AdditivityReport additivity_check(CtxPtr base, int m, const FilteredOptions& options) {
  AdditivityReport r;
  r.m = m;
  const FilteredPtr F = build_Fm(base, m, options);
  const SmContext S = build_Sm(base, m, options);
  const K0 kf = k0(F->ctx);
  const K0 kc = k0(base);
  const K0 ks = k0(S.ctx());
  r.fm = kf.group();
  r.base = kc.group();
  r.sm = ks.group();
  r.map = k0_map_to_sum(kf, {{&kc, evaluation_zero(*F).obj_map}, {&ks, quotient_functor(*F, S).obj_map}});
  r.passed = r.map.isomorphism();
  return r;
}

FibrationReport fibration_pi0_check(const Labeling& l) {
  FibrationReport r;
  const SubContext aw = labeled_objects(l);
  const K0 kaw = k0(aw.ctx);
  const K0 ka = k0(l.ctx);
  const K0 krel = k0(l.ctx, &l.w);
  r.aw = kaw.group();
  r.a = ka.group();
  r.aw_rel = krel.group();
  r.inclusion = k0_map(kaw, ka, aw.sub.object_to_parent);
  std::vector<ObjId> id(l.ctx->num_objects());
  std::iota(id.begin(), id.end(), ObjId{0});
  r.quotient = k0_map(ka, krel, id);
  r.exact_middle = is_exact_at_middle(r.inclusion.hom(), r.quotient.hom());
  r.surjective = r.quotient.surjective;
  return r;
}

CofinalityReport cofinality_check(const SubContext& sub) {
  CofinalityReport r;
  const CofinalityWitness w = weakly_cofinal_check(sub);
  r.cofinal = w.cofinal;
  r.reason = w.reason;
  const K0 ks = k0(sub.ctx);
  const K0 kc = k0(sub.parent);
  r.sub = ks.group();
  r.ambient = kc.group();
  const K0Map map = k0_map(ks, kc, sub.sub.object_to_parent);
  r.quotient = map.cokernel;
  r.injective = map.injective;
  return r;
}

StabilizationReport budget_stabilization(const std::function<CtxPtr(long)>& build,
                                         const std::vector<long>& budgets) {
  StabilizationReport r;
  std::optional<K0> prev;
  for (long b : budgets) {
    StabilizationStep step;
    step.budget = b;
    K0 k = k0(build(b));
    step.group = k.group();
    if (prev) {
      const FinCat& from = prev->ctx->cat();
      std::vector<ObjId> map(from.num_objects(), kNone);
      bool complete = true;
      for (ObjId x = 0; x < static_cast<ObjId>(from.num_objects()); ++x) {
        const auto y = k.ctx->cat().find_object(from.object_name(x));
        if (!y) {
          step.note = "object " + from.object_name(x) + " is missing";
          complete = false;
          break;
        }
        map[idx(x)] = *y;
      }
      if (complete) {
        try {
          step.map_isomorphism = k0_map(*prev, k, map).isomorphism();
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::RelationNotPreserved) throw;
          step.note = e.what();
        }
      }
    }
    r.steps.push_back(std::move(step));
    prev = std::move(k);
  }
  for (std::size_t i = 0; i + 1 < r.steps.size(); ++i) {
    bool stable = true;
    for (std::size_t j = i + 1; j < r.steps.size(); ++j) stable = stable && r.steps[j].map_isomorphism;
    if (stable) {
      r.stable_from = r.steps[i].budget;
      break;
    }
  }
  return r;
}

}  // namespace waldkit
