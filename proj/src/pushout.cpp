#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>

#include "waldkit/fincat.hpp"

namespace waldkit {

namespace {

// Fisher-Yates with a fixed generator; std::shuffle's algorithm is
// implementation-defined, this one is reproducible everywhere.
template <class T>
void permute(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Cocones (u, v) at W as pairs of morphisms, in the order u-major.
struct CoconeBuckets {
  std::vector<std::vector<MorId>> v_by_key;  // indexed by local index of v g in Hom(X, W)
  std::vector<MorId> us;
  std::vector<std::int32_t> u_keys;
};

CoconeBuckets buckets(const FinCat& c, const Span& s, ObjId w) {
  CoconeBuckets b;
  const ObjId x = c.src(s.f);
  const MorRange xw = c.hom(x, w);
  b.v_by_key.resize(xw.size());
  for (MorId v : c.hom(c.tgt(s.g), w)) {
    b.v_by_key[static_cast<std::size_t>(c.compose_unchecked(v, s.g) - xw.first)].push_back(v);
  }
  for (MorId u : c.hom(c.tgt(s.f), w)) {
    b.us.push_back(u);
    b.u_keys.push_back(c.compose_unchecked(u, s.f) - xw.first);
  }
  return b;
}

std::uint64_t cocone_count(const FinCat& c, const Span& s, ObjId w) {
  const ObjId x = c.src(s.f);
  const MorRange xw = c.hom(x, w);
  if (xw.empty()) return 0;
  std::vector<std::uint64_t> cu(xw.size(), 0), cv(xw.size(), 0);
  for (MorId u : c.hom(c.tgt(s.f), w)) ++cu[static_cast<std::size_t>(c.compose_unchecked(u, s.f) - xw.first)];
  for (MorId v : c.hom(c.tgt(s.g), w)) ++cv[static_cast<std::size_t>(c.compose_unchecked(v, s.g) - xw.first)];
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < xw.size(); ++k) total += cu[k] * cv[k];
  return total;
}

// h -> (h u, h v) is injective on Hom(P, W) for every W.
bool injective_everywhere(const FinCat& c, const Cocone& k, std::vector<std::uint64_t>& scratch) {
  const ObjId y = c.src(k.u);
  const ObjId z = c.src(k.v);
  for (ObjId w = 0; w < static_cast<ObjId>(c.num_objects()); ++w) {
    const MorRange pw = c.hom(k.apex, w);
    if (pw.size() <= 1) continue;
    const MorRange yw = c.hom(y, w);
    const MorRange zw = c.hom(z, w);
    scratch.clear();
    for (MorId h : pw) {
      const auto a = static_cast<std::uint64_t>(c.compose_unchecked(h, k.u) - yw.first);
      const auto b = static_cast<std::uint64_t>(c.compose_unchecked(h, k.v) - zw.first);
      scratch.push_back(a * zw.size() + b);
    }
    std::sort(scratch.begin(), scratch.end());
    if (std::adjacent_find(scratch.begin(), scratch.end()) != scratch.end()) return false;
  }
  return true;
}

// Every cocone at every W factors through k (not necessarily uniquely).
bool weakly_universal(const FinCat& c, const Span& s, const Cocone& k,
                      const std::vector<std::uint64_t>& counts) {
  for (ObjId w = 0; w < static_cast<ObjId>(c.num_objects()); ++w) {
    std::unordered_set<std::uint64_t> images;
    const MorRange zw = c.hom(c.tgt(s.g), w);
    const MorRange yw = c.hom(c.tgt(s.f), w);
    for (MorId h : c.hom(k.apex, w)) {
      const auto a = static_cast<std::uint64_t>(c.compose_unchecked(h, k.u) - yw.first);
      const auto b = static_cast<std::uint64_t>(c.compose_unchecked(h, k.v) - zw.first);
      images.insert(a * zw.size() + b);
    }
    if (images.size() != counts[static_cast<std::size_t>(w)]) return false;
  }
  return true;
}

}  // namespace

bool is_cocone(const FinCat& c, const Span& s, const Cocone& k) {
  if (c.src(s.f) != c.src(s.g)) return false;
  if (c.src(k.u) != c.tgt(s.f) || c.src(k.v) != c.tgt(s.g)) return false;
  if (c.tgt(k.u) != k.apex || c.tgt(k.v) != k.apex) return false;
  return c.compose_unchecked(k.u, s.f) == c.compose_unchecked(k.v, s.g);
}

std::optional<std::size_t> certify_pushout(const FinCat& c, const Span& s, const Cocone& k) {
  if (!is_cocone(c, s, k)) return std::nullopt;
  std::size_t total = 0;
  for (ObjId w = 0; w < static_cast<ObjId>(c.num_objects()); ++w) {
    const std::uint64_t count = cocone_count(c, s, w);
    if (count != c.hom(k.apex, w).size()) return std::nullopt;
    total += count;
  }
  std::vector<std::uint64_t> scratch;
  if (!injective_everywhere(c, k, scratch)) return std::nullopt;
  return total;
}

MorId find_mediator(const FinCat& c, const Cocone& k, const Cocone& w) {
  MorId found = kNone;
  for (MorId h : c.hom(k.apex, w.apex)) {
    if (c.compose_unchecked(h, k.u) == w.u && c.compose_unchecked(h, k.v) == w.v) {
      if (found != kNone) {
        throw Error(ErrorKind::NonUniqueMediator, "two mediators " + c.morphism_name(found) +
                                                      " and " + c.morphism_name(h) + " into " +
                                                      c.object_name(w.apex));
      }
      found = h;
    }
  }
  return found;
}

std::optional<PushoutCertificate> find_pushout(const FinCat& c, const Span& s,
                                               const SearchOrder& order, bool record_mediations) {
  if (c.src(s.f) != c.src(s.g)) {
    throw Error(ErrorKind::NotComposable, "span legs " + c.morphism_name(s.f) + " and " +
                                              c.morphism_name(s.g) + " have different sources");
  }
  const auto n = static_cast<ObjId>(c.num_objects());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n));
  for (ObjId w = 0; w < n; ++w) counts[static_cast<std::size_t>(w)] = cocone_count(c, s, w);

  std::vector<ObjId> objects(static_cast<std::size_t>(n));
  std::iota(objects.begin(), objects.end(), 0);
  std::mt19937_64 rng(order.seed);
  if (order.seed != 0) permute(objects, rng);

  auto matches_counts = [&](ObjId p) {
    for (ObjId w = 0; w < n; ++w) {
      if (c.hom(p, w).size() != counts[static_cast<std::size_t>(w)]) return false;
    }
    return true;
  };

  std::vector<std::uint64_t> scratch;
  for (ObjId p : objects) {
    if (counts[static_cast<std::size_t>(p)] == 0 || !matches_counts(p)) continue;
    CoconeBuckets b = buckets(c, s, p);
    std::vector<std::size_t> u_order(b.us.size());
    std::iota(u_order.begin(), u_order.end(), 0);
    if (order.seed != 0) {
      permute(u_order, rng);
      for (auto& vs : b.v_by_key) permute(vs, rng);
    }
    for (std::size_t ui : u_order) {
      for (MorId v : b.v_by_key[static_cast<std::size_t>(b.u_keys[ui])]) {
        const Cocone k{p, b.us[ui], v};
        if (!injective_everywhere(c, k, scratch)) continue;
        PushoutCertificate cert;
        cert.pushout = k;
        for (auto count : counts) cert.cocones_checked += count;
        if (record_mediations) {
          for (ObjId w = 0; w < n; ++w) {
            CoconeBuckets bw = buckets(c, s, w);
            for (std::size_t i = 0; i < bw.us.size(); ++i) {
              for (MorId vw : bw.v_by_key[static_cast<std::size_t>(bw.u_keys[i])]) {
                const Cocone other{w, bw.us[i], vw};
                cert.mediations.push_back({other, find_mediator(c, k, other)});
              }
            }
          }
        }
        return cert;
      }
    }
  }

  // No colimit. Look for a cocone through which everything factors but not
  // uniquely; that is a failed pushout rather than an absent one.
  std::uint64_t work = 0;
  for (ObjId p = 0; p < n; ++p) work += counts[static_cast<std::size_t>(p)] * c.out(p).size();
  if (work > 20'000'000) return std::nullopt;
  for (ObjId p = 0; p < n; ++p) {
    if (counts[static_cast<std::size_t>(p)] == 0) continue;
    CoconeBuckets b = buckets(c, s, p);
    for (std::size_t i = 0; i < b.us.size(); ++i) {
      for (MorId v : b.v_by_key[static_cast<std::size_t>(b.u_keys[i])]) {
        const Cocone k{p, b.us[i], v};
        if (weakly_universal(c, s, k, counts)) {
          throw Error(ErrorKind::NonUniqueMediator,
                      "cocone (" + c.morphism_name(k.u) + ", " + c.morphism_name(k.v) + ") at " +
                          c.object_name(p) + " of span (" + c.morphism_name(s.f) + ", " +
                          c.morphism_name(s.g) + ") has non-unique mediators");
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace waldkit
