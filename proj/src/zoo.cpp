#include "waldkit/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace waldkit {

namespace {

std::size_t idx(std::int32_t i) { return static_cast<std::size_t>(i); }

// Morphisms a -> b are numbered offset(a, b) + code, where code is a digit
// string of length digits(a, b) in base radix(b).
class CodedComposer : public Composer {
 public:
  CodedComposer(std::vector<int> param, int fixed_radix) : param_(std::move(param)), fixed_radix_(fixed_radix) {
    const std::size_t n = param_.size();
    offset_.assign(n * n + 1, 0);
    std::int64_t total = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        offset_[a * n + b] = total;
        total += hom_size(a, b);
      }
    }
    offset_[n * n] = total;
    src_.reserve(static_cast<std::size_t>(total));
    tgt_.reserve(static_cast<std::size_t>(total));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::int64_t k = 0; k < hom_size(a, b); ++k) {
          src_.push_back(static_cast<ObjId>(a));
          tgt_.push_back(static_cast<ObjId>(b));
        }
      }
    }
  }

  std::size_t num_morphisms() const { return src_.size(); }
  const std::vector<ObjId>& src() const { return src_; }
  const std::vector<ObjId>& tgt() const { return tgt_; }

  // Radix of codes into b and the number of digits of a code a -> b.
  int radix(std::size_t b) const { return fixed_radix_ > 0 ? fixed_radix_ : param_[b] + 1; }
  int digits(std::size_t a, std::size_t b) const {
    return fixed_radix_ > 0 ? param_[a] * param_[b] : param_[a];
  }
  std::int64_t hom_size(std::size_t a, std::size_t b) const {
    std::int64_t s = 1;
    for (int i = 0; i < digits(a, b); ++i) s *= radix(b);
    return s;
  }

  std::vector<int> decode(MorId m) const {
    const std::size_t a = idx(src_[idx(m)]);
    const std::size_t b = idx(tgt_[idx(m)]);
    std::int64_t code = m - offset_[a * param_.size() + b];
    std::vector<int> d(static_cast<std::size_t>(digits(a, b)));
    for (int& x : d) {
      x = static_cast<int>(code % radix(b));
      code /= radix(b);
    }
    return d;
  }

  virtual MorId identity(std::size_t a) const = 0;

  MorId encode(std::size_t a, std::size_t b, const std::vector<int>& d) const {
    std::int64_t code = 0;
    for (std::size_t i = d.size(); i-- > 0;) code = code * radix(b) + d[i];
    return static_cast<MorId>(offset_[a * param_.size() + b] + code);
  }

 protected:
  std::vector<int> param_;
  int fixed_radix_;
  std::vector<std::int64_t> offset_;
  std::vector<ObjId> src_;
  std::vector<ObjId> tgt_;
};

int pow_mod(int x, int e, int q) {
  int r = 1;
  for (; e > 0; --e) r = r * x % q;
  return r;
}

// Matrix over F_q: rows x cols, entry (r, c) at r * cols + c.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<int> e;
  int& at(int r, int c) { return e[idx(r * cols + c)]; }
};

// Row reduction; returns the rank and reduces m in place.
int row_reduce(Mat& m, int q, Mat* companion) {
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int p = rank;
    while (p < m.rows && m.at(p, c) == 0) ++p;
    if (p == m.rows) continue;
    for (int k = 0; k < m.cols; ++k) std::swap(m.at(p, k), m.at(rank, k));
    if (companion) for (int k = 0; k < companion->cols; ++k) std::swap(companion->at(p, k), companion->at(rank, k));
    const int inv = pow_mod(m.at(rank, c), q - 2, q);
    for (int k = 0; k < m.cols; ++k) m.at(rank, k) = m.at(rank, k) * inv % q;
    if (companion) for (int k = 0; k < companion->cols; ++k) companion->at(rank, k) = companion->at(rank, k) * inv % q;
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, c) == 0) continue;
      const int t = m.at(r, c);
      for (int k = 0; k < m.cols; ++k) m.at(r, k) = ((m.at(r, k) - t * m.at(rank, k)) % q + q) % q;
      if (companion) {
        for (int k = 0; k < companion->cols; ++k) {
          companion->at(r, k) = ((companion->at(r, k) - t * companion->at(rank, k)) % q + q) % q;
        }
      }
    }
    ++rank;
  }
  return rank;
}

// F_q^a -> F_q^b as a b x a matrix; digit r * a + c is entry (r, c).
class VectComposer final : public CodedComposer {
 public:
  VectComposer(int q, int n) : CodedComposer(dims(n), q), q_(q) {}

  MorId compose(MorId g, MorId f) const override {
    const int a = src_[idx(f)];
    const int b = tgt_[idx(f)];
    const int c = tgt_[idx(g)];
    const auto F = decode(f);
    const auto G = decode(g);
    std::vector<int> H(idx(a * c), 0);
    for (int r = 0; r < c; ++r) {
      for (int col = 0; col < a; ++col) {
        int s = 0;
        for (int k = 0; k < b; ++k) s += G[idx(r * b + k)] * F[idx(k * a + col)];
        H[idx(r * a + col)] = s % q_;
      }
    }
    return encode(idx(a), idx(c), H);
  }

  std::optional<MorId> fast_inverse(MorId f) const override {
    const int a = src_[idx(f)];
    if (tgt_[idx(f)] != a) return kNone;
    Mat m{a, a, decode(f)};
    Mat inv{a, a, std::vector<int>(idx(a * a), 0)};
    for (int i = 0; i < a; ++i) inv.at(i, i) = 1;
    if (row_reduce(m, q_, &inv) < a) return kNone;
    return encode(idx(a), idx(a), inv.e);
  }

  MorId identity(std::size_t a) const override {
    std::vector<int> d(a * a, 0);
    for (std::size_t i = 0; i < a; ++i) d[i * a + i] = 1;
    return encode(a, a, d);
  }

  int rank(MorId f) const {
    Mat m{tgt_[idx(f)], src_[idx(f)], decode(f)};
    return row_reduce(m, q_, nullptr);
  }

 private:
  static std::vector<int> dims(int n) {
    std::vector<int> d;
    for (int i = 0; i <= n; ++i) d.push_back(i);
    return d;
  }
  int q_;
};

// {*, 1..a} -> {*, 1..b}: digit i is the image of i + 1 (0 for the basepoint).
class PointedComposer final : public CodedComposer {
 public:
  explicit PointedComposer(std::vector<int> cards) : CodedComposer(std::move(cards), 0) {}

  MorId compose(MorId g, MorId f) const override {
    const auto F = decode(f);
    const auto G = decode(g);
    std::vector<int> H(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) H[i] = F[i] == 0 ? 0 : G[idx(F[i] - 1)];
    return encode(idx(src_[idx(f)]), idx(tgt_[idx(g)]), H);
  }

  std::optional<MorId> fast_inverse(MorId f) const override {
    const std::size_t a = idx(src_[idx(f)]);
    const std::size_t b = idx(tgt_[idx(f)]);
    if (param_[a] != param_[b] || !injective(f)) return kNone;
    const auto F = decode(f);
    std::vector<int> inv(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) inv[idx(F[i] - 1)] = static_cast<int>(i) + 1;
    return encode(b, a, inv);
  }

  MorId identity(std::size_t a) const override {
    std::vector<int> d(idx(param_[a]));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<int>(i) + 1;
    return encode(a, a, d);
  }

  bool injective(MorId f) const {
    const auto F = decode(f);
    std::set<int> seen;
    for (int x : F) {
      if (x == 0 || !seen.insert(x).second) return false;
    }
    return true;
  }
};

CatPtr coded_category(std::shared_ptr<const CodedComposer> comp, std::vector<std::string> names) {
  std::vector<MorId> ident;
  for (std::size_t x = 0; x < names.size(); ++x) ident.push_back(comp->identity(x));
  FinCat c(std::move(names), comp->src(), comp->tgt(), std::move(ident), comp);
  return std::make_shared<const FinCat>(with_block_tables(c, std::size_t{1} << 22));
}

std::string field_name(int q) { return "F" + std::to_string(q); }

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

void check_count(double count, std::size_t limit, const std::string& spec) {
  if (count > static_cast<double>(limit)) {
    std::ostringstream msg;
    msg << spec << " has " << static_cast<long long>(count) << " morphisms (limit " << limit << ")";
    throw Error(ErrorKind::ParamTooLarge, msg.str());
  }
}

std::map<std::string, std::string> parse_params(const std::string& spec, const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::UsageError, "bad parameter '" + item + "' in " + spec);
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

int int_param(const std::map<std::string, std::string>& params, const std::string& key, const std::string& spec,
              std::optional<int> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::UsageError, spec + " needs parameter " + key);
  }
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size() || v < 0) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::UsageError, "parameter " + key + "=" + it->second + " in " + spec + " is not a count");
  }
}

void reject_unknown(const std::map<std::string, std::string>& params, std::set<std::string> known,
                    const std::string& spec) {
  for (const auto& [k, v] : params) {
    if (!known.count(k)) throw Error(ErrorKind::UsageError, "unknown parameter " + k + " in " + spec);
  }
}

ZooContext finish(CatPtr c, const std::function<bool(MorId)>& cof_rule, std::vector<long> size, long budget,
                  const ZooOptions& options, const std::string& name) {
  MorSet cof(c->num_morphisms(), 0);
  for (MorId m = 0; m < static_cast<MorId>(c->num_morphisms()); ++m) cof[idx(m)] = cof_rule(m) ? 1 : 0;
  PairCat pair = validate_pair(c, std::move(cof));
  ZooContext z;
  z.ctx = validate_waldhausen(pair, std::move(size), options.budget.value_or(budget), options.wald, name);
  return z;
}

}  // namespace

namespace {

std::vector<std::string> vect_names(int q, int n) {
  std::vector<std::string> names;
  for (int d = 0; d <= n; ++d) {
    names.push_back(d == 0 ? "0" : d == 1 ? field_name(q) : field_name(q) + "^" + std::to_string(d));
  }
  return names;
}

}  // namespace

CatPtr vect_category(int q, int n) {
  return coded_category(std::make_shared<const VectComposer>(q, n), vect_names(q, n));
}

CatPtr pointed_category(const std::vector<int>& cardinalities, std::vector<std::string> names) {
  return coded_category(std::make_shared<const PointedComposer>(cardinalities), std::move(names));
}

ZooContext make_zoo(const std::string& spec, const ZooOptions& options) {
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::string name = path;
    if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    if (auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return load_category(parse_category_file(path), name, options);
  }
  if (auto plus = spec.find('+'); plus != std::string::npos) {
    ZooContext left = make_zoo(spec.substr(0, plus), options);
    ZooContext right = make_zoo(spec.substr(plus + 1), options);
    ZooContext z;
    z.sum = direct_sum(left.ctx, right.ctx, options.wald);
    z.ctx = z.sum->ctx;
    z.summands = {std::move(left), std::move(right)};
    return z;
  }
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const auto params = parse_params(spec, colon == std::string::npos ? "" : spec.substr(colon + 1));

  if (kind == "trivial") {
    reject_unknown(params, {}, spec);
    return finish(poset_chain(0), [](MorId) { return true; }, {0}, 0, options, spec);
  }
  if (kind == "poset01") {
    reject_unknown(params, {}, spec);
    return finish(poset_chain(1), [](MorId) { return true; }, {0, 1}, 1, options, spec);
  }
  if (kind == "vect") {
    reject_unknown(params, {"q", "N"}, spec);
    const int q = int_param(params, "q", spec, 2);
    const int n = int_param(params, "N", spec);
    if (!is_prime(q)) throw Error(ErrorKind::UsageError, "q=" + std::to_string(q) + " is not a prime");
    double count = 0;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) count += std::pow(static_cast<double>(q), a * b);
    check_count(count, options.morphism_limit, spec);
    auto comp = std::make_shared<const VectComposer>(q, n);
    const CatPtr c = coded_category(comp, vect_names(q, n));
    std::vector<long> size;
    for (int d = 0; d <= n; ++d) size.push_back(d);
    return finish(c, [&](MorId m) { return comp->rank(m) == c->src(m); }, std::move(size), n, options, spec);
  }
  if (kind == "pointed_sets" || kind == "pointed_subsets") {
    reject_unknown(params, {"N"}, spec);
    const int n = int_param(params, "N", spec);
    std::vector<int> cards;
    std::vector<std::string> names;
    if (kind == "pointed_sets") {
      for (int k = 0; k <= n; ++k) {
        cards.push_back(k);
        names.push_back("<" + std::to_string(k) + ">");
      }
    } else {
      if (n > 6) throw Error(ErrorKind::ParamTooLarge, spec + ": N > 6");
      // Subsets ordered by size, then lexicographically.
      std::vector<std::vector<int>> subsets;
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) s.push_back(i + 1);
        subsets.push_back(s);
      }
      std::stable_sort(subsets.begin(), subsets.end(),
                       [](const auto& x, const auto& y) { return x.size() < y.size() || (x.size() == y.size() && x < y); });
      for (const auto& s : subsets) {
        cards.push_back(static_cast<int>(s.size()));
        std::string name = "{";
        for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + std::to_string(s[i]);
        names.push_back(name + "}");
      }
    }
    double count = 0;
    for (int a : cards)
      for (int b : cards) count += std::pow(static_cast<double>(b + 1), a);
    check_count(count, options.morphism_limit, spec);
    auto comp = std::make_shared<const PointedComposer>(cards);
    const CatPtr c = coded_category(comp, std::move(names));
    std::vector<long> size(cards.begin(), cards.end());
    return finish(c, [&](MorId m) { return comp->injective(m); }, std::move(size), n, options, spec);
  }
  throw Error(ErrorKind::UnknownZoo, "unknown zoo entry '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Category files

namespace {

const std::set<std::string> kSections = {"OBJECTS", "MORPHISMS", "ID", "COMPOSE", "COF", "W", "SIZE", "BUDGET"};

struct Located {
  std::string name;
  int line = 0;
};

[[noreturn]] void syntax(const std::string& origin, int line, const std::string& msg) {
  throw Error(ErrorKind::SyntaxError, origin + ":" + std::to_string(line) + ": " + msg);
}

[[noreturn]] void unresolved(const std::string& origin, int line, const std::string& what, const std::string& name) {
  throw Error(ErrorKind::UnresolvedReference, origin + ":" + std::to_string(line) + ": unknown " + what + " '" + name + "'");
}

long parse_count(const std::string& origin, int line, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (const std::logic_error&) {
  }
  syntax(origin, line, "expected a non-negative integer, got '" + text + "'");
}

}  // namespace

CategoryFile parse_category(std::istream& in, const std::string& origin) {
  struct MorLine {
    std::string name, src, tgt;
    int line;
  };
  struct CompLine {
    std::string g, f, h;
    int line;
  };
  std::vector<Located> objects;
  std::vector<MorLine> morphisms;
  std::vector<std::pair<Located, Located>> ids;   // object, morphism
  std::vector<CompLine> composites;
  std::vector<Located> cof;
  std::optional<std::vector<Located>> w;
  std::optional<std::vector<std::pair<Located, long>>> sizes;
  std::optional<long> budget;
  std::set<std::string> seen_sections;

  std::string section;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (kSections.count(tok[0])) {
      section = tok[0];
      if (!seen_sections.insert(section).second) syntax(origin, line_no, "section " + section + " repeated");
      if (section == "W") w.emplace();
      if (section == "SIZE") sizes.emplace();
      tok.erase(tok.begin());
      if (tok.empty()) continue;
    }
    if (section.empty()) syntax(origin, line_no, "content before the first section");
    if (section == "OBJECTS") {
      for (const auto& t : tok) objects.push_back({t, line_no});
    } else if (section == "MORPHISMS") {
      // name : src -> tgt (the colon may be attached to the name)
      if (tok.size() == 4 && tok[0].size() > 1 && tok[0].back() == ':') {
        tok[0].pop_back();
        tok.insert(tok.begin() + 1, ":");
      }
      if (tok.size() != 5 || tok[1] != ":" || tok[3] != "->") syntax(origin, line_no, "expected 'name : src -> tgt'");
      morphisms.push_back({tok[0], tok[2], tok[4], line_no});
    } else if (section == "ID") {
      if (tok.size() != 3 || tok[1] != "=") syntax(origin, line_no, "expected 'object = morphism'");
      ids.push_back({{tok[0], line_no}, {tok[2], line_no}});
    } else if (section == "COMPOSE") {
      if (tok.size() != 5 || tok[1] != "o" || tok[3] != "=") syntax(origin, line_no, "expected 'g o f = h'");
      composites.push_back({tok[0], tok[2], tok[4], line_no});
    } else if (section == "COF") {
      for (const auto& t : tok) cof.push_back({t, line_no});
    } else if (section == "W") {
      for (const auto& t : tok) w->push_back({t, line_no});
    } else if (section == "SIZE") {
      if (tok.size() != 3 || tok[1] != "=") syntax(origin, line_no, "expected 'object = size'");
      sizes->push_back({{tok[0], line_no}, parse_count(origin, line_no, tok[2])});
    } else if (section == "BUDGET") {
      if (tok.size() != 1 || budget) syntax(origin, line_no, "expected a single budget value");
      budget = parse_count(origin, line_no, tok[0]);
    }
  }
  if (objects.empty()) syntax(origin, line_no, "no objects declared");

  CategoryFile out;
  std::map<std::string, ObjId> obj_index;
  for (const auto& o : objects) {
    if (!obj_index.emplace(o.name, static_cast<ObjId>(out.raw.objects.size())).second) {
      syntax(origin, o.line, "object '" + o.name + "' declared twice");
    }
    out.raw.objects.push_back(o.name);
  }
  auto object = [&](const std::string& name, int line) {
    auto it = obj_index.find(name);
    if (it == obj_index.end()) unresolved(origin, line, "object", name);
    return it->second;
  };
  std::map<std::string, MorId> mor_index;
  for (const auto& m : morphisms) {
    const ObjId s = object(m.src, m.line);
    const ObjId t = object(m.tgt, m.line);
    if (!mor_index.emplace(m.name, static_cast<MorId>(out.raw.morphisms.size())).second) {
      syntax(origin, m.line, "morphism '" + m.name + "' declared twice");
    }
    out.raw.morphisms.push_back({m.name, s, t});
  }
  auto morphism = [&](const std::string& name, int line) {
    auto it = mor_index.find(name);
    if (it == mor_index.end()) unresolved(origin, line, "morphism", name);
    return it->second;
  };
  std::vector<MorId> identity(out.raw.objects.size(), kNone);
  for (const auto& [o, m] : ids) {
    const ObjId x = object(o.name, o.line);
    const MorId i = morphism(m.name, m.line);
    if (identity[idx(x)] != kNone) syntax(origin, o.line, "identity of '" + o.name + "' assigned twice");
    const auto& mor = out.raw.morphisms[idx(i)];
    if (mor.src != x || mor.tgt != x) syntax(origin, m.line, "'" + m.name + "' is not an endomorphism of '" + o.name + "'");
    identity[idx(x)] = i;
  }
  for (std::size_t x = 0; x < out.raw.objects.size(); ++x) {
    if (identity[x] != kNone) continue;
    const std::string name = "id_" + out.raw.objects[x];
    if (auto it = mor_index.find(name); it != mor_index.end()) {
      const auto& mor = out.raw.morphisms[idx(it->second)];
      if (mor.src != static_cast<ObjId>(x) || mor.tgt != static_cast<ObjId>(x)) {
        syntax(origin, 0, "'" + name + "' is not an endomorphism of '" + out.raw.objects[x] + "'");
      }
      identity[x] = it->second;
      continue;
    }
    identity[x] = static_cast<MorId>(out.raw.morphisms.size());
    mor_index.emplace(name, identity[x]);
    out.raw.morphisms.push_back({name, static_cast<ObjId>(x), static_cast<ObjId>(x)});
  }
  out.raw.identity = identity;
  for (const auto& c : composites) {
    out.raw.composites.push_back({morphism(c.g, c.line), morphism(c.f, c.line), morphism(c.h, c.line)});
  }
  for (const auto& c : cof) {
    morphism(c.name, c.line);
    out.cof.push_back(c.name);
  }
  if (w) {
    out.w.emplace();
    for (const auto& c : *w) {
      morphism(c.name, c.line);
      out.w->push_back(c.name);
    }
  }
  if (sizes) {
    std::vector<long> s(out.raw.objects.size(), -1);
    for (const auto& [o, v] : *sizes) {
      const ObjId x = object(o.name, o.line);
      if (s[idx(x)] >= 0) syntax(origin, o.line, "size of '" + o.name + "' assigned twice");
      s[idx(x)] = v;
    }
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (s[x] < 0) syntax(origin, line_no, "no size for object '" + out.raw.objects[x] + "'");
    }
    out.size = std::move(s);
  }
  out.budget = budget;
  return out;
}

CategoryFile parse_category_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot read " + path);
  return parse_category(in, path);
}

ZooContext load_category(const CategoryFile& file, const std::string& name, const ZooOptions& options) {
  const auto c = std::make_shared<const FinCat>(with_block_tables(validate_fincat(file.raw)));
  auto flags = [&](const std::vector<std::string>& names) {
    MorSet s(c->num_morphisms(), 0);
    for (ObjId x = 0; x < static_cast<ObjId>(c->num_objects()); ++x) s[idx(c->id(x))] = 1;
    for (const auto& n : names) s[idx(*c->find_morphism(n))] = 1;
    return s;
  };
  PairCat pair = validate_pair(c, flags(file.cof));
  std::vector<long> size = file.size.value_or(std::vector<long>(c->num_objects(), 0));
  const long budget = options.budget.value_or(file.budget.value_or(*std::max_element(size.begin(), size.end())));
  ZooContext z;
  z.ctx = validate_waldhausen(pair, std::move(size), budget, options.wald, name);
  if (file.w) z.w = flags(*file.w);
  return z;
}

std::string write_category(const SizedWaldContext& ctx, const MorSet* w) {
  const FinCat& c = ctx.cat();
  const auto n_obj = static_cast<ObjId>(c.num_objects());
  const auto n_mor = static_cast<MorId>(c.num_morphisms());
  auto name = [&](MorId m) {
    if (c.is_identity(m)) return "id_" + c.object_name(c.src(m));
    if (c.has_morphism_names()) {
      const std::string& s = c.morphism_name(m);
      if (s.rfind("id_", 0) != 0) return s;
    }
    return "m" + std::to_string(m);
  };
  std::ostringstream out;
  out << "# " << ctx.name << "\nOBJECTS\n";
  for (ObjId x = 0; x < n_obj; ++x) out << c.object_name(x) << "\n";
  out << "MORPHISMS\n";
  for (MorId m = 0; m < n_mor; ++m) {
    if (c.is_identity(m)) continue;
    out << name(m) << " : " << c.object_name(c.src(m)) << " -> " << c.object_name(c.tgt(m)) << "\n";
  }
  out << "COMPOSE\n";
  for (MorId f = 0; f < n_mor; ++f) {
    if (c.is_identity(f)) continue;
    for (MorId g : c.out(c.tgt(f))) {
      if (c.is_identity(g)) continue;
      out << name(g) << " o " << name(f) << " = " << name(c.compose_unchecked(g, f)) << "\n";
    }
  }
  out << "COF\n";
  for (MorId m = 0; m < n_mor; ++m)
    if (ctx.is_cof(m) && !c.is_identity(m)) out << name(m) << "\n";
  if (w) {
    out << "W\n";
    for (MorId m = 0; m < n_mor; ++m)
      if ((*w)[idx(m)] && !c.is_identity(m)) out << name(m) << "\n";
  }
  out << "SIZE\n";
  for (ObjId x = 0; x < n_obj; ++x) out << c.object_name(x) << " = " << ctx.size_of(x) << "\n";
  out << "BUDGET\n" << ctx.budget << "\n";
  return out.str();
}

}  // namespace waldkit
