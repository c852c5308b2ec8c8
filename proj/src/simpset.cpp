#include "waldkit/simpset.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "waldkit/diagram.hpp"

namespace waldkit {

std::size_t TruncSSet::nondegenerate(int n) const {
  const auto& flags = degenerate[static_cast<std::size_t>(n)];
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 0));
}

namespace {

using FaceFn = std::function<std::int32_t(int n, int i, std::int32_t s)>;

[[noreturn]] void violated(const std::string& label, const std::string& identity, int n,
                           std::int32_t s) {
  throw Error(ErrorKind::SimplicialIdentityViolated,
              label + identity + " fails on simplex " + std::to_string(s) + " of degree " + std::to_string(n));
}

// Simplicial identities for a truncated simplicial object given by
// accessors; `label` prefixes error messages.
void check_identities(int dim, const std::function<std::size_t(int)>& count, const FaceFn& face,
                      const FaceFn& degen, const std::string& label) {
  for (int n = 2; n <= dim; ++n) {
    for (std::int32_t s = 0; s < static_cast<std::int32_t>(count(n)); ++s) {
      for (int j = 1; j <= n; ++j) {
        for (int i = 0; i < j; ++i) {
          if (face(n - 1, i, face(n, j, s)) != face(n - 1, j - 1, face(n, i, s))) {
            violated(label, "d" + std::to_string(i) + "d" + std::to_string(j) + " = d" +
                                std::to_string(j - 1) + "d" + std::to_string(i),
                     n, s);
          }
        }
      }
    }
  }
  for (int n = 0; n < dim; ++n) {
    for (std::int32_t s = 0; s < static_cast<std::int32_t>(count(n)); ++s) {
      for (int j = 0; j <= n; ++j) {
        const std::int32_t t = degen(n, j, s);
        if (face(n + 1, j, t) != s || face(n + 1, j + 1, t) != s) {
          violated(label, "d" + std::to_string(j) + "s" + std::to_string(j) + " = id", n, s);
        }
        for (int i = 0; i < j && n >= 1; ++i) {
          if (face(n + 1, i, t) != degen(n - 1, j - 1, face(n, i, s))) {
            violated(label, "d" + std::to_string(i) + "s" + std::to_string(j) + " = s" +
                                std::to_string(j - 1) + "d" + std::to_string(i),
                     n, s);
          }
        }
        for (int i = j + 2; i <= n + 1 && n >= 1; ++i) {
          if (face(n + 1, i, t) != degen(n - 1, j, face(n, i - 1, s))) {
            violated(label, "d" + std::to_string(i) + "s" + std::to_string(j) + " = s" +
                                std::to_string(j) + "d" + std::to_string(i - 1),
                     n, s);
          }
        }
        if (n + 2 > dim) continue;
        for (int i = 0; i <= j; ++i) {
          if (degen(n + 1, i, t) != degen(n + 1, j + 1, degen(n, i, s))) {
            violated(label, "s" + std::to_string(i) + "s" + std::to_string(j) + " = s" +
                                std::to_string(j + 1) + "s" + std::to_string(i),
                     n, s);
          }
        }
      }
    }
  }
}

std::vector<std::vector<char>> degenerate_flags(int dim, const std::vector<std::size_t>& count,
                                                const std::vector<std::vector<Table>>& degen) {
  std::vector<std::vector<char>> flags(static_cast<std::size_t>(dim) + 1);
  for (int n = 0; n <= dim; ++n) flags[static_cast<std::size_t>(n)].assign(count[static_cast<std::size_t>(n)], 0);
  for (int n = 0; n < dim; ++n) {
    for (const Table& t : degen[static_cast<std::size_t>(n)]) {
      for (std::int32_t img : t) flags[static_cast<std::size_t>(n) + 1][static_cast<std::size_t>(img)] = 1;
    }
  }
  return flags;
}

}  // namespace

void validate_simplicial(const TruncSSet& x) {
  auto count = [&](int n) { return x.count[static_cast<std::size_t>(n)]; };
  FaceFn face = [&](int n, int i, std::int32_t s) {
    return x.face[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
  };
  FaceFn degen = [&](int n, int j, std::int32_t s) {
    return x.degen[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
  };
  check_identities(x.dim, count, face, degen, "");
  if (degenerate_flags(x.dim, x.count, x.degen) != x.degenerate) {
    throw Error(ErrorKind::SimplicialIdentityViolated, "degenerate flags differ from the images of the degeneracies");
  }
}

TruncSSet nerve(const FinCat& c, int dim, std::size_t limit, std::vector<InternTable>* chains_out) {
  TruncSSet x;
  x.dim = dim;
  x.count.resize(static_cast<std::size_t>(dim) + 1);
  x.face.resize(static_cast<std::size_t>(dim) + 1);
  x.degen.resize(static_cast<std::size_t>(dim) + 1);
  std::vector<InternTable> chains;
  chains.emplace_back(1);
  for (ObjId o = 0; o < static_cast<ObjId>(c.num_objects()); ++o) chains[0].insert(std::vector<std::int32_t>{o});
  x.count[0] = c.num_objects();
  std::size_t total = x.count[0];
  for (int n = 1; n <= dim; ++n) {
    InternTable next(static_cast<std::size_t>(n));
    std::vector<std::int32_t> row(static_cast<std::size_t>(n));
    if (n == 1) {
      for (MorId m = 0; m < static_cast<MorId>(c.num_morphisms()); ++m) next.insert(std::vector<std::int32_t>{m});
    } else {
      const InternTable& prev = chains.back();
      for (std::size_t s = 0; s < prev.size(); ++s) {
        auto p = prev.row(static_cast<std::int32_t>(s));
        std::copy(p.begin(), p.end(), row.begin());
        for (MorId g : c.out(c.tgt(p.back()))) {
          row.back() = g;
          next.insert(row);
          if (total + next.size() > limit) {
            throw Error(ErrorKind::EnumerationLimitExceeded,
                        "nerve exceeds " + std::to_string(limit) + " simplices");
          }
        }
      }
    }
    total += next.size();
    x.count[static_cast<std::size_t>(n)] = next.size();
    chains.push_back(std::move(next));
  }
  // faces
  for (int n = 1; n <= dim; ++n) {
    const InternTable& cur = chains[static_cast<std::size_t>(n)];
    auto& faces = x.face[static_cast<std::size_t>(n)];
    faces.assign(static_cast<std::size_t>(n) + 1, Table(cur.size()));
    std::vector<std::int32_t> row(static_cast<std::size_t>(n - 1));
    for (std::size_t s = 0; s < cur.size(); ++s) {
      auto ch = cur.row(static_cast<std::int32_t>(s));
      if (n == 1) {
        faces[0][s] = c.tgt(ch[0]);
        faces[1][s] = c.src(ch[0]);
        continue;
      }
      const InternTable& lower = chains[static_cast<std::size_t>(n) - 1];
      for (int i = 0; i <= n; ++i) {
        std::size_t w = 0;
        for (int k = 0; k < n; ++k) {
          if (i == 0 && k == 0) continue;
          if (i == n && k == n - 1) continue;
          if (i > 0 && i < n && k == i) continue;  // merged into k - 1
          if (i > 0 && i < n && k == i - 1) {
            row[w++] = c.compose_unchecked(ch[static_cast<std::size_t>(i)], ch[static_cast<std::size_t>(i - 1)]);
          } else {
            row[w++] = ch[static_cast<std::size_t>(k)];
          }
        }
        faces[static_cast<std::size_t>(i)][s] = lower.find(row);
      }
    }
  }
  // degeneracies
  for (int n = 0; n < dim; ++n) {
    const InternTable& cur = chains[static_cast<std::size_t>(n)];
    const InternTable& upper = chains[static_cast<std::size_t>(n) + 1];
    auto& degs = x.degen[static_cast<std::size_t>(n)];
    degs.assign(static_cast<std::size_t>(n) + 1, Table(cur.size()));
    std::vector<std::int32_t> row(static_cast<std::size_t>(n) + 1);
    for (std::size_t s = 0; s < cur.size(); ++s) {
      auto ch = cur.row(static_cast<std::int32_t>(s));
      for (int j = 0; j <= n; ++j) {
        if (n == 0) {
          row[0] = c.id(ch[0]);
        } else {
          const ObjId vj = j == 0 ? c.src(ch[0]) : c.tgt(ch[static_cast<std::size_t>(j - 1)]);
          std::size_t w = 0;
          for (int k = 0; k < n; ++k) {
            if (k == j) row[w++] = c.id(vj);
            row[w++] = ch[static_cast<std::size_t>(k)];
          }
          if (j == n) row[w++] = c.id(vj);
        }
        degs[static_cast<std::size_t>(j)][s] = upper.find(row);
      }
    }
  }
  x.degenerate = degenerate_flags(dim, x.count, x.degen);
  if (chains_out) *chains_out = std::move(chains);
  return x;
}

// ---------------------------------------------------------------------------

void BisimpSet::resize(int m, int k) {
  M = m;
  K = k;
  const auto rm = static_cast<std::size_t>(m) + 1;
  const auto rk = static_cast<std::size_t>(k) + 1;
  count.assign(rm, std::vector<std::size_t>(rk, 0));
  hface.assign(rm, std::vector<std::vector<Table>>(rk));
  hdegen.assign(rm, std::vector<std::vector<Table>>(rk));
  vface.assign(rm, std::vector<std::vector<Table>>(rk));
  vdegen.assign(rm, std::vector<std::vector<Table>>(rk));
}

void validate_bisimplicial(const BisimpSet& b) {
  auto at = [](const std::vector<std::vector<std::vector<Table>>>& t, int m, int k, int i, std::int32_t s) {
    return t[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]
            [static_cast<std::size_t>(s)];
  };
  for (int m = 0; m <= b.M; ++m) {
    check_identities(
        b.K, [&](int k) { return b.count[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]; },
        [&](int k, int i, std::int32_t s) { return at(b.vface, m, k, i, s); },
        [&](int k, int j, std::int32_t s) { return at(b.vdegen, m, k, j, s); },
        "vertical (row " + std::to_string(m) + "): ");
  }
  for (int k = 0; k <= b.K; ++k) {
    check_identities(
        b.M, [&](int m) { return b.count[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]; },
        [&](int m, int i, std::int32_t s) { return at(b.hface, m, k, i, s); },
        [&](int m, int j, std::int32_t s) { return at(b.hdegen, m, k, j, s); },
        "horizontal (column " + std::to_string(k) + "): ");
  }
  auto fail = [](const std::string& what, int m, int k, std::int32_t s) {
    throw Error(ErrorKind::SimplicialIdentityViolated,
                what + " do not commute on simplex " + std::to_string(s) + " of X_{" + std::to_string(m) +
                    "," + std::to_string(k) + "}");
  };
  for (int m = 0; m <= b.M; ++m) {
    for (int k = 0; k <= b.K; ++k) {
      const auto n = static_cast<std::int32_t>(b.count[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]);
      for (std::int32_t s = 0; s < n; ++s) {
        for (int i = 0; m >= 1 && i <= m; ++i) {
          for (int j = 0; k >= 1 && j <= k; ++j) {
            if (at(b.hface, m, k - 1, i, at(b.vface, m, k, j, s)) != at(b.vface, m - 1, k, j, at(b.hface, m, k, i, s))) {
              fail("horizontal and vertical faces", m, k, s);
            }
          }
          for (int j = 0; k < b.K && j <= k; ++j) {
            if (at(b.hface, m, k + 1, i, at(b.vdegen, m, k, j, s)) != at(b.vdegen, m - 1, k, j, at(b.hface, m, k, i, s))) {
              fail("horizontal faces and vertical degeneracies", m, k, s);
            }
          }
        }
        for (int i = 0; m < b.M && i <= m; ++i) {
          for (int j = 0; k >= 1 && j <= k; ++j) {
            if (at(b.vface, m + 1, k, j, at(b.hdegen, m, k, i, s)) != at(b.hdegen, m, k - 1, i, at(b.vface, m, k, j, s))) {
              fail("horizontal degeneracies and vertical faces", m, k, s);
            }
          }
          for (int j = 0; k < b.K && j <= k; ++j) {
            if (at(b.vdegen, m + 1, k, j, at(b.hdegen, m, k, i, s)) != at(b.hdegen, m, k + 1, i, at(b.vdegen, m, k, j, s))) {
              fail("horizontal and vertical degeneracies", m, k, s);
            }
          }
        }
      }
    }
  }
}

TruncSSet diagonal(const BisimpSet& b) {
  if (b.M != b.K) throw Error(ErrorKind::TruncationTooLow, "diagonal needs equal truncations");
  TruncSSet x;
  x.dim = b.M;
  const auto d = static_cast<std::size_t>(b.M);
  x.count.resize(d + 1);
  x.face.resize(d + 1);
  x.degen.resize(d + 1);
  for (std::size_t n = 0; n <= d; ++n) x.count[n] = b.count[n][n];
  for (std::size_t n = 1; n <= d; ++n) {
    x.face[n].assign(n + 1, Table(x.count[n]));
    for (std::size_t i = 0; i <= n; ++i) {
      const Table& v = b.vface[n][n][i];
      const Table& h = b.hface[n][n - 1][i];
      for (std::size_t s = 0; s < x.count[n]; ++s) x.face[n][i][s] = h[static_cast<std::size_t>(v[s])];
    }
  }
  for (std::size_t n = 0; n < d; ++n) {
    x.degen[n].assign(n + 1, Table(x.count[n]));
    for (std::size_t j = 0; j <= n; ++j) {
      const Table& v = b.vdegen[n][n][j];
      const Table& h = b.hdegen[n][n + 1][j];
      for (std::size_t s = 0; s < x.count[n]; ++s) x.degen[n][j][s] = h[static_cast<std::size_t>(v[s])];
    }
  }
  x.degenerate = degenerate_flags(x.dim, x.count, x.degen);
  return x;
}

// ---------------------------------------------------------------------------

ChainComplex normalized_chains(const TruncSSet& x) {
  ChainComplex c;
  const auto d = static_cast<std::size_t>(x.dim);
  c.basis.resize(d + 1);
  c.index.resize(d + 1);
  c.boundary.resize(d + 1);
  for (std::size_t n = 0; n <= d; ++n) {
    c.index[n].assign(x.count[n], -1);
    for (std::size_t s = 0; s < x.count[n]; ++s) {
      if (x.degenerate[n][s]) continue;
      c.index[n][s] = static_cast<std::int32_t>(c.basis[n].size());
      c.basis[n].push_back(static_cast<std::int32_t>(s));
    }
  }
  for (std::size_t n = 1; n <= d; ++n) {
    for (std::int32_t s : c.basis[n]) {
      std::map<std::int32_t, int> col;
      for (std::size_t i = 0; i <= n; ++i) {
        const std::int32_t f = x.face[n][i][static_cast<std::size_t>(s)];
        const std::int32_t r = c.index[n - 1][static_cast<std::size_t>(f)];
        if (r < 0) continue;
        col[r] += (i % 2 == 0) ? 1 : -1;
      }
      std::vector<std::pair<std::int32_t, int>> entries;
      for (auto [r, v] : col) {
        if (v != 0) entries.emplace_back(r, v);
      }
      c.boundary[n].push_back(std::move(entries));
    }
  }
  return c;
}

bool boundary_squares_to_zero(const ChainComplex& c) {
  for (std::size_t n = 2; n < c.boundary.size(); ++n) {
    for (const auto& col : c.boundary[n]) {
      std::map<std::int32_t, long> acc;
      for (auto [r, v] : col) {
        for (auto [r2, v2] : c.boundary[n - 1][static_cast<std::size_t>(r)]) acc[r2] += static_cast<long>(v) * v2;
      }
      for (auto [r, v] : acc) {
        if (v != 0) return false;
      }
    }
  }
  return true;
}

namespace {

// Lattice spanned by the columns of a sparse boundary matrix with `rows` rows.
Lattice column_lattice(const std::vector<std::vector<std::pair<std::int32_t, int>>>& cols, std::size_t rows) {
  std::set<std::vector<std::pair<std::int32_t, int>>> distinct(cols.begin(), cols.end());
  Lattice l(rows);
  for (const auto& col : distinct) {
    if (col.empty()) continue;
    IntVec v(rows);
    for (auto [r, x] : col) v[static_cast<std::size_t>(r)] = x;
    l.insert(std::move(v));
  }
  return l;
}

}  // namespace

AbGroup homology(const TruncSSet& x, int n) {
  if (n < 0 || n + 1 > x.dim) {
    throw Error(ErrorKind::TruncationTooLow,
                "H_" + std::to_string(n) + " needs truncation " + std::to_string(n + 1) + ", have " +
                    std::to_string(x.dim));
  }
  const ChainComplex c = normalized_chains(x);
  const auto un = static_cast<std::size_t>(n);
  const std::size_t cn = c.basis[un].size();
  const std::size_t rank_out = n == 0 ? 0 : column_lattice(c.boundary[un], c.basis[un - 1].size()).rank();
  const Lattice image = column_lattice(c.boundary[un + 1], cn);
  AbGroup h;
  h.rank = cn - rank_out - image.rank();
  h.torsion = QuotientGroup(image).group().torsion;
  return h;
}

GroupPresentation pi1_presentation(const TruncSSet& x, std::int32_t basepoint) {
  if (x.dim < 2) throw Error(ErrorKind::TruncationTooLow, "fundamental group needs the 2-skeleton");
  const std::size_t nv = x.count[0];
  const std::size_t ne = x.count[1];
  std::vector<std::vector<std::int32_t>> adj(nv);
  for (std::size_t e = 0; e < ne; ++e) {
    if (x.degenerate[1][e]) continue;
    const auto a = static_cast<std::size_t>(x.face[1][1][e]);
    const auto b = static_cast<std::size_t>(x.face[1][0][e]);
    adj[a].push_back(static_cast<std::int32_t>(e));
    if (b != a) adj[b].push_back(static_cast<std::int32_t>(e));
  }
  std::vector<char> tree(ne, 0);
  std::vector<std::int32_t> component(nv, -1);
  auto bfs = [&](std::int32_t root, std::int32_t label, bool mark_tree) {
    std::deque<std::int32_t> queue{root};
    component[static_cast<std::size_t>(root)] = label;
    while (!queue.empty()) {
      const std::int32_t v = queue.front();
      queue.pop_front();
      for (std::int32_t e : adj[static_cast<std::size_t>(v)]) {
        const std::int32_t a = x.face[1][1][static_cast<std::size_t>(e)];
        const std::int32_t b = x.face[1][0][static_cast<std::size_t>(e)];
        const std::int32_t w = a == v ? b : a;
        if (component[static_cast<std::size_t>(w)] >= 0) continue;
        component[static_cast<std::size_t>(w)] = label;
        if (mark_tree) tree[static_cast<std::size_t>(e)] = 1;
        queue.push_back(w);
      }
    }
  };
  bfs(basepoint, 0, true);
  if (std::find(component.begin(), component.end(), -1) != component.end()) {
    std::int32_t label = 1;
    for (std::size_t v = 0; v < nv; ++v) {
      if (component[v] < 0) bfs(static_cast<std::int32_t>(v), label++, false);
    }
    std::ostringstream out;
    out << label << " components:";
    for (std::int32_t l = 0; l < label; ++l) {
      out << " {";
      bool first = true;
      for (std::size_t v = 0; v < nv; ++v) {
        if (component[v] != l) continue;
        out << (first ? "" : ",") << v;
        first = false;
      }
      out << '}';
    }
    throw Error(ErrorKind::Disconnected, out.str());
  }
  GroupPresentation p;
  p.edge_generator.assign(ne, -1);
  for (std::size_t e = 0; e < ne; ++e) {
    if (x.degenerate[1][e] || tree[e]) continue;
    p.edge_generator[e] = static_cast<std::int32_t>(p.generators++);
    p.names.push_back("e" + std::to_string(e));
  }
  std::vector<int> word;
  for (std::size_t s = 0; s < x.count[2]; ++s) {
    if (x.degenerate[2][s]) continue;
    word.clear();
    auto push = [&](std::int32_t edge, int sign) {
      const std::int32_t g = p.edge_generator[static_cast<std::size_t>(edge)];
      if (g < 0) return;
      const int letter = sign * (g + 1);
      if (!word.empty() && word.back() == -letter) {
        word.pop_back();
      } else {
        word.push_back(letter);
      }
    };
    push(x.face[2][2][s], 1);
    push(x.face[2][0][s], 1);
    push(x.face[2][1][s], -1);
    while (word.size() >= 2 && word.front() == -word.back()) {
      word.erase(word.begin());
      word.pop_back();
    }
    if (!word.empty()) p.relators.push_back(word);
  }
  return p;
}

Lattice abelianized_relations(const GroupPresentation& p) {
  std::set<std::vector<long>> distinct;
  for (const auto& r : p.relators) {
    std::vector<long> v(p.generators, 0);
    for (int letter : r) v[static_cast<std::size_t>(std::abs(letter) - 1)] += letter > 0 ? 1 : -1;
    if (std::any_of(v.begin(), v.end(), [](long x) { return x != 0; })) distinct.insert(std::move(v));
  }
  Lattice l(p.generators);
  for (const auto& v : distinct) l.insert_small(v);
  return l;
}

AbGroup abelianize(const GroupPresentation& p) {
  return QuotientGroup(abelianized_relations(p)).group();
}

}  // namespace waldkit
