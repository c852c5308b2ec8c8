#include "waldkit/intmat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace waldkit {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows[0].size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
  IntMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
    }
  }
  return out;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

IntVec IntMatrix::row(std::size_t r) const {
  return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVec IntMatrix::col(std::size_t c) const {
  IntVec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntVec IntMatrix::apply(const IntVec& v) const {
  IntVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (v[j] != 0) out[i] += (*this)(i, j) * v[j];
    }
  }
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

Int determinant(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const Int d = determinant(m);
  return d == 1 || d == -1;
}

// ---------------------------------------------------------------------------

SNFResult smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < rows; ++c) std::swap(u(i, c), u(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < cols; ++r) std::swap(v(r, i), v(r, j));
  };
  // row_i -= q row_t
  auto sub_row = [&](std::size_t i, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < cols; ++c) a(i, c) -= q * a(t, c);
    for (std::size_t c = 0; c < rows; ++c) u(i, c) -= q * u(t, c);
  };
  auto sub_col = [&](std::size_t j, std::size_t t, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < rows; ++r) a(r, j) -= q * a(r, t);
    for (std::size_t r = 0; r < cols; ++r) v(r, j) -= q * v(r, t);
  };

  const std::size_t steps = std::min(rows, cols);
  Int q;
  for (std::size_t t = 0; t < steps; ++t) {
    bool done = false;
    while (!done) {
      // smallest nonzero |entry| in the lower-right block
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j) == 0) continue;
          if (pi == rows || mpz_cmpabs(a(i, j).get_mpz_t(), a(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) {
        t = steps;  // remaining block is zero
        break;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        sub_row(i, t, q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        sub_col(j, t, q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            // row_t += row_i brings the offending entry into row t
            sub_row(t, i, Int(-1));
            divides = false;
            break;
          }
        }
      }
      if (!divides) continue;
      if (a(t, t) < 0) {
        for (std::size_t c = 0; c < cols; ++c) a(t, c) = -a(t, c);
        for (std::size_t c = 0; c < rows; ++c) u(t, c) = -u(t, c);
      }
      done = true;
    }
  }
  SNFResult res{u, a, v, {}};
  for (std::size_t i = 0; i < steps; ++i) {
    if (a(i, i) != 0) res.factors.push_back(a(i, i));
  }
  return res;
}

IntMatrix kernel_basis(const IntMatrix& m) {
  const SNFResult snf = smith_normal_form(m);
  const std::size_t r = snf.rank();
  IntMatrix k(m.cols(), m.cols() - r);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = r; j < m.cols(); ++j) k(i, j - r) = snf.V(i, j);
  }
  return k;
}

// ---------------------------------------------------------------------------

std::string AbGroup::to_string() const {
  if (trivial()) return "0";
  std::ostringstream out;
  bool first = true;
  if (rank > 0) {
    out << 'Z';
    if (rank > 1) out << '^' << rank;
    first = false;
  }
  for (const Int& t : torsion) {
    if (!first) out << " + ";
    out << "Z/" << t.get_str();
    first = false;
  }
  return out.str();
}

AbGroup group_from_factors(std::size_t generators, const std::vector<Int>& factors) {
  AbGroup g;
  g.rank = generators - factors.size();
  for (const Int& f : factors) {
    if (f != 1) g.torsion.push_back(f);
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t leading(const IntVec& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return i;
  }
  return v.size();
}

}  // namespace

void Lattice::normalize(std::size_t k) {
  IntVec& b = basis_[k];
  const std::size_t p = pivot_[k];
  if (b[p] < 0) {
    for (Int& x : b) x = -x;
  }
  Int q;
  // rows below are already normalized
  for (std::size_t j = k + 1; j < basis_.size(); ++j) {
    const std::size_t pj = pivot_[j];
    mpz_fdiv_q(q.get_mpz_t(), b[pj].get_mpz_t(), basis_[j][pj].get_mpz_t());
    if (q == 0) continue;
    for (std::size_t c = pj; c < n_; ++c) b[c] -= q * basis_[j][c];
  }
}

void Lattice::insert(IntVec v) {
  if (v.size() != n_) throw std::invalid_argument("lattice vector of the wrong length");
  std::size_t lead = leading(v);
  std::vector<std::size_t> changed;
  Int g, s, t, q;
  for (std::size_t k = 0; k < basis_.size() && lead < n_; ++k) {
    const std::size_t p = pivot_[k];
    if (lead > p) continue;
    if (lead < p) {
      basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(k), std::move(v));
      pivot_.insert(pivot_.begin() + static_cast<std::ptrdiff_t>(k), lead);
      changed.push_back(k);
      lead = n_;
      break;
    }
    IntVec& b = basis_[k];
    if (mpz_divisible_p(v[p].get_mpz_t(), b[p].get_mpz_t())) {
      mpz_divexact(q.get_mpz_t(), v[p].get_mpz_t(), b[p].get_mpz_t());
      for (std::size_t c = p; c < n_; ++c) v[c] -= q * b[c];
    } else {
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b[p].get_mpz_t(), v[p].get_mpz_t());
      const Int bp = b[p] / g;
      const Int vp = v[p] / g;
      for (std::size_t c = p; c < n_; ++c) {
        Int nb = s * b[c] + t * v[c];
        v[c] = bp * v[c] - vp * b[c];
        b[c] = std::move(nb);
      }
      changed.push_back(k);
    }
    lead = leading(v);
  }
  if (lead < n_) {
    basis_.push_back(std::move(v));
    pivot_.push_back(lead);
    changed.push_back(basis_.size() - 1);
  }
  if (changed.empty()) return;
  // full re-normalization, bottom row first
  for (std::size_t k = basis_.size(); k-- > 0;) normalize(k);
}

void Lattice::insert_small(const std::vector<long>& v) {
  IntVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i];
  insert(std::move(w));
}

IntVec Lattice::reduce(IntVec v) const {
  Int q;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const std::size_t p = pivot_[k];
    mpz_fdiv_q(q.get_mpz_t(), v[p].get_mpz_t(), basis_[k][p].get_mpz_t());
    if (q == 0) continue;
    for (std::size_t c = p; c < n_; ++c) v[c] -= q * basis_[k][c];
  }
  return v;
}

bool Lattice::contains(const IntVec& v) const {
  const IntVec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
}

bool Lattice::is_everything() const {
  if (basis_.size() != n_) return false;
  for (std::size_t k = 0; k < n_; ++k) {
    if (basis_[k][pivot_[k]] != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

QuotientGroup::QuotientGroup(const Lattice& relations)
    : n_(relations.ambient()), relations_(relations) {
  const auto& basis = relations.basis();
  const std::size_t r = basis.size();
  IntMatrix b(r, n_);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n_; ++j) b(i, j) = basis[i][j];
  }
  const SNFResult snf = smith_normal_form(b);
  group_ = group_from_factors(n_, snf.factors);
  // coordinates w = V^T v
  for (std::size_t i = 0; i < r; ++i) {
    if (snf.factors[i] == 1) continue;
    std::vector<Int> row(n_);
    for (std::size_t k = 0; k < n_; ++k) row[k] = snf.V(k, i);
    tors_.push_back(std::move(row));
  }
  Lattice free(n_);
  for (std::size_t i = r; i < n_; ++i) free.insert(snf.V.col(i));
  free_map_ = IntMatrix(free.rank(), n_);
  for (std::size_t i = 0; i < free.rank(); ++i) {
    for (std::size_t k = 0; k < n_; ++k) free_map_(i, k) = free.basis()[i][k];
  }
}

IntVec QuotientGroup::coords(const IntVec& v) const {
  IntVec out = free_map_.apply(v);
  for (std::size_t t = 0; t < tors_.size(); ++t) {
    Int x = 0;
    for (std::size_t k = 0; k < n_; ++k) x += tors_[t][k] * v[k];
    const Int& d = group_.torsion[t];
    Int rem;
    mpz_fdiv_r(rem.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
    out.push_back(rem);
  }
  return out;
}

IntVec QuotientGroup::generator_image(std::size_t i) const {
  IntVec e(n_);
  e[i] = 1;
  return coords(e);
}

std::string QuotientGroup::format_coords(const IntVec& c) const {
  std::ostringstream out;
  const std::size_t free = group_.rank;
  if (c.size() == 1 && free == 1) return c[0].get_str();
  out << '(';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out << ", ";
    out << c[i].get_str();
    if (i >= free) out << " mod " << group_.torsion[i - free].get_str();
  }
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

// Solutions x of M x in L (generators of that lattice).
std::vector<IntVec> preimage_of_lattice(const IntMatrix& m, const Lattice& l) {
  const std::size_t n1 = m.cols();
  const std::size_t n2 = m.rows();
  const std::size_t r2 = l.rank();
  IntMatrix a(n2, n1 + r2);
  for (std::size_t i = 0; i < n2; ++i) {
    for (std::size_t j = 0; j < n1; ++j) a(i, j) = m(i, j);
    for (std::size_t j = 0; j < r2; ++j) a(i, n1 + j) = -l.basis()[j][i];
  }
  const IntMatrix k = kernel_basis(a);
  std::vector<IntVec> out;
  for (std::size_t c = 0; c < k.cols(); ++c) {
    IntVec x(n1);
    for (std::size_t i = 0; i < n1; ++i) x[i] = k(i, c);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

long first_unpreserved_relation(const GroupHom& f) {
  const auto& basis = f.source->basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!f.target->contains(f.matrix.apply(basis[i]))) return static_cast<long>(i);
  }
  return -1;
}

bool is_surjective(const GroupHom& f) {
  Lattice sum = *f.target;
  for (std::size_t c = 0; c < f.matrix.cols(); ++c) sum.insert(f.matrix.col(c));
  return sum.is_everything();
}

bool is_injective(const GroupHom& f) {
  for (const IntVec& x : preimage_of_lattice(f.matrix, *f.target)) {
    if (!f.source->contains(x)) return false;
  }
  return true;
}

bool is_isomorphism(const GroupHom& f) {
  return first_unpreserved_relation(f) < 0 && is_injective(f) && is_surjective(f);
}

bool is_exact_at_middle(const GroupHom& f, const GroupHom& g) {
  // g o f = 0
  for (std::size_t c = 0; c < f.matrix.cols(); ++c) {
    if (!g.target->contains(g.matrix.apply(f.matrix.col(c)))) return false;
  }
  Lattice image = *f.target;
  for (std::size_t c = 0; c < f.matrix.cols(); ++c) image.insert(f.matrix.col(c));
  for (const IntVec& x : preimage_of_lattice(g.matrix, *g.target)) {
    if (!image.contains(x)) return false;
  }
  return true;
}

AbGroup kernel_group(const GroupHom& f) {
  // K = preimage of the target relations; kernel = K / L1.
  Lattice k(f.matrix.cols());
  for (IntVec& x : preimage_of_lattice(f.matrix, *f.target)) k.insert(std::move(x));
  // express L1 in the basis of K (echelon, so back-substitution is exact)
  const std::size_t r = k.rank();
  Lattice rel(r);
  for (const IntVec& b : f.source->basis()) {
    IntVec v = b;
    IntVec coeff(r);
    for (std::size_t j = 0; j < r; ++j) {
      const IntVec& kb = k.basis()[j];
      std::size_t p = 0;
      while (kb[p] == 0) ++p;
      coeff[j] = v[p] / kb[p];
      for (std::size_t c = p; c < v.size(); ++c) v[c] -= coeff[j] * kb[c];
    }
    rel.insert(std::move(coeff));
  }
  return QuotientGroup(rel).group();
}

AbGroup cokernel_group(const GroupHom& f) {
  Lattice sum = *f.target;
  for (std::size_t c = 0; c < f.matrix.cols(); ++c) sum.insert(f.matrix.col(c));
  return QuotientGroup(sum).group();
}

}  // namespace waldkit
