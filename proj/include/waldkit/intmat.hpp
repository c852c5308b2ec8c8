#pragma once

// Exact integer linear algebra on GMP integers: Smith and Hermite normal
// forms, sublattices of Z^n, finitely generated abelian groups given by
// generators and relations, and homomorphisms between them.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace waldkit {

using Int = mpz_class;
using IntVec = std::vector<Int>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const;
  IntMatrix transposed() const;
  IntVec row(std::size_t r) const;
  IntVec col(std::size_t c) const;
  IntVec apply(const IntVec& v) const;  // M v
  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

Int determinant(const IntMatrix& m);  // Bareiss, square only
bool is_unimodular(const IntMatrix& m);

struct SNFResult {
  IntMatrix U;  // rows x rows
  IntMatrix D;  // rows x cols, diagonal
  IntMatrix V;  // cols x cols
  std::vector<Int> factors;  // nonzero diagonal entries, each dividing the next
  std::size_t rank() const { return factors.size(); }
};

// U M V = D with U, V unimodular. Pivots are chosen as the smallest nonzero
// absolute value with the lowest (row, column) index.
SNFResult smith_normal_form(const IntMatrix& m);

// Basis (as columns of the returned matrix) of {x : M x = 0}.
IntMatrix kernel_basis(const IntMatrix& m);

// Finitely generated abelian group: Z^rank + sum Z/t_i with t_i | t_{i+1}.
struct AbGroup {
  std::size_t rank = 0;
  std::vector<Int> torsion;

  bool trivial() const { return rank == 0 && torsion.empty(); }
  std::string to_string() const;
  bool operator==(const AbGroup&) const = default;
};

AbGroup group_from_factors(std::size_t generators, const std::vector<Int>& factors);

// Sublattice of Z^n kept as a row basis in Hermite normal form (positive
// pivots, entries above each pivot reduced into [0, pivot)).
class Lattice {
 public:
  explicit Lattice(std::size_t n = 0) : n_(n) {}

  std::size_t ambient() const { return n_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<IntVec>& basis() const { return basis_; }

  void insert(IntVec v);
  void insert_small(const std::vector<long>& v);
  // Remainder of v modulo the lattice (zero iff v is in the lattice).
  IntVec reduce(IntVec v) const;
  bool contains(const IntVec& v) const;
  bool is_everything() const;  // equals Z^n

 private:
  void normalize(std::size_t row);
  std::size_t n_;
  std::vector<IntVec> basis_;
  std::vector<std::size_t> pivot_;
};

// Z^n / L with explicit coordinates: free coordinates first (canonicalized
// by Hermite normal form of the free-coordinate map), then torsion
// coordinates reduced modulo their factor.
class QuotientGroup {
 public:
  explicit QuotientGroup(const Lattice& relations);

  const AbGroup& group() const { return group_; }
  std::size_t generators() const { return n_; }
  IntVec coords(const IntVec& v) const;
  IntVec generator_image(std::size_t i) const;
  std::string format_coords(const IntVec& c) const;
  const Lattice& relations() const { return relations_; }

 private:
  std::size_t n_;
  Lattice relations_;
  AbGroup group_;
  IntMatrix free_map_;                   // free x n
  std::vector<std::vector<Int>> tors_;   // per torsion coordinate: row of length n
};

// Homomorphism Z^n1/L1 -> Z^n2/L2 given on generators by the columns of
// `matrix` (n2 x n1).
struct GroupHom {
  const Lattice* source = nullptr;
  const Lattice* target = nullptr;
  IntMatrix matrix;
};

// Index of the first relation of the source not mapped into the target
// relations, or -1 when the map is well defined.
long first_unpreserved_relation(const GroupHom& f);
bool is_surjective(const GroupHom& f);
bool is_injective(const GroupHom& f);
bool is_isomorphism(const GroupHom& f);
// im(f) = ker(g) for A -f-> B -g-> C (both well defined, same middle group).
bool is_exact_at_middle(const GroupHom& f, const GroupHom& g);
// Kernel and cokernel as abstract groups.
AbGroup kernel_group(const GroupHom& f);
AbGroup cokernel_group(const GroupHom& f);

}  // namespace waldkit
