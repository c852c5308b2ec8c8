#include <numeric>
#include <random>

#include "doctest.h"
#include "waldkit/intmat.hpp"

using namespace waldkit;

namespace {

// gcd of all k x k minors, by expansion over row/column subsets
Int minor_gcd(const IntMatrix& m, std::size_t k) {
  Int g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<void(std::size_t, std::size_t)> pick_rows;
  std::function<void(std::size_t, std::size_t)> pick_cols = [&](std::size_t i, std::size_t start) {
    if (i == k) {
      IntMatrix sub(k, k);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rows[a], cols[b]);
      const Int d = determinant(sub);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t c = start; c < m.cols(); ++c) {
      cols[i] = c;
      pick_cols(i + 1, c + 1);
    }
  };
  pick_rows = [&](std::size_t i, std::size_t start) {
    if (i == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t r = start; r < m.rows(); ++r) {
      rows[i] = r;
      pick_rows(i + 1, r + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

// Invariant factors from determinantal divisors d_k / d_{k-1}.
std::vector<Int> factors_oracle(const IntMatrix& m) {
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
    const Int g = minor_gcd(m, k);
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

void check_snf(const IntMatrix& m) {
  const SNFResult r = smith_normal_form(m);
  CHECK(r.U * m * r.V == r.D);
  CHECK(is_unimodular(r.U));
  CHECK(is_unimodular(r.V));
  for (std::size_t i = 0; i < r.D.rows(); ++i)
    for (std::size_t j = 0; j < r.D.cols(); ++j)
      if (i != j) CHECK(r.D(i, j) == 0);
  for (std::size_t i = 0; i + 1 < r.factors.size(); ++i) CHECK(r.factors[i + 1] % r.factors[i] == 0);
  CHECK(r.factors == factors_oracle(m));
}

}  // namespace

TEST_CASE("SNF of diag(2,3) has factors 1, 6") {
  const IntMatrix m = IntMatrix::from_rows({{2, 0}, {0, 3}});
  const SNFResult r = smith_normal_form(m);
  CHECK(r.factors == std::vector<Int>{1, 6});
  check_snf(m);
}

TEST_CASE("SNF of zero and identity matrices") {
  CHECK(smith_normal_form(IntMatrix(3, 4)).factors.empty());
  CHECK(smith_normal_form(IntMatrix::identity(4)).factors == std::vector<Int>(4, 1));
}

TEST_CASE("SNF agrees with determinantal divisors on random matrices") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 1 + rng() % 4;
    const std::size_t c = 1 + rng() % 4;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = entry(rng);
    check_snf(m);
  }
}

TEST_CASE("SNF handles entries beyond 64 bits") {
  IntMatrix m(2, 2);
  m(0, 0) = Int("123456789012345678901234567890");
  m(0, 1) = Int("987654321098765432109876543210");
  m(1, 0) = 7;
  m(1, 1) = 11;
  check_snf(m);
}

TEST_CASE("kernel basis") {
  const IntMatrix m = IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}});
  const IntMatrix k = kernel_basis(m);
  CHECK(k.cols() == 2);
  CHECK((m * k).is_zero());
}

TEST_CASE("lattice membership and quotient groups") {
  Lattice l(2);
  l.insert_small({2, 0});
  l.insert_small({0, 3});
  CHECK(l.contains(IntVec{4, -3}));
  CHECK_FALSE(l.contains(IntVec{1, 0}));
  QuotientGroup q(l);
  CHECK(q.group().to_string() == "Z/6");

  Lattice dim(4);  // Z^4 / ([X2] - 2[X1], [X0], [X3] - 3[X1]) = Z
  dim.insert_small({1, 0, 0, 0});
  dim.insert_small({0, -2, 1, 0});
  dim.insert_small({0, -3, 0, 1});
  QuotientGroup qd(dim);
  CHECK(qd.group().to_string() == "Z");
  for (long i = 0; i < 4; ++i) CHECK(qd.generator_image(static_cast<std::size_t>(i)) == IntVec{Int(i)});

  Lattice mixed(3);
  mixed.insert_small({2, 0, 0});
  CHECK(QuotientGroup(mixed).group().to_string() == "Z^2 + Z/2");
  CHECK(QuotientGroup(Lattice(0)).group().to_string() == "0");
}

TEST_CASE("homomorphism checks") {
  Lattice z(1);          // Z
  Lattice z2(2);         // Z^2
  Lattice zmod2(1);      // Z/2
  zmod2.insert_small({2});

  GroupHom diag{&z, &z2, IntMatrix::from_rows({{1}, {1}})};
  CHECK(first_unpreserved_relation(diag) < 0);
  CHECK(is_injective(diag));
  CHECK_FALSE(is_surjective(diag));
  CHECK(cokernel_group(diag).to_string() == "Z");

  GroupHom proj{&z, &zmod2, IntMatrix::from_rows({{1}})};
  CHECK(is_surjective(proj));
  CHECK_FALSE(is_injective(proj));
  CHECK(kernel_group(proj).to_string() == "Z");

  GroupHom bad{&zmod2, &z, IntMatrix::from_rows({{1}})};
  CHECK(first_unpreserved_relation(bad) == 0);

  // Z -(1,1)-> Z^2 -(1,-1)-> Z is exact in the middle
  GroupHom diff{&z2, &z, IntMatrix::from_rows({{1, -1}})};
  CHECK(is_exact_at_middle(diag, diff));
  GroupHom first{&z2, &z, IntMatrix::from_rows({{1, 0}})};
  CHECK_FALSE(is_exact_at_middle(diag, first));

  GroupHom twice{&z, &z, IntMatrix::from_rows({{2}})};
  CHECK(is_injective(twice));
  CHECK(cokernel_group(twice).to_string() == "Z/2");
  CHECK_FALSE(is_isomorphism(twice));
}
