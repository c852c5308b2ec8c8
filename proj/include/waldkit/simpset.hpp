#pragma once

// Truncated simplicial and bisimplicial sets given by face/degeneracy
// tables, nerves of finite categories, homology of normalized chains and
// fundamental-group presentations from the 2-skeleton.

#include <cstdint>
#include <string>
#include <vector>

#include "waldkit/diagram.hpp"
#include "waldkit/fincat.hpp"
#include "waldkit/intmat.hpp"

namespace waldkit {

using Table = std::vector<std::int32_t>;

struct TruncSSet {
  int dim = 0;
  std::vector<std::size_t> count;           // simplices in degree n, n <= dim
  std::vector<std::vector<Table>> face;     // face[n][i][s] = d_i s, n >= 1
  std::vector<std::vector<Table>> degen;    // degen[n][j][s] = s_j s in degree n+1, n < dim
  std::vector<std::vector<char>> degenerate;

  std::size_t nondegenerate(int n) const;
};

// Checks d/s identities on every stored simplex and that the degenerate
// flags are exactly the images of the degeneracies. Throws
// SimplicialIdentityViolated naming the identity and simplex.
void validate_simplicial(const TruncSSet& x);

// Composable chains of length n <= dim. Throws EnumerationLimitExceeded when
// more than `limit` simplices would be produced. When `chains` is given it
// receives the simplex index per degree: rows (object) in degree 0 and
// (f_1, ..., f_n) in degree n.
TruncSSet nerve(const FinCat& c, int dim, std::size_t limit = 20'000'000,
                std::vector<InternTable>* chains = nullptr);

// Bisimplicial set truncated at (M, K): X_{m,k} for m <= M, k <= K.
struct BisimpSet {
  int M = 0;
  int K = 0;
  std::vector<std::vector<std::size_t>> count;              // [m][k]
  std::vector<std::vector<std::vector<Table>>> hface;       // [m][k][i]: X_{m,k} -> X_{m-1,k}
  std::vector<std::vector<std::vector<Table>>> hdegen;      // [m][k][j]: X_{m,k} -> X_{m+1,k}
  std::vector<std::vector<std::vector<Table>>> vface;       // [m][k][i]: X_{m,k} -> X_{m,k-1}
  std::vector<std::vector<std::vector<Table>>> vdegen;      // [m][k][j]: X_{m,k} -> X_{m,k+1}

  void resize(int m, int k);
};

// Simplicial identities in each direction and commutation of horizontal
// with vertical operators.
void validate_bisimplicial(const BisimpSet& b);

// diag_n = X_{n,n}, d_i = d_i^h d_i^v, s_j = s_j^h s_j^v. Requires M = K.
TruncSSet diagonal(const BisimpSet& b);

// Normalized chain complex: nondegenerate simplices, boundary matrices with
// degenerate faces dropped.
struct ChainComplex {
  std::vector<std::vector<std::int32_t>> basis;  // degree -> simplex ids
  std::vector<std::vector<std::int32_t>> index;  // degree -> simplex -> basis index or -1
  // boundary[n] columns: sparse (row, coefficient) lists, n >= 1
  std::vector<std::vector<std::vector<std::pair<std::int32_t, int>>>> boundary;
};
ChainComplex normalized_chains(const TruncSSet& x);
bool boundary_squares_to_zero(const ChainComplex& c);

// H_n; needs n + 1 <= dim (TruncationTooLow otherwise).
AbGroup homology(const TruncSSet& x, int n);

struct GroupPresentation {
  std::size_t generators = 0;
  std::vector<std::string> names;
  // Letters are +(g+1) or -(g+1).
  std::vector<std::vector<int>> relators;
  // 1-simplex -> generator index, -1 for tree and degenerate edges.
  std::vector<std::int32_t> edge_generator;
};

// Spanning tree by breadth-first search from the basepoint (lowest index
// first); relator d2 . d0 . d1^-1 per nondegenerate 2-simplex. Throws
// Disconnected (listing the components) or TruncationTooLow.
GroupPresentation pi1_presentation(const TruncSSet& x, std::int32_t basepoint);

// Relation lattice of the abelianized presentation.
Lattice abelianized_relations(const GroupPresentation& p);
AbGroup abelianize(const GroupPresentation& p);

}  // namespace waldkit
