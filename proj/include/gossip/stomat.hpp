#pragma once

// Nonnegative / row-stochastic matrix algebra: the semi-norm and ergodicity
// coefficient, support digraphs and their composition, reducibility structure
// (canonical form, periods, Frobenius relabeling), exact Perron vectors and
// permutation-block detection.

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gossip/rational.hpp"

namespace gossip {

/// Strictly increasing list of 0-based state indices.
using IndexSet = std::vector<int>;

/// Split of {0,..,dim-1} into the permutation block (block0, possibly empty)
/// and the irreducible non-permutation blocks.
struct Partition {
  int dim = 0;
  IndexSet block0;
  std::vector<IndexSet> blocks;

  bool operator==(const Partition& o) const = default;
};

/// Support digraph of a matrix: edge i -> j iff a(j, i) != 0, so that
/// compose(support(A), support(B)) == support(B * A).
struct SupportDigraph {
  int dim = 0;
  std::vector<std::vector<bool>> adj;  // adj[i][j] : edge i -> j

  bool operator==(const SupportDigraph& o) const = default;
};

// ---------------------------------------------------------------------------
// scalar-generic free functions

template <typename S>
bool is_row_stochastic(const Mat<S>& A, const S& tol = S(0)) {
  if (A.rows() != A.cols() || A.rows() == 0) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    S sum(0);
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (A(i, j) < S(0)) return false;
      sum += A(i, j);
    }
    S d = sum - S(1);
    if (d < S(0)) d = -d;
    if (d > tol) return false;
  }
  return true;
}

/// ||A||_S : max over columns of the largest row-pair spread. Zero iff all
/// rows are equal.
template <typename S>
S seminorm(const Mat<S>& A) {
  S best(0);
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    S lo = A(0, j), hi = A(0, j);
    for (Eigen::Index i = 1; i < A.rows(); ++i) {
      if (A(i, j) < lo) lo = A(i, j);
      if (A(i, j) > hi) hi = A(i, j);
    }
    if (hi - lo > best) best = hi - lo;
  }
  return best;
}

/// mu(A) = 1/2 max_{i,j} sum_k |a_ik - a_jk|.
template <typename S>
S ergodicity_coefficient(const Mat<S>& A) {
  S best(0);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      S sum(0);
      for (Eigen::Index k = 0; k < A.cols(); ++k) {
        S d = A(i, k) - A(j, k);
        if (d < S(0)) d = -d;
        sum += d;
      }
      if (sum > best) best = sum;
    }
  return best / S(2);
}

/// True iff every pair of rows shares a column where both entries are
/// positive.
template <typename S>
bool is_scrambling(const Mat<S>& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      bool share = false;
      for (Eigen::Index k = 0; k < A.cols() && !share; ++k)
        share = A(i, k) > S(0) && A(j, k) > S(0);
      if (!share) return false;
    }
  return true;
}

/// Smallest nonzero entry, min A. Throws on the zero matrix.
template <typename S>
S min_entry(const Mat<S>& A) {
  std::optional<S> best;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != S(0) && (!best || A(i, j) < *best)) best = A(i, j);
  if (!best) throw std::domain_error("min_entry: empty support");
  return *best;
}

template <typename S>
SupportDigraph support_of(const Mat<S>& A) {
  const int n = static_cast<int>(A.rows());
  SupportDigraph g{n, std::vector<std::vector<bool>>(
                          n, std::vector<bool>(n, false))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (A(j, i) != S(0)) g.adj[i][j] = true;
  return g;
}

SupportDigraph compose_support_graphs(const SupportDigraph& ga,
                                      const SupportDigraph& gb);

// ---------------------------------------------------------------------------
// exact structural analysis

/// True iff A is 0/1 with exactly one 1 per row and per column.
bool is_permutation(const RMat& A);

/// Largest closed index set pi such that A[pi, pi] is a permutation matrix
/// and the rows indexed by pi vanish outside pi. Empty if none.
IndexSet maximal_permutation_index(const RMat& A);

struct CanonicalForm {
  /// Communicating classes in topological order (transient classes first).
  std::vector<IndexSet> classes;
  /// Per class: true for ergodic (closed), false for transient.
  std::vector<bool> ergodic;
  /// Relabeling: relabel[new_index] = old_index, classes contiguous.
  std::vector<int> relabel;

  int transient_count() const {
    int r = 0;
    for (bool e : ergodic) r += !e;
    return r;
  }
};

/// Communicating-class decomposition of a stochastic matrix; a class is
/// transient iff it has an exit to another class.
CanonicalForm canonical_form(const RMat& A);

bool is_irreducible(const RMat& A);

/// Period of an irreducible matrix (gcd of closed-walk lengths; the index
/// of imprimitivity). Throws on reducible input.
int period(const RMat& A);

/// Cyclic classes of an irreducible matrix with period h > 1, ordered so
/// that class c maps into class (c+1) mod h. Throws if primitive or
/// reducible.
std::vector<IndexSet> frobenius_form(const RMat& A);

/// Unique q with qA = q, q > 0, sum q = 1, solved exactly. Throws on
/// reducible input.
RRow perron_row_vector(const RMat& A);

// ---------------------------------------------------------------------------
// small helpers shared across modules

/// Reads the permutation sigma of `idx` out of unit rows of A: row idx[k]
/// must be the unit row pointing at idx[sigma(k)]. Throws if A does not act
/// on `idx` as a closed permutation.
std::vector<int> permutation_on(const RMat& A, const IndexSet& idx);

/// Multiplicative order of a permutation given in one-line notation.
long permutation_order(const std::vector<int>& perm);

long lcm_checked(long a, long b);

}  // namespace gossip
