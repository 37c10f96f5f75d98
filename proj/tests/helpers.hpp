#pragma once

// Shared randomized generators for the test suites.

#include <algorithm>
#include <numeric>
#include <random>

#include "gossip/stomat.hpp"

namespace gossip::testing {

using Rng = std::mt19937_64;

/// Random rational in (0, 1) with denominator <= max_den.
inline Rational rand_rat(Rng& rng, long max_den = 16) {
  long d = 2 + static_cast<long>(rng() % static_cast<unsigned long>(max_den - 1));
  long n = 1 + static_cast<long>(rng() % static_cast<unsigned long>(d - 1));
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Row-stochastic with entries sampled from positive integers (optionally
/// zeroed with probability zero_pct/100, keeping >= 1 support per row),
/// normalized exactly.
inline RMat random_stochastic(Rng& rng, int n, int zero_pct = 0) {
  RMat A(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<long> raw(n, 0);
    for (int j = 0; j < n; ++j)
      if (static_cast<int>(rng() % 100) >= zero_pct)
        raw[j] = 1 + static_cast<long>(rng() % 9);
    if (std::all_of(raw.begin(), raw.end(), [](long x) { return x == 0; }))
      raw[rng() % n] = 1;
    long sum = std::accumulate(raw.begin(), raw.end(), 0L);
    for (int j = 0; j < n; ++j) {
      A(i, j) = Rational(raw[j], sum);
      A(i, j).canonicalize();
    }
  }
  return A;
}

inline std::vector<int> random_perm(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline RMat perm_matrix(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  RMat A = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, p[i]) = 1;
  return A;
}

inline bool same_matrix(const RMat& a, const RMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

inline bool same_row(const RRow& a, const RRow& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

}  // namespace gossip::testing
