#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gossip/stomat.hpp"
#include "helpers.hpp"

using namespace gossip;
using namespace gossip::testing;

namespace {

RMat mat2(Rational a, Rational b, Rational c, Rational d) {
  RMat A(2, 2);
  A << a, b, c, d;
  return A;
}

RMat consensus_rows(const RRow& p) {
  RMat A(p.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) A(i, j) = p(j);
  return A;
}

}  // namespace

TEST_CASE("seminorm") {
  RRow p(3);
  p << Rational(1, 2), Rational(1, 3), Rational(1, 6);
  CHECK(seminorm(consensus_rows(p)) == Rational(0));
  CHECK(seminorm(RMat(RMat::Identity(2, 2))) == Rational(1));
  CHECK(seminorm(mat2({1, 2}, {1, 2}, {1, 4}, {3, 4})) == Rational(1, 4));
}

TEST_CASE("ergodicity coefficient") {
  RRow p(3);
  p << Rational(1, 4), Rational(1, 4), Rational(1, 2);
  CHECK(ergodicity_coefficient(consensus_rows(p)) == Rational(0));
  CHECK(ergodicity_coefficient(perm_matrix({1, 2, 0})) == Rational(1));
  CHECK(ergodicity_coefficient(mat2({1, 2}, {1, 2}, {1, 4}, {3, 4})) ==
        Rational(1, 4));
}

TEST_CASE("scrambling and min entry") {
  CHECK_FALSE(is_scrambling(RMat(RMat::Identity(2, 2))));
  RRow p(3);
  p << Rational(1, 6), Rational(1, 3), Rational(1, 2);
  CHECK(is_scrambling(consensus_rows(p)));
  CHECK(min_entry(consensus_rows(p)) == Rational(1, 6));

  RMat A = RMat::Zero(3, 3);
  A(0, 0) = A(0, 1) = A(1, 1) = A(1, 2) = A(2, 0) = A(2, 2) = Rational(1, 2);
  CHECK(is_scrambling(A));
  CHECK(min_entry(A) == Rational(1, 2));

  CHECK_THROWS_WITH_AS(min_entry(RMat(RMat::Zero(2, 2))),
                       "min_entry: empty support", std::domain_error);
}

TEST_CASE("maximal permutation index") {
  CHECK(maximal_permutation_index(RMat(RMat::Identity(4, 4))) ==
        IndexSet{0, 1, 2, 3});
  CHECK(maximal_permutation_index(
            mat2({1, 2}, {1, 2}, {1, 2}, {1, 2})).empty());

  // unit row escaping its candidate set must be excluded
  RMat A = RMat::Zero(3, 3);
  A(0, 1) = 1;            // 0 -> 1, but 1 is not a unit row
  A(1, 0) = A(1, 1) = Rational(1, 2);
  A(2, 2) = 1;
  CHECK(maximal_permutation_index(A) == IndexSet{2});

  // closed swap next to a stochastic block
  RMat B = RMat::Zero(4, 4);
  B(0, 1) = B(1, 0) = 1;
  B(2, 2) = B(2, 3) = B(3, 2) = B(3, 3) = Rational(1, 2);
  CHECK(maximal_permutation_index(B) == IndexSet{0, 1});
}

TEST_CASE("canonical form") {
  CanonicalForm cf = canonical_form(RMat(RMat::Identity(3, 3)));
  CHECK(cf.classes.size() == 3);
  CHECK(cf.transient_count() == 0);

  RMat A = mat2(Rational(1, 2), Rational(1, 2), Rational(0), Rational(1));
  cf = canonical_form(A);
  REQUIRE(cf.classes.size() == 2);
  CHECK(cf.ergodic[0] == false);
  CHECK(cf.classes[0] == IndexSet{0});
  CHECK(cf.ergodic[1] == true);
  CHECK(cf.classes[1] == IndexSet{1});

  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    RMat R = random_stochastic(rng, 4, 40);
    if (!is_irreducible(R)) continue;
    cf = canonical_form(R);
    REQUIRE(cf.classes.size() == 1);
    CHECK(cf.ergodic[0]);
  }
}

TEST_CASE("period") {
  CHECK(period(perm_matrix({1, 2, 3, 0})) == 4);
  Rng rng(5);
  RMat P = random_stochastic(rng, 2);  // fully positive
  CHECK(period(P) == 1);

  RMat A = RMat::Zero(3, 3);
  A(0, 1) = 1;
  A(1, 2) = 1;
  A(2, 0) = A(2, 1) = Rational(1, 2);
  // brute-force gcd of closed-walk lengths at node 0 up to length 12
  int g = 0;
  SupportDigraph sd = support_of(A);
  std::vector<std::vector<int>> reach = {{0}};
  for (int len = 1; len <= 12; ++len) {
    std::vector<int> nxt;
    std::vector<bool> seen(3, false);
    for (int u : reach.back())
      for (int v = 0; v < 3; ++v)
        if (sd.adj[u][v] && !seen[v]) {
          seen[v] = true;
          nxt.push_back(v);
        }
    reach.push_back(nxt);
    if (seen[0]) g = g == 0 ? len : std::gcd(g, len);
  }
  CHECK(period(A) == g);

  CHECK_THROWS_WITH_AS(period(RMat(RMat::Identity(2, 2))),
                       "matrix not irreducible", std::domain_error);
}

TEST_CASE("frobenius form") {
  auto classes = frobenius_form(perm_matrix({1, 2, 0}));
  REQUIRE(classes.size() == 3);
  for (const auto& c : classes) CHECK(c.size() == 1);

  RMat A = RMat::Zero(4, 4);
  A(0, 2) = A(0, 3) = Rational(1, 2);
  A(1, 2) = A(1, 3) = Rational(1, 2);
  A(2, 0) = 1;
  A(3, 1) = 1;
  classes = frobenius_form(A);
  REQUIRE(classes.size() == 2);
  std::vector<IndexSet> sorted = classes;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == IndexSet{0, 1});
  CHECK(sorted[1] == IndexSet{2, 3});
  // A^2 is block diagonal on the cyclic classes with primitive blocks
  RMat A2 = A * A;
  for (const auto& cls : classes) {
    std::vector<bool> inside(4, false);
    for (int i : cls) inside[i] = true;
    RMat B(cls.size(), cls.size());
    for (size_t i = 0; i < cls.size(); ++i)
      for (int j = 0; j < 4; ++j) {
        if (!inside[j]) CHECK(A2(cls[i], j) == Rational(0));
      }
    for (size_t i = 0; i < cls.size(); ++i)
      for (size_t j = 0; j < cls.size(); ++j) B(i, j) = A2(cls[i], cls[j]);
    CHECK(period(B) == 1);
  }

  Rng rng(5);
  CHECK_THROWS_WITH_AS(frobenius_form(random_stochastic(rng, 3)),
                       "matrix primitive", std::domain_error);
}

TEST_CASE("perron row vector") {
  RRow q = perron_row_vector(perm_matrix({1, 2, 0}));
  for (int i = 0; i < 3; ++i) CHECK(q(i) == Rational(1, 3));

  q = perron_row_vector(mat2({1, 2}, {1, 2}, {1, 4}, {3, 4}));
  CHECK(q(0) == Rational(1, 3));
  CHECK(q(1) == Rational(2, 3));

  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng() % 5);
    RMat A = random_stochastic(rng, n, 30);
    if (!is_irreducible(A)) continue;
    RRow v = perron_row_vector(A);
    Rational sum(0);
    for (int i = 0; i < n; ++i) {
      CHECK(v(i) > Rational(0));
      sum += v(i);
    }
    CHECK(sum == Rational(1));
    CHECK(same_row(RRow(v * A), v));
  }
  CHECK_THROWS_AS(perron_row_vector(RMat(RMat::Identity(3, 3))),
                  std::domain_error);
}

TEST_CASE("support composition matches products") {
  Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    int n = 2 + static_cast<int>(rng() % 5);
    RMat A = random_stochastic(rng, n, 50);
    RMat B = random_stochastic(rng, n, 50);
    CHECK(compose_support_graphs(support_of(A), support_of(B)) ==
          support_of(RMat(B * A)));
  }
  SupportDigraph i2 = support_of(RMat(RMat::Identity(2, 2)));
  CHECK(compose_support_graphs(i2, i2) == i2);
  CHECK_THROWS_AS(
      compose_support_graphs(i2, support_of(RMat(RMat::Identity(3, 3)))),
      std::invalid_argument);
}

TEST_CASE("is_permutation and rigidity") {
  CHECK(is_permutation(RMat(RMat::Identity(3, 3))));
  CHECK(is_permutation(perm_matrix({1, 0, 2})));
  CHECK_FALSE(is_permutation(mat2({1, 2}, {1, 2}, {1, 2}, {1, 2})));

  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng() % 4);
    RMat A = random_stochastic(rng, n, 40);
    RMat B = random_stochastic(rng, n, 40);
    bool both_perm = is_permutation(A) && is_permutation(B);
    if (!both_perm) CHECK_FALSE(is_permutation(RMat(A * B)));
  }
}

TEST_CASE("contraction inequalities on random matrices") {
  Rng rng(43);
  for (int t = 0; t < 300; ++t) {
    int n = 2 + static_cast<int>(rng() % 5);
    RMat B = random_stochastic(rng, n, 30);
    RMat C = random_stochastic(rng, n, 30);
    CHECK(seminorm(RMat(B * C)) <= ergodicity_coefficient(B) * seminorm(C));
    if (is_scrambling(B))
      CHECK(ergodicity_coefficient(B) <= Rational(1) - min_entry(B));
    CHECK(is_row_stochastic(RMat(B * C)));
  }
}

TEST_CASE("permutation helpers") {
  RMat A = perm_matrix({2, 0, 1, 3});
  CHECK(permutation_on(A, IndexSet{0, 1, 2, 3}) ==
        std::vector<int>{2, 0, 1, 3});
  CHECK(permutation_on(A, IndexSet{3}) == std::vector<int>{0});
  CHECK_THROWS_AS(permutation_on(A, IndexSet{0, 1}), std::domain_error);
  CHECK(permutation_order({1, 2, 0, 4, 3}) == 6);
  CHECK(permutation_order({0, 1}) == 1);
  CHECK(lcm_checked(4, 6) == 12);
}
