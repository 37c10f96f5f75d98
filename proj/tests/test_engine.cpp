#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gossip/engine.hpp"
#include "helpers.hpp"

using namespace gossip;
using namespace gossip::testing;

namespace {

struct Built {
  Fixture f;
  GraphHolonomy h;
  DerivedGraph d;
};

Built build(const std::string& kind, std::uint64_t seed = 7) {
  Fixture f = gen_fixture(kind, seed);
  GraphHolonomy h = analyze_graph(f.graph, f.w);
  DerivedGraph d = build_derived_graph(f.graph, h);
  return {std::move(f), std::move(h), std::move(d)};
}

}  // namespace

TEST_CASE("simulate") {
  Built b = build("F1");
  const GossipGraph& g = b.f.graph;
  RCol x(3);
  x << Rational(1), Rational(2), Rational(3);
  CHECK(simulate<Rational>(g, {}, x) == x);

  RCol y = simulate<Rational>(g, {0}, x);  // edge (0,1) swaps states 0 and 1
  CHECK(y(0) == Rational(2));
  CHECK(y(1) == Rational(1));
  CHECK(y(2) == Rational(3));

  // simulation equals the product path, exact and float
  Built b2 = build("F2");
  Rng rng(13);
  EdgeSequence sched;
  for (int i = 0; i < 20; ++i)
    sched.push_back(static_cast<int>(rng() % b2.f.graph.edges().size()));
  RCol x0(8);
  for (int i = 0; i < 8; ++i) x0(i) = rand_rat(rng);
  RCol via_sim = simulate<Rational>(b2.f.graph, sched, x0);
  RCol via_prod = transition_matrix(b2.f.graph, sched) * x0;
  for (int i = 0; i < 8; ++i) CHECK(via_sim(i) == via_prod(i));

  DCol xd = to_double(RRow(x0.transpose())).transpose();
  DCol yd = simulate<double>(b2.f.graph, sched, xd);
  for (int i = 0; i < 8; ++i)
    CHECK(yd(i) == doctest::Approx(via_prod(i).get_d()).epsilon(1e-12));

  // one step leaves non-gossiping coordinates bitwise unchanged
  DCol zd = simulate<double>(b2.f.graph, {0}, xd);  // edge (0,1)
  for (int i : {4, 5, 6, 7}) CHECK(zd(i) == xd(i));

  CHECK_THROWS_AS(simulate<Rational>(g, {9}, x), std::out_of_range);
  CHECK_THROWS_AS(simulate<Rational>(g, {0}, RCol(RCol::Zero(2))),
                  std::invalid_argument);
}

TEST_CASE("global_partition matches fixture declarations") {
  for (const char* kind : {"F1", "F2", "F3"}) {
    Built b = build(kind);
    CHECK(global_partition(b.h) == b.f.global);
  }
  // fold order does not matter
  Built b = build("F3");
  GraphHolonomy shuffled = b.h;
  std::reverse(shuffled.cycles.begin(), shuffled.cycles.end());
  CHECK(global_partition(shuffled) == b.f.global);
}

TEST_CASE("epsilon_bound") {
  Built b2 = build("F2", 21);
  REQUIRE(b2.f.epsilon.has_value());
  CHECK(*epsilon_bound(b2.h) == *b2.f.epsilon);
  Built b3 = build("F3", 22);
  CHECK(*epsilon_bound(b3.h) == *b3.f.epsilon);
  Built b1 = build("F1");
  CHECK_FALSE(epsilon_bound(b1.h).has_value());  // no contraction blocks
}

TEST_CASE("predicted_limit_blocks") {
  Partition pg{4, {0, 3}, {{1, 2}}};
  RRow w(4);
  w << Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4);
  auto blocks = predicted_limit_blocks(w, pg);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0](0) == Rational(1, 2));
  CHECK(blocks[0](1) == Rational(1, 2));

  for (const char* kind : {"F2", "F3"}) {
    Built b = build(kind);
    auto p = predicted_limit_blocks(b.f.w, b.f.global);
    REQUIRE(p.size() == b.f.limit_blocks.size());
    for (size_t i = 0; i < p.size(); ++i)
      CHECK(same_row(p[i], b.f.limit_blocks[i]));
  }
}

TEST_CASE("limit_group") {
  Built b1 = build("F1");
  PermGroup k1 = limit_group(b1.h, b1.f.global);
  CHECK(k1.size() == 3);  // cyclic group of the 3-cycle
  CHECK(k1.contains({0, 1, 2}));

  Built b3 = build("F3");
  PermGroup k3 = limit_group(b3.h, b3.f.global);
  CHECK(k3.size() == 8);  // three commuting transpositions

  // two disjoint transpositions generate the Klein four-group
  GraphHolonomy h;
  h.holonomic = true;
  CycleAnalysis a, b;
  a.P = perm_matrix({1, 0, 2, 3});
  b.P = perm_matrix({0, 1, 3, 2});
  h.cycles = {a, b};
  Partition pg{4, {0, 1, 2, 3}, {}};
  CHECK(limit_group(h, pg).size() == 4);
  CHECK_THROWS_AS(limit_group(h, pg, 2), std::domain_error);
}

TEST_CASE("run_to_convergence on the permutation-only fixture") {
  Built b = build("F1");
  DerivedWalk walk = exhaustive_closed_walk(b.d);
  LimitReport rep = run_to_convergence(b.f.graph, b.h, b.d, walk);
  CHECK(rep.converged);
  CHECK(rep.measured_blocks.empty());
  CHECK(rep.partition.blocks.empty());
  CHECK_FALSE(rep.has_epsilon);
  REQUIRE(rep.observed_perms.size() == 3);  // product cycles with period 3
  for (const auto& p : rep.observed_perms) CHECK(rep.group.contains(p));
}

TEST_CASE("run_to_convergence on the contracting fixture") {
  Built b = build("F2");
  DerivedWalk walk = exhaustive_closed_walk(b.d);
  ConvergenceOptions opts;
  LimitReport rep = run_to_convergence(b.f.graph, b.h, b.d, walk, opts);
  REQUIRE(rep.converged);
  CHECK(rep.l_g == 4);
  CHECK(rep.final_seminorm < opts.tol);
  CHECK(rep.max_offblock == 0.0);
  CHECK(rep.perm_part_valid);
  CHECK(rep.perm_in_group);
  REQUIRE(rep.measured_blocks.size() == 1);
  DRow p = to_double(rep.predicted[0]);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      CHECK(std::abs(rep.measured_blocks[0](i, j) - p(j)) < 1e-9);
  // monotone trace
  for (size_t k = 1; k < rep.trace.size(); ++k)
    CHECK(rep.trace[k].seminorm <= rep.trace[k - 1].seminorm + 1e-12);

  ConvergenceOptions loose;
  loose.tol = 1.0;
  LimitReport quick = run_to_convergence(b.f.graph, b.h, b.d, walk, loose);
  CHECK(quick.converged);
  CHECK(quick.reps_used <= 2 + 3);  // first checkpoint plus collection

  CHECK_THROWS_AS(
      run_to_convergence(b.f.graph, b.h, b.d, DerivedWalk{0}, opts),
      std::invalid_argument);
}

TEST_CASE("exact and float modes agree on the permutation part") {
  Built b = build("F2", 31);
  DerivedWalk walk = exhaustive_closed_walk(b.d, 5);
  ConvergenceOptions exact;
  exact.exact = true;
  LimitReport re = run_to_convergence(b.f.graph, b.h, b.d, walk, exact);
  LimitReport rf = run_to_convergence(b.f.graph, b.h, b.d, walk);
  REQUIRE(re.converged);
  REQUIRE(rf.converged);
  CHECK(re.observed_perms == rf.observed_perms);
}

TEST_CASE("verify_theorem") {
  Built b = build("F2");
  TheoremVerdict v = verify_theorem(b.f.graph, b.f.w, {1, 2, 3});
  REQUIRE(v.preconditions);
  CHECK(v.group_size == b.f.group_size);
  REQUIRE(v.walks.size() == 3);
  for (const auto& cv : v.walks) {
    CHECK(cv.all_pass());
    CHECK_FALSE(cv.rank_one_vacuous);
    CHECK(v.group_size % cv.observed_size == 0);
  }

  Built b1 = build("F1");
  v = verify_theorem(b1.f.graph, b1.f.w, {1});
  REQUIRE(v.walks.size() == 1);
  CHECK(v.walks[0].all_pass());
  CHECK(v.walks[0].rank_one_vacuous);
  CHECK(v.walks[0].observed_size == 3);

  // bridged graph: precondition verdict only
  RMat sw(2, 2);
  sw << 0, 1, 1, 0;
  GossipGraph bridged(4, 1, {{0, 1}, {1, 2}, {0, 2}, {2, 3}},
                      {sw, sw, sw, sw});
  RRow w(4);
  w << Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4);
  v = verify_theorem(bridged, w, {1});
  CHECK_FALSE(v.preconditions);
  CHECK(v.walks.empty());
  bool mentions_bridge = false;
  for (const auto& s : v.precondition_issues)
    mentions_bridge = mentions_bridge || s.find("bridge") != std::string::npos;
  CHECK(mentions_bridge);
}

TEST_CASE("gen_fixture declarations are reproduced by analysis") {
  for (const char* kind : {"F1", "F2", "F3"}) {
    for (std::uint64_t seed : {1ull, 42ull}) {
      Built b = build(kind, seed);
      CHECK(b.h.holonomic);
      for (const auto& ca : b.h.cycles) {
        std::vector<int> nodes = ca.cycle.nodes;
        std::sort(nodes.begin(), nodes.end());
        REQUIRE(b.f.order_by_nodes.count(nodes) == 1);
        CHECK(ca.order_w == b.f.order_by_nodes.at(nodes));
      }
    }
  }
  CHECK_THROWS_AS(gen_fixture("F9", 1), std::invalid_argument);
}
