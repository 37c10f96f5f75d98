#pragma once

// Simulation of the gossip process along schedules, convergence monitoring
// through the semi-norm, limit-structure prediction and measurement, and
// ground-truth fixture generation.

#include <cstdint>
#include <map>
#include <optional>

#include "gossip/derived.hpp"

namespace gossip {

/// Applies the schedule to x0; only the gossiping pair's coordinates change
/// at each step.
template <typename S>
Col<S> simulate(const GossipGraph& g, const EdgeSequence& schedule,
                Col<S> x);

extern template RCol simulate<Rational>(const GossipGraph&,
                                        const EdgeSequence&, RCol);
extern template DCol simulate<double>(const GossipGraph&, const EdgeSequence&,
                                      DCol);

/// pi^G: fold of merge_partitions over all cycle partitions.
Partition global_partition(const GraphHolonomy& h);

/// epsilon = min over cycles of the smallest nonzero entry over their
/// irreducible non-permutation blocks; nullopt when every cycle is a pure
/// permutation ("no contraction blocks").
std::optional<Rational> epsilon_bound(const GraphHolonomy& h);

/// p_i = restriction of w to pi^G_i, normalized.
std::vector<RRow> predicted_limit_blocks(const RRow& w, const Partition& pg);

struct PermGroup {
  IndexSet domain;  // pi^G_0, the states the group acts on
  std::vector<std::vector<int>> generators;  // one-line, deduplicated
  std::vector<std::vector<int>> elements;    // full closure
  bool capped = false;

  long size() const { return static_cast<long>(elements.size()); }
  bool contains(const std::vector<int>& p) const;
};

/// K: closure of the per-cycle permutation-block restrictions to pi^G_0.
/// Throws if the closure exceeds the cap.
PermGroup limit_group(const GraphHolonomy& h, const Partition& pg,
                      long cap = 1000000);

struct TraceRow {
  long checkpoint = 0;  // checkpoint ordinal
  long reps = 0;        // exhaustive walks completed
  double seminorm = 0;  // max block semi-norm of the running product
  double bound = 0;     // (1 - eps)^checkpoint * initial, when eps exists
  std::vector<double> per_block;  // semi-norm of each partition block
};

struct ConvergenceOptions {
  double tol = 1e-10;
  long max_reps = 10000;
  long checkpoint_walks = 0;  // 0: ceil(l_G / 2) per the proof construction
  bool exact = false;         // exact rational products (short horizons)
};

struct LimitReport {
  Partition partition;
  PermGroup group;
  std::vector<RRow> predicted;  // p_i per block
  Rational epsilon = 0;
  bool has_epsilon = false;
  long l_g = 0;

  bool converged = false;
  long reps_used = 0;
  double final_seminorm = 0;
  double max_offblock = 0;            // largest entry outside the block shape
  bool perm_part_valid = false;       // block0 restriction is a permutation
  bool perm_in_group = false;
  std::vector<TraceRow> trace;
  std::vector<Rational> trace_exact;  // checkpoint semi-norms, exact mode only
  std::vector<std::vector<int>> observed_perms;  // distinct, at cycle steps
  std::vector<DMat> measured_blocks;  // M^{ii} of the final product
  std::string error;
};

/// Iterates the exhaustive product along `walk`, tracking per-block
/// semi-norms at checkpoints and collecting the observed limit set once
/// converged. Throws on a non-exhaustive walk; sets `error` and returns on
/// contraction violations.
LimitReport run_to_convergence(const GossipGraph& g, const GraphHolonomy& h,
                               const DerivedGraph& d, const DerivedWalk& walk,
                               const ConvergenceOptions& opts = {});

struct ClauseVerdict {
  std::uint64_t walk_seed = 0;
  bool converged = false;
  bool finite_limit_set = false;   // (i)
  bool block_diagonal = false;     // (ii)
  bool rank_one_blocks = false;    // (iii); true when vacuous
  bool rank_one_vacuous = false;
  long observed_size = 0;
  std::string detail;

  bool all_pass() const {
    return converged && finite_limit_set && block_diagonal && rank_one_blocks;
  }
};

struct TheoremVerdict {
  bool preconditions = false;
  std::vector<std::string> precondition_issues;
  long group_size = 0;
  std::vector<ClauseVerdict> walks;
};

/// Checks Theorem clauses (i)-(iii) on seeded exhaustive walks.
TheoremVerdict verify_theorem(const GossipGraph& g, const RRow& w,
                              const std::vector<std::uint64_t>& walk_seeds,
                              const ConvergenceOptions& opts = {});

struct Fixture {
  GossipGraph graph;
  RRow w;
  // declared ground truth, known by construction
  std::map<std::vector<int>, long> order_by_nodes;  // sorted nodes -> ord_w
  Partition global;
  std::optional<Rational> epsilon;
  long group_size = 0;
  std::vector<RRow> limit_blocks;  // p_i per global block
};

/// kind F1: permutation-only triangle (n=3, m=1).
/// kind F2: 4-node bridgeless graph mixing a non-trivially holonomic
///          triangle with an averaging triangle (m=2).
/// kind F3: 7-node butterfly of three triangles (m=2).
Fixture gen_fixture(const std::string& kind, std::uint64_t seed);

}  // namespace gossip
