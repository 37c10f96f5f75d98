#pragma once

// Per-cycle holonomy analysis: w-orders and orbit sets under the cycle
// transition matrix, induced index partitions, basepoint transport, and the
// merge of partitions across cycles.

#include "gossip/graph.hpp"
#include "gossip/stomat.hpp"

namespace gossip {

enum class Holonomy { NonHolonomic, Holonomic, FinitelyNonHolonomic };

struct CyclePartition {
  Partition partition;
  /// True iff the canonical form of P_C has a transient class, in which case
  /// the cycle order is zero and `partition` lists the ergodic structure
  /// found so far (diagnostic only).
  bool has_transient = false;
  /// Transient state indices, when present (non-holonomy witness).
  IndexSet transient_states;
};

/// block0 = maximal permutation index of P (includes identity rows of
/// uncovered agents); remaining blocks = ergodic classes outside block0.
CyclePartition cycle_partition(const RMat& P);

/// block0 = intersection of the permutation blocks; the other blocks are the
/// connected components of the overlap relation.
Partition merge_partitions(const Partition& a, const Partition& b);

/// L = lcm(order of the block0 permutation, periods of the irreducible
/// blocks). For any interior w with nonzero order, ord_w divides L, so L is
/// a sound search cap.
long structural_order_bound(const RMat& P, const CyclePartition& cp);

struct CycleAnalysis {
  PointedCycle cycle;
  RMat P;                    // full nm x nm transition matrix
  CyclePartition partition;  // induced partition of {0,..,nm-1}
  long structural_order = 0;
  long order_w = 0;             // 0 = not w-holonomic within the cap
  bool cap_limited = false;     // order search exhausted the cap
  std::vector<RRow> orbit;      // full nm-vectors, orbit[0] = w
  std::string witness;          // diagnostic for order 0

  Holonomy classify() const {
    if (order_w == 0) return Holonomy::NonHolonomic;
    return order_w == 1 ? Holonomy::Holonomic
                        : Holonomy::FinitelyNonHolonomic;
  }
};

/// Throws unless all entries positive and summing to exactly 1.
void check_weight_vector(const RRow& w);

/// Smallest k in [1, cap] with wbar = wbar (Pbar_C)^k, exact; 0 if none.
long w_order(const GossipGraph& g, const PointedCycle& c, const RRow& w,
             long cap);

/// [w, wP_C, ..., wP_C^{ord-1}] as full nm-vectors. Throws when the cycle is
/// not w-holonomic.
std::vector<RRow> orbit_set(const GossipGraph& g, const PointedCycle& c,
                            const RRow& w);

/// Full analysis of one pointed cycle. `cap_override` > 0 replaces the
/// structural cap.
CycleAnalysis analyze_cycle(const GossipGraph& g, const PointedCycle& c,
                            const RRow& w, long cap_override = 0);

/// Rebase the cycle at position `pos` along its node list and transport the
/// weight vector: w' = w X where X is the product of the suffix edges.
/// Guarantees w' = w' (P_{C'})^k for the rotated cycle C' when w has order k.
struct Transport {
  PointedCycle cycle;
  RRow w;
};
Transport transport_basepoint(const GossipGraph& g, const PointedCycle& c,
                              const RRow& w, int pos);

struct GraphHolonomy {
  RRow w;
  bool holonomic = false;  // every cycle of length > 2 has nonzero order
  bool no_cycles = false;  // vacuously holonomic
  std::vector<CycleAnalysis> cycles;
  std::vector<int> offending;  // indices of cycles with order 0
};

/// Analyzes every pointed cycle class of G against the common weight w.
GraphHolonomy analyze_graph(const GossipGraph& g, const RRow& w,
                            long cap_override = 0);

}  // namespace gossip
