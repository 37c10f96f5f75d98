#pragma once

// The derived graph D_G(w): a geometric directed multigraph whose nodes are
// the orbit vectors and whose edges carry the cycle transition matrices.
// Walks in it translate back to gossip edge sequences via psi.

#include <cstdint>

#include "gossip/holonomy.hpp"

namespace gossip {

struct DerivedEdge {
  int from = 0, to = 0;  // node ids
  int cycle_id = 0;      // index into the holonomy cycle analyses
  int orbit_pos = 0;     // position a: w_C^(a) -> w_C^(a+1 mod ord)

  bool operator==(const DerivedEdge& o) const = default;
};

struct DerivedGraph {
  std::vector<RRow> nodes;  // deduplicated by exact coordinates
  int basepoint = 0;        // node holding w
  std::vector<DerivedEdge> edges;
  std::vector<CycleAnalysis> cycles;  // copied from the holonomy report

  const RMat& edge_weight(int e) const { return cycles[edges[e].cycle_id].P; }
};

/// Ordered edge ids in D; consecutive edges chain head-to-tail.
using DerivedWalk = std::vector<int>;

/// Throws (listing offending cycles) unless the holonomy report is positive.
DerivedGraph build_derived_graph(const GossipGraph& g, const GraphHolonomy& h);

bool is_valid_walk(const DerivedGraph& d, const DerivedWalk& walk);
bool is_closed_walk(const DerivedGraph& d, const DerivedWalk& walk);

/// psi: maps each derived edge to its cycle's gossip edges and concatenates
/// in reversed walk order, so that P_{psi(walk)} = W_1 W_2 ... W_k where W_i
/// is the weight of the i-th walk edge.
EdgeSequence psi(const DerivedGraph& d, const DerivedWalk& walk,
                 const GossipGraph& g);

/// Closed walk from the basepoint covering every edge: each cycle's full
/// orbit loop traversed once, loops concatenated at w in canonical order.
DerivedWalk exhaustive_closed_walk(const DerivedGraph& d);

/// Same, with the loop order shuffled by the seed.
DerivedWalk exhaustive_closed_walk(const DerivedGraph& d, std::uint64_t seed);

bool is_exhaustive_closed(const DerivedWalk& walk, const DerivedGraph& d);

/// Definition of a spanning sequence: covers a spanning tree of G.
bool is_spanning(const EdgeSequence& seq, const GossipGraph& g);

/// psi of the canonical exhaustive closed walk repeated r times.
EdgeSequence periodic_schedule(const DerivedGraph& d, const GossipGraph& g,
                               int repetitions);

}  // namespace gossip
