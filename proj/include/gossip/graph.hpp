#pragma once

// Gossip-graph model: per-edge pre-local matrices and their identity-padded
// embeddings, topology checks, simple-cycle enumeration and transition-matrix
// products along edge sequences.

#include <string>
#include <vector>

#include "gossip/stomat.hpp"

namespace gossip {

struct Edge {
  int u = 0, v = 0;  // 0-based nodes, u < v

  bool operator==(const Edge& o) const = default;
};

/// Ordered list of edge ids into GossipGraph::edges().
using EdgeSequence = std::vector<int>;

/// Simple cycle v_{i1}..v_{ik}v_{i1}, k >= 3, stored without the closing
/// repeat. The first node is the basepoint.
struct PointedCycle {
  std::vector<int> nodes;

  int length() const { return static_cast<int>(nodes.size()); }
  bool operator==(const PointedCycle& o) const = default;
};

/// Identity-padded nm x nm embedding of a 2m x 2m pre-local matrix: agent
/// u's m indices first, then agent v's; all other rows are unit rows.
RMat assemble_local(const RMat& pre, int u, int v, int n, int m);

class GossipGraph {
 public:
  GossipGraph(int n, int m, std::vector<Edge> edges,
              std::vector<RMat> pre_local);

  int n() const { return n_; }
  int m() const { return m_; }
  int dim() const { return n_ * m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const RMat& pre_local(int e) const { return pre_local_[e]; }
  const RMat& local(int e) const { return local_[e]; }

  /// Edge id for the unordered pair {a, b}, or -1.
  int edge_id(int a, int b) const;
  bool has_edge(int a, int b) const { return edge_id(a, b) >= 0; }

 private:
  int n_, m_;
  std::vector<Edge> edges_;
  std::vector<RMat> pre_local_;
  std::vector<RMat> local_;
};

/// P_gamma(t : s) = A_{e_t} ... A_{e_{s+1}}, identity when t <= s.
RMat transition_matrix(const GossipGraph& g, const EdgeSequence& seq, int s,
                       int t);
RMat transition_matrix(const GossipGraph& g, const EdgeSequence& seq);

/// Traversal edges of a pointed cycle, in cycle order.
EdgeSequence cycle_edges(const GossipGraph& g, const PointedCycle& c);

/// P_C for a pointed cycle (latest edge leftmost).
RMat cycle_transition(const GossipGraph& g, const PointedCycle& c);

std::vector<Edge> find_bridges(int n, const std::vector<Edge>& edges);
bool is_bridgeless(int n, const std::vector<Edge>& edges);
bool is_connected(int n, const std::vector<Edge>& edges);

/// All simple cycles of length >= 3 as pointed classes; both orientations of
/// each undirected cycle are emitted, basepoint at the smallest node. Throws
/// beyond `cap` cycles.
std::vector<PointedCycle> enumerate_cycles(const GossipGraph& g,
                                           int cap = 10000);

/// Sorted agents covered by the cycle.
std::vector<int> covered_agents(const PointedCycle& c);

/// State indices (m per agent) of the given agents, increasing.
IndexSet agent_state_indices(const std::vector<int>& agents, int m);

/// Bar operator: keep only rows/columns of agents covered by C.
RMat restrict_matrix(const RMat& A, const PointedCycle& c, int m);
RRow restrict_vector(const RRow& w, const PointedCycle& c, int m);

struct Diagnostics {
  bool simple = false;
  bool connected = false;
  bool bridgeless = false;
  bool matrices_ok = false;
  bool has_cycles = false;
  std::vector<Edge> bridges;
  std::vector<std::string> issues;

  bool theorem_preconditions() const {
    return simple && connected && bridgeless && matrices_ok;
  }
};

Diagnostics validate(const GossipGraph& g);

}  // namespace gossip
