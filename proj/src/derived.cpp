#include "gossip/derived.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace gossip {

namespace {

bool same_coords(const RRow& a, const RRow& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

}  // namespace

DerivedGraph build_derived_graph(const GossipGraph& g,
                                 const GraphHolonomy& h) {
  if (!h.holonomic) {
    std::string msg = "build_derived_graph: graph is not w-holonomic; "
                      "offending cycles:";
    for (int id : h.offending) {
      msg += " [";
      for (int v : h.cycles[id].cycle.nodes) msg += "v" + std::to_string(v + 1);
      msg += "]";
    }
    throw std::domain_error(msg);
  }
  if (h.no_cycles)
    throw std::domain_error("build_derived_graph: graph has no cycles");
  (void)g;

  DerivedGraph d;
  d.cycles = h.cycles;
  auto node_id = [&d](const RRow& v) {
    for (size_t i = 0; i < d.nodes.size(); ++i)
      if (same_coords(d.nodes[i], v)) return static_cast<int>(i);
    d.nodes.push_back(v);
    return static_cast<int>(d.nodes.size()) - 1;
  };
  d.basepoint = node_id(h.w);
  for (size_t c = 0; c < h.cycles.size(); ++c) {
    const auto& orbit = h.cycles[c].orbit;
    const int ord = static_cast<int>(orbit.size());
    for (int a = 0; a < ord; ++a) {
      int from = node_id(orbit[a]);
      int to = node_id(orbit[(a + 1) % ord]);
      d.edges.push_back(DerivedEdge{from, to, static_cast<int>(c), a});
    }
  }
  return d;
}

bool is_valid_walk(const DerivedGraph& d, const DerivedWalk& walk) {
  for (size_t i = 0; i < walk.size(); ++i) {
    if (walk[i] < 0 || walk[i] >= static_cast<int>(d.edges.size()))
      return false;
    if (i > 0 && d.edges[walk[i - 1]].to != d.edges[walk[i]].from)
      return false;
  }
  return true;
}

bool is_closed_walk(const DerivedGraph& d, const DerivedWalk& walk) {
  if (walk.empty() || !is_valid_walk(d, walk)) return false;
  return d.edges[walk.front()].from == d.edges[walk.back()].to;
}

EdgeSequence psi(const DerivedGraph& d, const DerivedWalk& walk,
                 const GossipGraph& g) {
  if (!is_valid_walk(d, walk)) throw std::invalid_argument("psi: invalid walk");
  EdgeSequence out;
  // Reversed walk order: the first walk edge ends up latest in the gossip
  // sequence, so its matrix is applied leftmost in P_{psi(walk)}.
  for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
    EdgeSequence ce = cycle_edges(g, d.cycles[d.edges[*it].cycle_id].cycle);
    out.insert(out.end(), ce.begin(), ce.end());
  }
  return out;
}

namespace {

DerivedWalk loops_in_order(const DerivedGraph& d,
                           const std::vector<int>& cycle_order) {
  // edge id of (cycle, orbit_pos)
  std::map<std::pair<int, int>, int> by_pos;
  for (size_t e = 0; e < d.edges.size(); ++e)
    by_pos[{d.edges[e].cycle_id, d.edges[e].orbit_pos}] = static_cast<int>(e);
  DerivedWalk walk;
  for (int c : cycle_order) {
    const int ord = static_cast<int>(d.cycles[c].orbit.size());
    for (int a = 0; a < ord; ++a) walk.push_back(by_pos.at({c, a}));
  }
  return walk;
}

}  // namespace

DerivedWalk exhaustive_closed_walk(const DerivedGraph& d) {
  std::vector<int> order(d.cycles.size());
  std::iota(order.begin(), order.end(), 0);
  return loops_in_order(d, order);
}

DerivedWalk exhaustive_closed_walk(const DerivedGraph& d, std::uint64_t seed) {
  std::vector<int> order(d.cycles.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return loops_in_order(d, order);
}

bool is_exhaustive_closed(const DerivedWalk& walk, const DerivedGraph& d) {
  if (!is_closed_walk(d, walk)) return false;
  std::vector<bool> covered(d.edges.size(), false);
  for (int e : walk) covered[e] = true;
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

bool is_spanning(const EdgeSequence& seq, const GossipGraph& g) {
  // A sequence is spanning iff its edges connect all nodes of G.
  std::vector<Edge> used;
  std::set<int> ids(seq.begin(), seq.end());
  for (int id : ids) used.push_back(g.edges()[id]);
  return is_connected(g.n(), used);
}

EdgeSequence periodic_schedule(const DerivedGraph& d, const GossipGraph& g,
                               int repetitions) {
  if (repetitions < 1)
    throw std::invalid_argument("periodic_schedule: repetitions >= 1");
  EdgeSequence once = psi(d, exhaustive_closed_walk(d), g);
  EdgeSequence out;
  out.reserve(once.size() * repetitions);
  for (int r = 0; r < repetitions; ++r)
    out.insert(out.end(), once.begin(), once.end());
  return out;
}

}  // namespace gossip
