#include "gossip/holonomy.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gossip {

CyclePartition cycle_partition(const RMat& P) {
  CyclePartition cp;
  const int n = static_cast<int>(P.rows());
  cp.partition.dim = n;
  cp.partition.block0 = maximal_permutation_index(P);
  std::vector<bool> in0(n, false);
  for (int i : cp.partition.block0) in0[i] = true;

  CanonicalForm cf = canonical_form(P);
  for (size_t c = 0; c < cf.classes.size(); ++c) {
    bool inside0 = std::all_of(cf.classes[c].begin(), cf.classes[c].end(),
                               [&](int i) { return in0[i]; });
    if (inside0) continue;  // permutation cycles live in block0
    if (cf.ergodic[c]) {
      cp.partition.blocks.push_back(cf.classes[c]);
    } else {
      cp.has_transient = true;
      cp.transient_states.insert(cp.transient_states.end(),
                                 cf.classes[c].begin(), cf.classes[c].end());
    }
  }
  std::sort(cp.transient_states.begin(), cp.transient_states.end());
  std::sort(cp.partition.blocks.begin(), cp.partition.blocks.end());
  return cp;
}

Partition merge_partitions(const Partition& a, const Partition& b) {
  if (a.dim != b.dim)
    throw std::invalid_argument("merge_partitions: dimension mismatch");
  const int n = a.dim;
  auto check_partition = [n](const Partition& p) {
    std::vector<int> count(n, 0);
    for (int i : p.block0) count.at(i)++;
    for (auto& blk : p.blocks)
      for (int i : blk) count.at(i)++;
    for (int c : count)
      if (c != 1)
        throw std::invalid_argument(
            "merge_partitions: input does not partition the ground set");
  };
  check_partition(a);
  check_partition(b);

  std::vector<bool> a0(n, false), b0(n, false);
  for (int i : a.block0) a0[i] = true;
  for (int i : b.block0) b0[i] = true;

  Partition out;
  out.dim = n;
  for (int i = 0; i < n; ++i)
    if (a0[i] && b0[i]) out.block0.push_back(i);

  // union-find over the indices outside the new block0
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
  for (auto* p : {&a, &b})
    for (auto& blk : p->blocks)
      for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);

  std::map<int, IndexSet> comps;
  for (int i = 0; i < n; ++i)
    if (!(a0[i] && b0[i])) comps[find(i)].push_back(i);
  for (auto& [root, members] : comps) out.blocks.push_back(members);
  std::sort(out.blocks.begin(), out.blocks.end());
  return out;
}

long structural_order_bound(const RMat& P, const CyclePartition& cp) {
  if (cp.has_transient)
    throw std::domain_error(
        "structural_order_bound: cycle has transient classes (order zero)");
  long bound = 1;
  if (!cp.partition.block0.empty())
    bound = permutation_order(permutation_on(P, cp.partition.block0));
  for (auto& blk : cp.partition.blocks) {
    RMat B(blk.size(), blk.size());
    for (size_t i = 0; i < blk.size(); ++i)
      for (size_t j = 0; j < blk.size(); ++j) B(i, j) = P(blk[i], blk[j]);
    bound = lcm_checked(bound, period(B));
  }
  return bound;
}

void check_weight_vector(const RRow& w) {
  Rational sum(0);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w(i) > Rational(0)))
      throw std::invalid_argument("weight vector must be interior (w > 0)");
    sum += w(i);
  }
  if (sum != Rational(1))
    throw std::invalid_argument("weight vector entries must sum to 1");
}

long w_order(const GossipGraph& g, const PointedCycle& c, const RRow& w,
             long cap) {
  if (cap < 1) throw std::invalid_argument("w_order: cap >= 1");
  check_weight_vector(w);
  RMat Pbar = restrict_matrix(cycle_transition(g, c), c, g.m());
  RRow wbar = restrict_vector(w, c, g.m());
  auto equal = [](const RRow& x, const RRow& y) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) != y(i)) return false;
    return true;
  };
  RRow v = wbar * Pbar;
  for (long k = 1; k <= cap; ++k) {
    if (equal(v, wbar)) return k;
    v = (v * Pbar).eval();
  }
  return 0;
}

std::vector<RRow> orbit_set(const GossipGraph& g, const PointedCycle& c,
                            const RRow& w) {
  CycleAnalysis a = analyze_cycle(g, c, w);
  if (a.order_w == 0) throw std::domain_error("cycle not w-holonomic");
  return a.orbit;
}

CycleAnalysis analyze_cycle(const GossipGraph& g, const PointedCycle& c,
                            const RRow& w, long cap_override) {
  check_weight_vector(w);
  CycleAnalysis a;
  a.cycle = c;
  a.P = cycle_transition(g, c);
  a.partition = cycle_partition(a.P);
  if (a.partition.has_transient) {
    a.order_w = 0;
    a.structural_order = 0;
    std::string states;
    for (int i : a.partition.transient_states)
      states += (states.empty() ? "" : ",") + std::to_string(i + 1);
    a.witness = "transient class {" + states + "}";
    return a;
  }
  a.structural_order = structural_order_bound(a.P, a.partition);
  long cap = cap_override > 0 ? cap_override : a.structural_order;
  a.order_w = w_order(g, c, w, cap);
  if (a.order_w == 0) {
    a.cap_limited = true;
    a.witness = "cap exhausted at " + std::to_string(cap);
    return a;
  }
  a.orbit.reserve(a.order_w);
  RRow v = w;
  for (long k = 0; k < a.order_w; ++k) {
    a.orbit.push_back(v);
    v = (v * a.P).eval();
  }
  return a;
}

Transport transport_basepoint(const GossipGraph& g, const PointedCycle& c,
                              const RRow& w, int pos) {
  const int k = c.length();
  if (pos < 0 || pos >= k)
    throw std::out_of_range("transport_basepoint: bad position");
  if (pos == 0) return Transport{c, w};
  PointedCycle rotated;
  for (int i = 0; i < k; ++i) rotated.nodes.push_back(c.nodes[(pos + i) % k]);
  // P_C = X Q with X the product of the suffix edges (positions pos..k-1);
  // the rotated cycle has P_{C'} = Q X and fixed vector w' = w X.
  EdgeSequence seq = cycle_edges(g, c);
  RRow wp = w;
  RMat X = transition_matrix(g, seq, pos, k);
  wp = (w * X).eval();
  return Transport{rotated, wp};
}

GraphHolonomy analyze_graph(const GossipGraph& g, const RRow& w,
                            long cap_override) {
  GraphHolonomy h;
  h.w = w;
  check_weight_vector(w);
  std::vector<PointedCycle> cycles = enumerate_cycles(g);
  if (cycles.empty()) {
    h.holonomic = true;
    h.no_cycles = true;
    return h;
  }
  h.holonomic = true;
  for (auto& c : cycles) {
    h.cycles.push_back(analyze_cycle(g, c, w, cap_override));
    if (h.cycles.back().order_w == 0) {
      h.holonomic = false;
      h.offending.push_back(static_cast<int>(h.cycles.size()) - 1);
    }
  }
  return h;
}

}  // namespace gossip
