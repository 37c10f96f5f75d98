#include "gossip/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gossip {

RMat assemble_local(const RMat& pre, int u, int v, int n, int m) {
  if (u == v) throw std::invalid_argument("assemble_local: self-loop");
  if (u > v) std::swap(u, v);
  if (u < 0 || v >= n) throw std::invalid_argument("assemble_local: bad edge");
  if (pre.rows() != 2 * m || pre.cols() != 2 * m)
    throw std::invalid_argument("assemble_local: pre-local must be 2m x 2m");
  if (!is_row_stochastic(pre))
    throw std::invalid_argument("assemble_local: pre-local not row-stochastic");

  const int dim = n * m;
  RMat A = RMat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) A(i, i) = Rational(1);
  // slot k of the pre-local space -> global state index
  std::vector<int> slot(2 * m);
  for (int k = 0; k < m; ++k) {
    slot[k] = u * m + k;
    slot[m + k] = v * m + k;
  }
  for (int r = 0; r < 2 * m; ++r) {
    A.row(slot[r]).setZero();
    for (int c = 0; c < 2 * m; ++c) A(slot[r], slot[c]) = pre(r, c);
  }
  return A;
}

GossipGraph::GossipGraph(int n, int m, std::vector<Edge> edges,
                         std::vector<RMat> pre_local)
    : n_(n), m_(m), edges_(std::move(edges)), pre_local_(std::move(pre_local)) {
  if (n_ < 1 || m_ < 1) throw std::invalid_argument("GossipGraph: n, m >= 1");
  if (pre_local_.size() != edges_.size())
    throw std::invalid_argument("GossipGraph: one pre-local per edge");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw std::invalid_argument("GossipGraph: self-loop");
    if (e.u < 0 || e.v >= n_) throw std::invalid_argument("GossipGraph: bad edge");
    if (!seen.insert({e.u, e.v}).second)
      throw std::invalid_argument("GossipGraph: duplicate edge");
  }
  local_.reserve(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i)
    local_.push_back(assemble_local(pre_local_[i], edges_[i].u, edges_[i].v,
                                    n_, m_));
}

int GossipGraph::edge_id(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].u == a && edges_[i].v == b) return static_cast<int>(i);
  return -1;
}

RMat transition_matrix(const GossipGraph& g, const EdgeSequence& seq, int s,
                       int t) {
  if (s < 0 || t > static_cast<int>(seq.size()) || s > t)
    throw std::out_of_range("transition_matrix: bad range");
  RMat P = RMat::Identity(g.dim(), g.dim());
  for (int k = s; k < t; ++k) P = (g.local(seq[k]) * P).eval();
  return P;
}

RMat transition_matrix(const GossipGraph& g, const EdgeSequence& seq) {
  return transition_matrix(g, seq, 0, static_cast<int>(seq.size()));
}

EdgeSequence cycle_edges(const GossipGraph& g, const PointedCycle& c) {
  EdgeSequence seq;
  const int k = c.length();
  for (int i = 0; i < k; ++i) {
    int id = g.edge_id(c.nodes[i], c.nodes[(i + 1) % k]);
    if (id < 0) throw std::invalid_argument("cycle_edges: not a cycle of G");
    seq.push_back(id);
  }
  return seq;
}

RMat cycle_transition(const GossipGraph& g, const PointedCycle& c) {
  return transition_matrix(g, cycle_edges(g, c));
}

std::vector<Edge> find_bridges(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
  for (size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].push_back({edges[i].v, static_cast<int>(i)});
    adj[edges[i].v].push_back({edges[i].u, static_cast<int>(i)});
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<Edge> bridges;
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int v, int in_edge) {
    disc[v] = low[v] = timer++;
    for (auto [to, id] : adj[v]) {
      if (id == in_edge) continue;
      if (disc[to] != -1) {
        low[v] = std::min(low[v], disc[to]);
      } else {
        dfs(to, id);
        low[v] = std::min(low[v], low[to]);
        if (low[to] > disc[v]) bridges.push_back(edges[id]);
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[v] == -1) dfs(v, -1);
  std::sort(bridges.begin(), bridges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return bridges;
}

bool is_bridgeless(int n, const std::vector<Edge>& edges) {
  return find_bridges(n, edges).empty();
}

bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n == 0) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

std::vector<PointedCycle> enumerate_cycles(const GossipGraph& g, int cap) {
  const int n = g.n();
  std::vector<std::vector<int>> adj(n);
  for (auto& e : g.edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<PointedCycle> out;
  std::vector<int> path;
  std::vector<bool> on_path(n, false);
  // Backtracking rooted at the smallest node of each cycle: only nodes > s
  // may appear after the basepoint, so every simple cycle is produced exactly
  // once per orientation.
  std::function<void(int, int)> extend = [&](int s, int v) {
    for (int w : adj[v]) {
      if (w == s && path.size() >= 3) {
        if (static_cast<int>(out.size()) >= cap)
          throw std::length_error("enumerate_cycles: cycle cap exceeded");
        out.push_back(PointedCycle{path});
      } else if (w > s && !on_path[w]) {
        path.push_back(w);
        on_path[w] = true;
        extend(s, w);
        on_path[w] = false;
        path.pop_back();
      }
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path[s] = true;
    extend(s, s);
    on_path[s] = false;
  }
  return out;
}

std::vector<int> covered_agents(const PointedCycle& c) {
  std::vector<int> agents = c.nodes;
  std::sort(agents.begin(), agents.end());
  return agents;
}

IndexSet agent_state_indices(const std::vector<int>& agents, int m) {
  IndexSet idx;
  for (int a : agents)
    for (int k = 0; k < m; ++k) idx.push_back(a * m + k);
  return idx;
}

RMat restrict_matrix(const RMat& A, const PointedCycle& c, int m) {
  IndexSet idx = agent_state_indices(covered_agents(c), m);
  RMat B(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) B(i, j) = A(idx[i], idx[j]);
  return B;
}

RRow restrict_vector(const RRow& w, const PointedCycle& c, int m) {
  IndexSet idx = agent_state_indices(covered_agents(c), m);
  RRow v(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) v(i) = w(idx[i]);
  return v;
}

Diagnostics validate(const GossipGraph& g) {
  Diagnostics d;
  d.simple = true;  // enforced by the constructor
  d.connected = is_connected(g.n(), g.edges());
  if (!d.connected) d.issues.push_back("graph is not connected");
  d.bridges = find_bridges(g.n(), g.edges());
  d.bridgeless = d.bridges.empty();
  for (auto& b : d.bridges)
    d.issues.push_back("bridge present: (v" + std::to_string(b.u + 1) + ",v" +
                       std::to_string(b.v + 1) + ")");
  d.matrices_ok = true;
  for (size_t i = 0; i < g.edges().size(); ++i) {
    if (!is_row_stochastic(g.pre_local(static_cast<int>(i)))) {
      d.matrices_ok = false;
      d.issues.push_back("edge (" + std::to_string(g.edges()[i].u + 1) + "," +
                         std::to_string(g.edges()[i].v + 1) +
                         ") is not row-stochastic");
    }
  }
  if (d.connected) {
    try {
      d.has_cycles = !enumerate_cycles(g).empty();
    } catch (const std::runtime_error&) {
      d.has_cycles = true;  // cap exceeded still means cycles exist
    }
    if (!d.has_cycles)
      d.issues.push_back("no cycles of length > 2 — holonomy undefined");
  }
  return d;
}

}  // namespace gossip
