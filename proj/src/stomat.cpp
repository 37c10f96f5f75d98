#include "gossip/stomat.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

namespace gossip {

SupportDigraph compose_support_graphs(const SupportDigraph& ga,
                                      const SupportDigraph& gb) {
  if (ga.dim != gb.dim)
    throw std::invalid_argument("compose_support_graphs: dimension mismatch");
  const int n = ga.dim;
  SupportDigraph g{n, std::vector<std::vector<bool>>(
                          n, std::vector<bool>(n, false))};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (ga.adj[i][k])
        for (int j = 0; j < n; ++j)
          if (gb.adj[k][j]) g.adj[i][j] = true;
  return g;
}

bool is_permutation(const RMat& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) return false;
  std::vector<bool> col_hit(n, false);
  for (int i = 0; i < n; ++i) {
    int ones = 0, target = -1;
    for (int j = 0; j < n; ++j) {
      if (A(i, j) == Rational(1)) {
        ++ones;
        target = j;
      } else if (A(i, j) != Rational(0)) {
        return false;
      }
    }
    if (ones != 1 || col_hit[target]) return false;
    col_hit[target] = true;
  }
  return true;
}

IndexSet maximal_permutation_index(const RMat& A) {
  const int n = static_cast<int>(A.rows());
  // sigma[i] = target of the unit row i, or -1.
  std::vector<int> sigma(n, -1);
  for (int i = 0; i < n; ++i) {
    int ones = 0, target = -1;
    bool unit = true;
    for (int j = 0; j < n; ++j) {
      if (A(i, j) == Rational(1)) {
        ++ones;
        target = j;
      } else if (A(i, j) != Rational(0)) {
        unit = false;
      }
    }
    if (unit && ones == 1) sigma[i] = target;
  }
  // Keep exactly the unit rows lying on a sigma-cycle: on a cycle the
  // restricted map is a bijection with row support confined to the cycle.
  IndexSet result;
  std::vector<int> state(n, 0);  // 0 unknown, 1 in progress, 2 done
  for (int s = 0; s < n; ++s) {
    if (state[s] != 0 || sigma[s] < 0) continue;
    std::vector<int> path;
    int v = s;
    while (v >= 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = sigma[v];
    }
    if (v >= 0 && state[v] == 1) {
      // found a new cycle; everything from v onwards in path is on it
      auto it = std::find(path.begin(), path.end(), v);
      for (auto p = it; p != path.end(); ++p) result.push_back(*p);
    }
    for (int p : path) state[p] = 2;
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

// Tarjan SCC on the Markov digraph i -> j iff a(i, j) != 0.
struct SccResult {
  std::vector<int> comp;  // node -> component id
  int count = 0;
};

SccResult markov_scc(const RMat& A) {
  const int n = static_cast<int>(A.rows());
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stk;
  std::vector<bool> on_stack(n, false);
  int next_index = 0;

  // iterative Tarjan
  struct Frame {
    int v;
    int j;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stk.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.j < n) {
        int w = f.j++;
        if (A(f.v, w) == Rational(0)) continue;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stk.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        if (low[v] == index[v]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on_stack[w] = false;
            r.comp[w] = r.count;
            if (w == v) break;
          }
          ++r.count;
        }
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return r;
}

}  // namespace

CanonicalForm canonical_form(const RMat& A) {
  const int n = static_cast<int>(A.rows());
  SccResult scc = markov_scc(A);

  std::vector<IndexSet> members(scc.count);
  for (int i = 0; i < n; ++i) members[scc.comp[i]].push_back(i);

  // Tarjan emits components in reverse topological order of the condensation
  // (every edge goes from a higher id to a lower one), so reversing the id
  // order puts sources first: transient classes precede the classes they
  // feed into.
  std::vector<int> order(scc.count);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());

  CanonicalForm cf;
  for (int c : order) {
    bool exits = false;
    for (int i : members[c]) {
      for (int j = 0; j < n && !exits; ++j)
        exits = A(i, j) != Rational(0) && scc.comp[j] != c;
      if (exits) break;
    }
    cf.classes.push_back(members[c]);
    cf.ergodic.push_back(!exits);
    for (int i : members[c]) cf.relabel.push_back(i);
  }
  return cf;
}

bool is_irreducible(const RMat& A) {
  return markov_scc(A).count == 1;
}

int period(const RMat& A) {
  const int n = static_cast<int>(A.rows());
  if (!is_irreducible(A)) throw std::domain_error("matrix not irreducible");
  if (n == 1) return 1;
  // BFS level gcd: for every edge u -> v, period divides level(u)+1-level(v).
  std::vector<int> level(n, -1);
  std::queue<int> q;
  level[0] = 0;
  q.push(0);
  long g = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < n; ++v) {
      if (A(u, v) == Rational(0)) continue;
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        q.push(v);
      } else {
        g = std::gcd(g, static_cast<long>(level[u] + 1 - level[v]));
      }
    }
  }
  return static_cast<int>(g == 0 ? 1 : std::abs(g));
}

std::vector<IndexSet> frobenius_form(const RMat& A) {
  const int h = period(A);  // throws if reducible
  if (h == 1) throw std::domain_error("matrix primitive");
  const int n = static_cast<int>(A.rows());
  std::vector<int> level(n, -1);
  std::queue<int> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < n; ++v)
      if (A(u, v) != Rational(0) && level[v] == -1) {
        level[v] = level[u] + 1;
        q.push(v);
      }
  }
  std::vector<IndexSet> classes(h);
  for (int i = 0; i < n; ++i) classes[((level[i] % h) + h) % h].push_back(i);
  return classes;
}

RRow perron_row_vector(const RMat& A) {
  if (!is_irreducible(A)) throw std::domain_error("matrix not irreducible");
  const int n = static_cast<int>(A.rows());
  // Solve q(A - I) = 0 with sum(q) = 1: transpose to (A^T - I) q^T = 0,
  // replace the last equation by the normalization, eliminate exactly.
  RMat M(n, n);
  RCol b = RCol::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) = A(j, i) - (i == j ? Rational(1) : Rational(0));
  for (int j = 0; j < n; ++j) M(n - 1, j) = Rational(1);
  b(n - 1) = Rational(1);

  // Gaussian elimination with exact pivoting.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (M(r, col) != Rational(0)) {
        piv = r;
        break;
      }
    if (piv == -1) throw std::domain_error("perron: singular system");
    if (piv != col) {
      M.row(piv).swap(M.row(col));
      std::swap(b(piv), b(col));
    }
    for (int r = col + 1; r < n; ++r) {
      if (M(r, col) == Rational(0)) continue;
      Rational f = M(r, col) / M(col, col);
      M.row(r) -= f * M.row(col);
      b(r) -= f * b(col);
    }
  }
  RRow q(n);
  for (int r = n - 1; r >= 0; --r) {
    Rational s = b(r);
    for (int c = r + 1; c < n; ++c) s -= M(r, c) * q(c);
    q(r) = s / M(r, r);
  }
  for (int i = 0; i < n; ++i)
    if (!(q(i) > Rational(0)))
      throw std::domain_error("perron: non-positive solution");
  return q;
}

std::vector<int> permutation_on(const RMat& A, const IndexSet& idx) {
  std::vector<int> pos(A.rows(), -1);
  for (size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
  std::vector<int> sigma(idx.size(), -1);
  std::vector<bool> hit(idx.size(), false);
  for (size_t k = 0; k < idx.size(); ++k) {
    int i = idx[k];
    int target = -1;
    for (int j = 0; j < A.cols(); ++j) {
      if (A(i, j) == Rational(0)) continue;
      if (A(i, j) != Rational(1) || target != -1 || pos[j] == -1)
        throw std::domain_error(
            "permutation_on: matrix is not a closed permutation on the index "
            "set");
      target = pos[j];
    }
    if (target == -1 || hit[target])
      throw std::domain_error(
          "permutation_on: matrix is not a closed permutation on the index "
          "set");
    sigma[k] = target;
    hit[target] = true;
  }
  return sigma;
}

long permutation_order(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  long order = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    long len = 0;
    int v = i;
    while (!seen[v]) {
      seen[v] = true;
      v = perm[v];
      ++len;
    }
    order = lcm_checked(order, len);
  }
  return order;
}

long lcm_checked(long a, long b) {
  long g = std::gcd(a, b);
  if (g == 0) return 0;
  long l = a / g;
  if (b != 0 && l > std::numeric_limits<long>::max() / b)
    throw std::overflow_error("lcm overflow");
  return l * b;
}

}  // namespace gossip
