#include "gossip/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

namespace gossip {

namespace {

template <typename S>
S from_rational(const Rational& q);
template <>
Rational from_rational<Rational>(const Rational& q) {
  return q;
}
template <>
double from_rational<double>(const Rational& q) {
  return q.get_d();
}

double as_double(const Rational& q) { return q.get_d(); }
double as_double(double x) { return x; }

}  // namespace

template <typename S>
Col<S> simulate(const GossipGraph& g, const EdgeSequence& schedule, Col<S> x) {
  const int m = g.m();
  if (x.size() != g.dim())
    throw std::invalid_argument("simulate: state dimension mismatch");
  Col<S> pair(2 * m), next(2 * m);
  for (int e : schedule) {
    if (e < 0 || e >= static_cast<int>(g.edges().size()))
      throw std::out_of_range("simulate: bad edge id in schedule");
    const Edge& ed = g.edges()[e];
    const RMat& pre = g.pre_local(e);
    for (int k = 0; k < m; ++k) {
      pair(k) = x(ed.u * m + k);
      pair(m + k) = x(ed.v * m + k);
    }
    for (int i = 0; i < 2 * m; ++i) {
      S acc(0);
      for (int j = 0; j < 2 * m; ++j)
        acc += from_rational<S>(pre(i, j)) * pair(j);
      next(i) = acc;
    }
    for (int k = 0; k < m; ++k) {
      x(ed.u * m + k) = next(k);
      x(ed.v * m + k) = next(m + k);
    }
  }
  return x;
}

template RCol simulate<Rational>(const GossipGraph&, const EdgeSequence&,
                                 RCol);
template DCol simulate<double>(const GossipGraph&, const EdgeSequence&, DCol);

Partition global_partition(const GraphHolonomy& h) {
  if (!h.holonomic)
    throw std::domain_error("global_partition: graph is not w-holonomic");
  if (h.no_cycles || h.cycles.empty())
    throw std::domain_error("global_partition: graph has no cycles");
  Partition out = h.cycles.front().partition.partition;
  for (size_t c = 1; c < h.cycles.size(); ++c)
    out = merge_partitions(out, h.cycles[c].partition.partition);
  return out;
}

std::optional<Rational> epsilon_bound(const GraphHolonomy& h) {
  std::optional<Rational> eps;
  for (const auto& ca : h.cycles) {
    for (const auto& blk : ca.partition.partition.blocks) {
      RMat B(blk.size(), blk.size());
      for (size_t i = 0; i < blk.size(); ++i)
        for (size_t j = 0; j < blk.size(); ++j) B(i, j) = ca.P(blk[i], blk[j]);
      Rational e = min_entry(B);
      if (!eps || e < *eps) eps = e;
    }
  }
  return eps;
}

std::vector<RRow> predicted_limit_blocks(const RRow& w, const Partition& pg) {
  std::vector<RRow> out;
  for (const auto& blk : pg.blocks) {
    RRow p(blk.size());
    Rational sum(0);
    for (size_t j = 0; j < blk.size(); ++j) {
      p(j) = w(blk[j]);
      sum += p(j);
    }
    if (sum == Rational(0))
      throw std::domain_error("predicted_limit_blocks: zero-mass block");
    for (size_t j = 0; j < blk.size(); ++j) p(j) /= sum;
    out.push_back(p);
  }
  return out;
}

bool PermGroup::contains(const std::vector<int>& p) const {
  return std::find(elements.begin(), elements.end(), p) != elements.end();
}

PermGroup limit_group(const GraphHolonomy& h, const Partition& pg, long cap) {
  PermGroup grp;
  grp.domain = pg.block0;
  const int d = static_cast<int>(pg.block0.size());
  std::vector<int> id(d);
  std::iota(id.begin(), id.end(), 0);

  std::set<std::vector<int>> gens;
  for (const auto& ca : h.cycles)
    gens.insert(permutation_on(ca.P, pg.block0));
  gens.erase(id);
  grp.generators.assign(gens.begin(), gens.end());

  std::set<std::vector<int>> closure{id};
  std::queue<std::vector<int>> todo;
  todo.push(id);
  while (!todo.empty()) {
    std::vector<int> x = todo.front();
    todo.pop();
    for (const auto& gperm : grp.generators) {
      std::vector<int> y(d);
      for (int i = 0; i < d; ++i) y[i] = x[gperm[i]];
      if (closure.insert(y).second) {
        if (static_cast<long>(closure.size()) > cap)
          throw std::domain_error("limit_group: closure exceeds cap");
        todo.push(y);
      }
    }
  }
  grp.elements.assign(closure.begin(), closure.end());
  return grp;
}

namespace {

// Tolerant one-line extraction of the block0 restriction of P; nullopt when
// the rows are not (numerically) a permutation closed on block0.
template <typename S>
std::optional<std::vector<int>> extract_perm(const Mat<S>& P,
                                             const IndexSet& block0,
                                             double tol) {
  const int d = static_cast<int>(block0.size());
  std::vector<int> pos(P.rows(), -1);
  for (int k = 0; k < d; ++k) pos[block0[k]] = k;
  std::vector<int> perm(d, -1);
  std::vector<bool> hit(d, false);
  for (int k = 0; k < d; ++k) {
    int one = -1;
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      double v = as_double(P(block0[k], j));
      if (std::abs(v - 1.0) <= tol) {
        if (one >= 0 || pos[j] < 0) return std::nullopt;
        one = pos[j];
      } else if (std::abs(v) > tol) {
        return std::nullopt;
      }
    }
    if (one < 0 || hit[one]) return std::nullopt;
    perm[k] = one;
    hit[one] = true;
  }
  return perm;
}

template <typename S>
S block_seminorm(const Mat<S>& P, const Partition& pg) {
  S best(0);
  for (const auto& blk : pg.blocks) {
    Mat<S> B(blk.size(), blk.size());
    for (size_t i = 0; i < blk.size(); ++i)
      for (size_t j = 0; j < blk.size(); ++j) B(i, j) = P(blk[i], blk[j]);
    S s = seminorm(B);
    if (s > best) best = s;
  }
  return best;
}

template <typename S>
double offblock_mass(const Mat<S>& P, const Partition& pg) {
  const int n = pg.dim;
  std::vector<int> label(n, -2);  // -1: block0, k >= 0: block k
  for (int i : pg.block0) label[i] = -1;
  for (size_t b = 0; b < pg.blocks.size(); ++b)
    for (int i : pg.blocks[b]) label[i] = static_cast<int>(b);
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (label[i] != label[j])
        worst = std::max(worst, std::abs(as_double(P(i, j))));
  return worst;
}

template <typename S>
void run_core(const std::vector<Mat<S>>& weights,
              const std::vector<int>& cycle_seq, const Partition& pg,
              const ConvergenceOptions& opts, long chk, double perm_tol,
              const S& slack, LimitReport& rep) {
  const int dim = pg.dim;
  Mat<S> P = Mat<S>::Identity(dim, dim);
  const double eps_d = rep.has_epsilon ? to_double(rep.epsilon) : 0.0;

  std::set<std::vector<int>> observed;
  bool collecting = false;
  long collect_left = 0;
  long checkpoint = 0;
  S prev(0);
  bool have_prev = false;

  for (long r = 1; r <= opts.max_reps; ++r) {
    for (int c : cycle_seq) {
      P = (weights[c] * P).eval();
      if (collecting) {
        auto pi = extract_perm(P, pg.block0, perm_tol);
        if (pi) observed.insert(*pi);
      }
    }
    rep.reps_used = r;

    if (collecting) {
      if (--collect_left == 0) break;
      continue;
    }

    bool at_checkpoint = pg.blocks.empty() || (r % chk == 0);
    if (!at_checkpoint) continue;

    S s = block_seminorm(P, pg);
    ++checkpoint;
    if (!pg.blocks.empty()) {
      TraceRow row;
      row.checkpoint = checkpoint;
      row.reps = r;
      row.seminorm = as_double(s);
      row.bound = rep.has_epsilon ? std::pow(1.0 - eps_d, checkpoint) : 0.0;
      for (const auto& blk : pg.blocks) {
        Mat<S> B(blk.size(), blk.size());
        for (size_t i = 0; i < blk.size(); ++i)
          for (size_t j = 0; j < blk.size(); ++j) B(i, j) = P(blk[i], blk[j]);
        row.per_block.push_back(as_double(seminorm(B)));
      }
      rep.trace.push_back(row);
      if constexpr (std::is_same_v<S, Rational>) rep.trace_exact.push_back(s);
      if (have_prev && s > prev + slack) {
        rep.error = "contraction violated at walk " + std::to_string(r);
        return;
      }
      prev = s;
      have_prev = true;
    }
    if (as_double(s) < opts.tol) {
      rep.converged = true;
      auto pi = extract_perm(P, pg.block0, perm_tol);
      long ord = 1;
      if (pi) {
        observed.insert(*pi);
        ord = permutation_order(*pi);
      }
      collecting = true;
      collect_left = ord;
    }
  }

  if (!rep.converged) {
    if (rep.error.empty())
      rep.error = "not converged after " + std::to_string(rep.reps_used) +
                  " exhaustive walks";
    return;
  }

  rep.final_seminorm = as_double(block_seminorm(P, pg));
  rep.max_offblock = offblock_mass(P, pg);
  auto pi = extract_perm(P, pg.block0, perm_tol);
  rep.perm_part_valid = pi.has_value();
  rep.observed_perms.assign(observed.begin(), observed.end());
  rep.perm_in_group =
      !observed.empty() &&
      std::all_of(observed.begin(), observed.end(),
                  [&](const std::vector<int>& p) { return rep.group.contains(p); });
  for (const auto& blk : pg.blocks) {
    DMat B(blk.size(), blk.size());
    for (size_t i = 0; i < blk.size(); ++i)
      for (size_t j = 0; j < blk.size(); ++j)
        B(i, j) = as_double(P(blk[i], blk[j]));
    rep.measured_blocks.push_back(B);
  }
}

}  // namespace

LimitReport run_to_convergence(const GossipGraph& g, const GraphHolonomy& h,
                               const DerivedGraph& d, const DerivedWalk& walk,
                               const ConvergenceOptions& opts) {
  if (!is_exhaustive_closed(walk, d))
    throw std::invalid_argument(
        "run_to_convergence: walk is not exhaustive closed");
  (void)g;

  LimitReport rep;
  rep.partition = global_partition(h);
  rep.predicted = predicted_limit_blocks(h.w, rep.partition);
  if (auto eps = epsilon_bound(h)) {
    rep.epsilon = *eps;
    rep.has_epsilon = true;
  }
  for (const auto& blk : rep.partition.blocks)
    rep.l_g = std::max(rep.l_g, static_cast<long>(blk.size()));
  rep.group = limit_group(h, rep.partition);

  long chk = opts.checkpoint_walks > 0 ? opts.checkpoint_walks
                                       : std::max(1L, (rep.l_g + 1) / 2);

  // Chronological order of cycle traversals: reversed walk order under psi.
  std::vector<int> cycle_seq;
  for (auto it = walk.rbegin(); it != walk.rend(); ++it)
    cycle_seq.push_back(d.edges[*it].cycle_id);

  if (opts.exact) {
    std::vector<RMat> weights;
    for (const auto& ca : d.cycles) weights.push_back(ca.P);
    run_core<Rational>(weights, cycle_seq, rep.partition, opts, chk, 0.0,
                       Rational(0), rep);
  } else {
    std::vector<DMat> weights;
    for (const auto& ca : d.cycles) weights.push_back(to_double(ca.P));
    run_core<double>(weights, cycle_seq, rep.partition, opts, chk, 1e-9,
                     1e-12, rep);
  }
  return rep;
}

TheoremVerdict verify_theorem(const GossipGraph& g, const RRow& w,
                              const std::vector<std::uint64_t>& walk_seeds,
                              const ConvergenceOptions& opts) {
  TheoremVerdict v;
  Diagnostics diag = validate(g);
  v.preconditions = diag.theorem_preconditions() && diag.has_cycles;
  v.precondition_issues = diag.issues;
  if (!v.preconditions) return v;

  GraphHolonomy h = analyze_graph(g, w);
  if (!h.holonomic) {
    v.preconditions = false;
    std::string msg = "graph is not w-holonomic; offending cycles:";
    for (int id : h.offending) {
      msg += " [";
      for (int n : h.cycles[id].cycle.nodes) msg += "v" + std::to_string(n + 1);
      msg += "]";
    }
    v.precondition_issues.push_back(msg);
    return v;
  }

  DerivedGraph d = build_derived_graph(g, h);
  const double off_tol = opts.exact ? 0.0 : opts.tol;
  const double match_tol = 10 * opts.tol;

  for (std::uint64_t seed : walk_seeds) {
    DerivedWalk walk = exhaustive_closed_walk(d, seed);
    LimitReport rep = run_to_convergence(g, h, d, walk, opts);
    if (v.group_size == 0) v.group_size = rep.group.size();

    ClauseVerdict cv;
    cv.walk_seed = seed;
    cv.converged = rep.converged;
    cv.observed_size = static_cast<long>(rep.observed_perms.size());
    cv.finite_limit_set = rep.converged && cv.observed_size >= 1 &&
                          cv.observed_size <= rep.group.size() &&
                          rep.perm_in_group;
    cv.block_diagonal =
        rep.converged && rep.perm_part_valid && rep.max_offblock <= off_tol;
    cv.rank_one_vacuous = rep.partition.blocks.empty();
    if (cv.rank_one_vacuous) {
      cv.rank_one_blocks = rep.converged;
    } else if (rep.converged) {
      bool ok = true;
      for (size_t b = 0; b < rep.measured_blocks.size() && ok; ++b) {
        DRow p = to_double(rep.predicted[b]);
        const DMat& M = rep.measured_blocks[b];
        for (Eigen::Index i = 0; i < M.rows() && ok; ++i)
          for (Eigen::Index j = 0; j < M.cols() && ok; ++j)
            ok = std::abs(M(i, j) - p(j)) <= match_tol;
      }
      cv.rank_one_blocks = ok;
    }
    cv.detail = rep.error;
    v.walks.push_back(cv);
  }
  return v;
}

namespace {

// 2m x 2m pre-local for m = 2 over coordinates (u1, u2, v1, v2): the first
// components swap or stay, the second components average with a symmetric
// doubly stochastic [[a, 1-a], [1-a, a]].
RMat pre_m2(bool swap, const Rational& a) {
  RMat P = RMat::Zero(4, 4);
  if (swap) {
    P(0, 2) = 1;
    P(2, 0) = 1;
  } else {
    P(0, 0) = 1;
    P(2, 2) = 1;
  }
  P(1, 1) = a;
  P(1, 3) = Rational(1) - a;
  P(3, 1) = Rational(1) - a;
  P(3, 3) = a;
  return P;
}

Rational canon(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational dyadic_avg(std::mt19937_64& rng) {
  // a = k/16 with k in [5, 11]: entries stay dyadic for exact float mirrors
  return canon(5 + static_cast<long>(rng() % 7), 16);
}

// Smallest nonzero entry of the second-component block of the oriented cycle
// product, multiplied out directly over the covered agents.
Rational even_block_min(const std::vector<int>& cycle,
                        const std::map<std::pair<int, int>, Rational>& avg) {
  std::vector<int> covered = cycle;
  std::sort(covered.begin(), covered.end());
  const int d = static_cast<int>(covered.size());
  auto pos = [&](int node) {
    return static_cast<int>(std::lower_bound(covered.begin(), covered.end(),
                                             node) -
                            covered.begin());
  };
  RMat M = RMat::Identity(d, d);
  const int k = static_cast<int>(cycle.size());
  for (int s = 0; s < k; ++s) {
    int x = cycle[s], y = cycle[(s + 1) % k];
    auto it = avg.find({std::min(x, y), std::max(x, y)});
    Rational a = it->second;
    RMat E = RMat::Identity(d, d);
    int px = pos(x), py = pos(y);
    E(px, px) = a;
    E(px, py) = Rational(1) - a;
    E(py, px) = Rational(1) - a;
    E(py, py) = a;
    M = (E * M).eval();
  }
  Rational best(0);
  bool found = false;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (M(i, j) != Rational(0) && (!found || M(i, j) < best)) {
        best = M(i, j);
        found = true;
      }
  return best;
}

Fixture make_f1() {
  RMat swap(2, 2), id = RMat::Identity(2, 2);
  swap << 0, 1, 1, 0;
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  std::vector<RMat> pre{swap, swap, id};
  RRow w(3);
  w << Rational(1, 2), Rational(1, 3), Rational(1, 6);

  Fixture f{GossipGraph(3, 1, edges, pre), w, {}, Partition{}, std::nullopt,
            3, {}};
  f.order_by_nodes[{0, 1, 2}] = 3;
  f.global.dim = 3;
  f.global.block0 = {0, 1, 2};
  return f;
}

Fixture make_mixing(int n, const std::vector<Edge>& edges,
                    const std::vector<bool>& swaps, const RRow& w,
                    const std::vector<std::vector<int>>& oriented_cycles,
                    const std::map<std::vector<int>, long>& orders,
                    long group_size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::pair<int, int>, Rational> avg;
  std::vector<RMat> pre;
  for (size_t e = 0; e < edges.size(); ++e) {
    Rational a = dyadic_avg(rng);
    avg[{edges[e].u, edges[e].v}] = a;
    pre.push_back(pre_m2(swaps[e], a));
  }

  Fixture f{GossipGraph(n, 2, edges, pre), w, orders, Partition{},
            std::nullopt, group_size, {}};
  f.global.dim = 2 * n;
  IndexSet evens;
  for (int i = 0; i < n; ++i) {
    f.global.block0.push_back(2 * i);
    evens.push_back(2 * i + 1);
  }
  f.global.blocks.push_back(evens);
  RRow p(n);
  for (int i = 0; i < n; ++i) p(i) = Rational(1, n);
  f.limit_blocks.push_back(p);

  for (const auto& c : oriented_cycles) {
    Rational e = even_block_min(c, avg);
    if (!f.epsilon || e < *f.epsilon) f.epsilon = e;
  }
  return f;
}

Fixture make_f2(std::uint64_t seed) {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}, {0, 3}, {2, 3}};
  std::vector<bool> swaps{true, true, false, false, false};
  RRow w(8);
  w << canon(16, 64), canon(4, 64), canon(13, 64), canon(4, 64),
      canon(11, 64), canon(4, 64), canon(8, 64), canon(4, 64);
  std::map<std::vector<int>, long> orders{
      {{0, 1, 2}, 3}, {{0, 2, 3}, 1}, {{0, 1, 2, 3}, 3}};
  std::vector<std::vector<int>> oriented{{0, 1, 2},    {0, 2, 1},
                                         {0, 2, 3},    {0, 3, 2},
                                         {0, 1, 2, 3}, {0, 3, 2, 1}};
  return make_mixing(4, edges, swaps, w, oriented, orders, 3, seed);
}

Fixture make_f3(std::uint64_t seed) {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4},
                          {0, 4}, {4, 5}, {5, 6}, {4, 6}};
  std::vector<bool> swaps(9, true);
  RRow w(14);
  for (int i = 0; i < 7; ++i) {
    w(2 * i) = canon(9 + i, 112);
    w(2 * i + 1) = canon(4, 112);
  }
  std::map<std::vector<int>, long> orders{
      {{0, 1, 2}, 2}, {{0, 3, 4}, 2}, {{4, 5, 6}, 2}};
  std::vector<std::vector<int>> oriented{{0, 1, 2}, {0, 2, 1}, {0, 3, 4},
                                         {0, 4, 3}, {4, 5, 6}, {4, 6, 5}};
  return make_mixing(7, edges, swaps, w, oriented, orders, 8, seed);
}

}  // namespace

Fixture gen_fixture(const std::string& kind, std::uint64_t seed) {
  if (kind == "F1") return make_f1();
  if (kind == "F2") return make_f2(seed);
  if (kind == "F3") return make_f3(seed);
  throw std::invalid_argument("gen_fixture: unknown kind '" + kind + "'");
}

}  // namespace gossip
