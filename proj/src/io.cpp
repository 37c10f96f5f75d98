#include "gossip/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gossip {

namespace {

Rational parse_rat_json(const Json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) {
      mpq_class q(v.get<double>());
      q.canonicalize();
      return q;
    }
  } catch (const std::exception& e) {
    throw ScenarioError(where + ": " + e.what());
  }
  throw ScenarioError(where + ": expected rational string or number");
}

int require_int(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ScenarioError(key + ": missing or not an integer");
  return j[key].get<int>();
}

}  // namespace

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");
  Scenario s;
  s.n = require_int(j, "n");
  s.m = require_int(j, "m");
  if (s.n < 2) throw ScenarioError("n: need at least 2 agents");
  if (s.m < 1) throw ScenarioError("m: need state dimension >= 1");
  if (j.contains("mode")) {
    if (!j["mode"].is_string() ||
        (j["mode"] != "exact" && j["mode"] != "float"))
      throw ScenarioError("mode: expected \"exact\" or \"float\"");
    s.mode = j["mode"].get<std::string>();
  }

  if (!j.contains("edges") || !j["edges"].is_array() || j["edges"].empty())
    throw ScenarioError("edges: missing or empty array");
  const int d = 2 * s.m;
  for (size_t e = 0; e < j["edges"].size(); ++e) {
    const std::string where = "edges[" + std::to_string(e) + "]";
    const Json& je = j["edges"][e];
    if (!je.is_object()) throw ScenarioError(where + ": expected an object");
    int u = require_int(je, "u"), v = require_int(je, "v");  // 1-based on disk
    if (u < 1 || u > s.n || v < 1 || v > s.n)
      throw ScenarioError(where + ": node out of range 1.." +
                          std::to_string(s.n));
    if (u == v) throw ScenarioError(where + ": self-loop (" +
                                    std::to_string(u) + "," +
                                    std::to_string(v) + ")");
    if (!je.contains("pre_local") || !je["pre_local"].is_array() ||
        static_cast<int>(je["pre_local"].size()) != d)
      throw ScenarioError(where + ".pre_local: expected " + std::to_string(d) +
                          " rows");
    RMat pre(d, d);
    for (int r = 0; r < d; ++r) {
      const Json& row = je["pre_local"][r];
      if (!row.is_array() || static_cast<int>(row.size()) != d)
        throw ScenarioError(where + ".pre_local[" + std::to_string(r) +
                            "]: expected " + std::to_string(d) + " entries");
      Rational sum(0);
      for (int c = 0; c < d; ++c) {
        pre(r, c) = parse_rat_json(row[c], where + ".pre_local[" +
                                               std::to_string(r) + "][" +
                                               std::to_string(c) + "]");
        if (pre(r, c) < Rational(0))
          throw ScenarioError(where + ".pre_local: negative entry in row " +
                              std::to_string(r + 1));
        sum += pre(r, c);
      }
      if (sum != Rational(1))
        throw ScenarioError("edge (" + std::to_string(std::min(u, v)) + "," +
                            std::to_string(std::max(u, v)) + ") row " +
                            std::to_string(r + 1) + " sums to " +
                            to_string(sum));
    }
    s.edges.push_back(Edge{std::min(u, v) - 1, std::max(u, v) - 1});
    s.pre_local.push_back(pre);
  }

  if (!j.contains("weight") || !j["weight"].is_array() ||
      static_cast<int>(j["weight"].size()) != s.n * s.m)
    throw ScenarioError("weight: expected " + std::to_string(s.n * s.m) +
                        " entries");
  s.weight.resize(s.n * s.m);
  Rational sum(0);
  for (int i = 0; i < s.n * s.m; ++i) {
    s.weight(i) =
        parse_rat_json(j["weight"][i], "weight[" + std::to_string(i) + "]");
    if (!(s.weight(i) > Rational(0)))
      throw ScenarioError("weight[" + std::to_string(i) +
                          "]: must be positive (interior simplex)");
    sum += s.weight(i);
  }
  if (sum != Rational(1))
    throw ScenarioError("weight: entries sum to " + to_string(sum) +
                        ", expected 1");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

Json rational_row_json(const RRow& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_string(v(i)));
  return a;
}

Json rational_matrix_json(const RMat& A) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      row.push_back(to_string(A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["mode"] = s.mode;
  j["edges"] = Json::array();
  for (size_t e = 0; e < s.edges.size(); ++e) {
    Json je;
    je["u"] = s.edges[e].u + 1;
    je["v"] = s.edges[e].v + 1;
    je["pre_local"] = rational_matrix_json(s.pre_local[e]);
    j["edges"].push_back(je);
  }
  j["weight"] = rational_row_json(s.weight);
  return j;
}

namespace {

Json index_set_json(const IndexSet& s) {
  Json a = Json::array();
  for (int i : s) a.push_back(i + 1);  // 1-based state indices on disk
  return a;
}

Json nodes_json(const std::vector<int>& nodes) {
  Json a = Json::array();
  for (int v : nodes) a.push_back(v + 1);
  return a;
}

const char* classification_name(Holonomy h) {
  switch (h) {
    case Holonomy::NonHolonomic: return "non-holonomic";
    case Holonomy::Holonomic: return "holonomic";
    default: return "finitely-non-holonomic";
  }
}

}  // namespace

Json partition_to_json(const Partition& p) {
  Json j;
  j["dim"] = p.dim;
  j["block0"] = index_set_json(p.block0);
  j["blocks"] = Json::array();
  for (const auto& b : p.blocks) j["blocks"].push_back(index_set_json(b));
  return j;
}

Json analysis_to_json(const GossipGraph& g, const Diagnostics& diag,
                      const GraphHolonomy& h) {
  Json j;
  Json topo;
  topo["simple"] = diag.simple;
  topo["connected"] = diag.connected;
  topo["bridgeless"] = diag.bridgeless;
  topo["matrices_ok"] = diag.matrices_ok;
  topo["has_cycles"] = diag.has_cycles;
  topo["theorem_preconditions"] = diag.theorem_preconditions();
  topo["bridges"] = Json::array();
  for (const Edge& b : diag.bridges)
    topo["bridges"].push_back({b.u + 1, b.v + 1});
  topo["issues"] = diag.issues;
  j["topology"] = topo;

  j["n"] = g.n();
  j["m"] = g.m();
  j["weight"] = rational_row_json(h.w);
  j["holonomic"] = h.holonomic;
  j["no_cycles"] = h.no_cycles;
  j["cycles"] = Json::array();
  for (const auto& ca : h.cycles) {
    Json jc;
    jc["nodes"] = nodes_json(ca.cycle.nodes);
    jc["order_w"] = ca.order_w;
    jc["structural_order"] = ca.structural_order;
    jc["classification"] = classification_name(ca.classify());
    if (!ca.witness.empty()) jc["witness"] = ca.witness;
    jc["partition"] = partition_to_json(ca.partition.partition);
    jc["orbit"] = Json::array();
    for (const auto& v : ca.orbit) jc["orbit"].push_back(rational_row_json(v));
    j["cycles"].push_back(jc);
  }

  if (h.holonomic && !h.no_cycles) {
    Json global;
    Partition pg = global_partition(h);
    global["partition"] = partition_to_json(pg);
    if (auto eps = epsilon_bound(h))
      global["epsilon"] = to_string(*eps);
    else
      global["epsilon"] = "no contraction blocks";
    try {
      PermGroup grp = limit_group(h, pg);
      Json jg;
      jg["size"] = grp.size();
      jg["domain"] = index_set_json(grp.domain);
      jg["generators"] = grp.generators;
      global["group"] = jg;
    } catch (const std::exception& e) {
      global["group"] = Json{{"error", e.what()}};
    }
    j["global"] = global;
  }
  return j;
}

Json derived_to_json(const DerivedGraph& d) {
  Json j;
  j["basepoint"] = d.basepoint;
  j["nodes"] = Json::array();
  for (const auto& v : d.nodes) j["nodes"].push_back(rational_row_json(v));
  j["edges"] = Json::array();
  for (const auto& e : d.edges)
    j["edges"].push_back({{"from", e.from},
                          {"to", e.to},
                          {"cycle", e.cycle_id},
                          {"orbit_pos", e.orbit_pos}});
  j["cycles"] = Json::array();
  for (const auto& ca : d.cycles)
    j["cycles"].push_back(
        {{"nodes", nodes_json(ca.cycle.nodes)}, {"order_w", ca.order_w}});
  return j;
}

std::string derived_to_dot(const DerivedGraph& d) {
  std::ostringstream out;
  out << "digraph derived {\n";
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    out << "  n" << i << " [label=\"w" << i << "\"";
    if (static_cast<int>(i) == d.basepoint) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& e : d.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"C"
        << e.cycle_id + 1 << "^" << e.orbit_pos << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

Json walk_to_json(const DerivedGraph& d, const DerivedWalk& walk) {
  Json j;
  j["walk"] = Json::array();
  for (int e : walk)
    j["walk"].push_back({{"cycle", d.edges[e].cycle_id},
                         {"orbit_pos", d.edges[e].orbit_pos}});
  return j;
}

DerivedWalk parse_walk(const DerivedGraph& d, const Json& j) {
  if (!j.contains("walk") || !j["walk"].is_array())
    throw ScenarioError("walk: missing or not an array");
  std::map<std::pair<int, int>, int> by_pos;
  for (size_t e = 0; e < d.edges.size(); ++e)
    by_pos[{d.edges[e].cycle_id, d.edges[e].orbit_pos}] = static_cast<int>(e);
  DerivedWalk walk;
  for (size_t i = 0; i < j["walk"].size(); ++i) {
    const Json& je = j["walk"][i];
    const std::string where = "walk[" + std::to_string(i) + "]";
    int c = require_int(je, "cycle"), a = require_int(je, "orbit_pos");
    auto it = by_pos.find({c, a});
    if (it == by_pos.end())
      throw ScenarioError(where + ": no derived edge (cycle " +
                          std::to_string(c) + ", orbit_pos " +
                          std::to_string(a) + ")");
    walk.push_back(it->second);
  }
  return walk;
}

Json limit_report_to_json(const LimitReport& rep) {
  Json j;
  j["partition"] = partition_to_json(rep.partition);
  Json jg;
  jg["size"] = rep.group.size();
  jg["domain"] = index_set_json(rep.group.domain);
  jg["generators"] = rep.group.generators;
  j["group"] = jg;
  j["predicted"] = Json::array();
  for (const auto& p : rep.predicted)
    j["predicted"].push_back(rational_row_json(p));
  j["epsilon"] = rep.has_epsilon ? Json(to_string(rep.epsilon))
                                 : Json("no contraction blocks");
  j["l_g"] = rep.l_g;
  j["converged"] = rep.converged;
  j["reps_used"] = rep.reps_used;
  j["final_seminorm"] = rep.final_seminorm;
  j["max_offblock"] = rep.max_offblock;
  j["perm_part_valid"] = rep.perm_part_valid;
  j["perm_in_group"] = rep.perm_in_group;
  j["observed_perms"] = rep.observed_perms;
  j["observed_limit_set_size"] = rep.observed_perms.size();
  j["measured_blocks"] = Json::array();
  for (const auto& M : rep.measured_blocks) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
      rows.push_back(row);
    }
    j["measured_blocks"].push_back(rows);
  }
  j["trace"] = Json::array();
  for (const auto& t : rep.trace)
    j["trace"].push_back({{"checkpoint", t.checkpoint},
                          {"reps", t.reps},
                          {"seminorm", t.seminorm},
                          {"bound", t.bound}});
  if (!rep.error.empty()) j["error"] = rep.error;
  return j;
}

std::string trace_to_csv(const LimitReport& rep) {
  std::ostringstream out;
  out << "checkpoint,repetitions,block,seminorm,bound\n";
  out.precision(17);
  for (const auto& t : rep.trace) {
    if (t.per_block.empty()) {
      out << t.checkpoint << "," << t.reps << ",0," << t.seminorm << ","
          << t.bound << "\n";
      continue;
    }
    for (size_t b = 0; b < t.per_block.size(); ++b)
      out << t.checkpoint << "," << t.reps << "," << b + 1 << ","
          << t.per_block[b] << "," << t.bound << "\n";
  }
  return out.str();
}

Json verdict_to_json(const TheoremVerdict& v) {
  Json j;
  j["preconditions"] = v.preconditions;
  j["precondition_issues"] = v.precondition_issues;
  j["group_size"] = v.group_size;
  j["walks"] = Json::array();
  for (const auto& cv : v.walks) {
    Json jw;
    jw["walk_seed"] = cv.walk_seed;
    jw["converged"] = cv.converged;
    jw["finite_limit_set"] = cv.finite_limit_set;
    jw["block_diagonal"] = cv.block_diagonal;
    jw["rank_one_blocks"] = cv.rank_one_blocks;
    jw["rank_one_vacuous"] = cv.rank_one_vacuous;
    jw["observed_limit_set_size"] = cv.observed_size;
    jw["all_pass"] = cv.all_pass();
    if (!cv.detail.empty()) jw["detail"] = cv.detail;
    j["walks"].push_back(jw);
  }
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace gossip
