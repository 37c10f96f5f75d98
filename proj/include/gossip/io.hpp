#pragma once

// Scenario ingestion and report emission: scenario JSON (exact rationals as
// "p/q" strings), analysis / derived-graph / limit reports, DOT export,
// contraction-trace CSV, walk files, and atomic file writes.

#include <json.hpp>

#include <string>

#include "gossip/engine.hpp"

namespace gossip {

using Json = nlohmann::json;

/// Parse/validation failure with a located message ("edges[2].pre_local: ...").
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  int n = 0, m = 0;
  std::vector<Edge> edges;        // 0-based internally; 1-based on disk
  std::vector<RMat> pre_local;
  RRow weight;
  std::string mode = "exact";  // "exact" | "float"

  GossipGraph to_graph() const { return GossipGraph(n, m, edges, pre_local); }
};

/// Throws ScenarioError with a field-located message on any defect.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

/// Exact round-trip: parse_scenario(scenario_to_json(s)) reproduces s.
Json scenario_to_json(const Scenario& s);

Json partition_to_json(const Partition& p);
Json rational_row_json(const RRow& v);
Json rational_matrix_json(const RMat& A);

/// Topology verdicts, per-cycle orders/partitions, pi^G, epsilon and K
/// generators (global fields only when the graph is w-holonomic with cycles).
Json analysis_to_json(const GossipGraph& g, const Diagnostics& diag,
                      const GraphHolonomy& h);

Json derived_to_json(const DerivedGraph& d);
std::string derived_to_dot(const DerivedGraph& d);

/// Walk file: ordered list of {"cycle", "orbit_pos"} labels.
Json walk_to_json(const DerivedGraph& d, const DerivedWalk& walk);
DerivedWalk parse_walk(const DerivedGraph& d, const Json& j);

Json limit_report_to_json(const LimitReport& rep);

/// Columns: checkpoint, repetitions, block, seminorm, bound.
std::string trace_to_csv(const LimitReport& rep);

Json verdict_to_json(const TheoremVerdict& v);

/// Writes via a temp file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gossip
