#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gvdtg/gvd.hpp"
#include "gvdtg/sim.hpp"
#include "gvdtg/topology.hpp"

namespace gvdtg {

void write_metrics_csv(std::ostream& out, const EpisodeMetrics& m);
void write_trajectory_csv(std::ostream& out, const std::vector<Pose>& trajectory);
void write_decisions_csv(std::ostream& out, const std::vector<DecisionRecord>& decisions);
void write_nodes_csv(std::ostream& out, const std::vector<GvdNode>& nodes);
/// {"nodes": [{id, x, y, kind}], "edges": [{a, b, w, kind}], "labels": [{point_id, center_id}]}
std::string graph_json(const TopoGraph& graph);

struct BenchRow {
  EpisodeMetrics metrics;  // trajectory left empty
  std::string error;       // set when the run threw
};

struct Aggregate {
  std::string world;
  std::string method;
  int runs = 0;
  int successes = 0;
  double mean_time = 0.0;  // s
  double std_time = 0.0;   // sample standard deviation, 0 for a single run
  double mean_distance = 0.0;
  double std_distance = 0.0;
  double mean_revisit = 0.0;
  double mean_coverage = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchRow> rows;
  /// One entry per (world, method) in first-appearance order.
  std::vector<Aggregate> aggregates() const;
};

void write_report_csv(std::ostream& out, const BenchmarkReport& report);
void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggregates);

/// Backtracking comparison of gvd-tg against greedy: revisit ratio no worse on
/// at least `min_worlds` worlds, and every world-mean distance within
/// `distance_factor` of greedy's world-mean on the same world.
struct BacktrackingCheck {
  int worlds = 0;
  int revisit_wins = 0;
  int distance_ok = 0;
  bool pass = false;
};

BacktrackingCheck check_backtracking(const std::vector<Aggregate>& aggregates, int min_worlds = 3,
                                     double distance_factor = 1.1);

}  // namespace gvdtg
