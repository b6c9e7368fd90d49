#include "gvdtg/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include <json.hpp>

namespace gvdtg {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const char* kMetricsHeader = "world,method,seed,success,termination,steps,sim_time_s,distance_m,coverage,revisit_ratio,frames";

void metrics_row(std::ostream& out, const EpisodeMetrics& m) {
  out << m.world << ',' << m.method << ',' << m.seed << ',' << (m.success ? 1 : 0) << ',' << m.termination << ','
      << m.steps << ',' << fixed(m.sim_time, 1) << ',' << fixed(m.distance) << ',' << fixed(m.coverage) << ','
      << fixed(m.revisit_ratio) << ',' << m.frames;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = sd = 0.0;
  if (v.empty()) return;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void write_metrics_csv(std::ostream& out, const EpisodeMetrics& m) {
  out << kMetricsHeader << '\n';
  metrics_row(out, m);
  out << '\n';
}

void write_trajectory_csv(std::ostream& out, const std::vector<Pose>& trajectory) {
  out << "frame,x,y,theta\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const Pose& p = trajectory[i];
    out << i << ',' << fixed(p.x) << ',' << fixed(p.y) << ',' << fixed(p.theta) << '\n';
  }
}

void write_decisions_csv(std::ostream& out, const std::vector<DecisionRecord>& decisions) {
  out << "frame,chosen_id,C,branch,n_candidates,step,target_x,target_y,switched\n";
  for (const DecisionRecord& d : decisions) {
    out << d.frame << ',' << d.chosen_id << ',' << fixed(d.cost) << ',' << d.branch << ',' << d.n_candidates << ','
        << d.step << ',' << d.target.x << ',' << d.target.y << ',' << (d.switched ? 1 : 0) << '\n';
  }
}

void write_nodes_csv(std::ostream& out, const std::vector<GvdNode>& nodes) {
  out << "x,y,r,frame\n";
  for (const GvdNode& n : nodes) {
    out << n.center.x << ',' << n.center.y << ',' << fixed(n.radius) << ',' << n.frame << '\n';
  }
}

std::string graph_json(const TopoGraph& graph) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  doc["edges"] = nlohmann::ordered_json::array();
  doc["labels"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const TopoNode& n = graph.nodes()[i];
    doc["nodes"].push_back({{"id", i}, {"x", n.cell.x}, {"y", n.cell.y}, {"kind", to_string(n.kind)}});
  }
  for (const TopoEdge& e : graph.edges()) {
    doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"w", std::round(e.weight * 1e6) / 1e6}, {"kind", to_string(e.kind)}});
  }
  for (const Label& l : graph.labels()) doc["labels"].push_back({{"point_id", l.point_id}, {"center_id", l.center_id}});
  return doc.dump(2) + "\n";
}

std::vector<Aggregate> BenchmarkReport::aggregates() const {
  std::vector<Aggregate> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  std::vector<std::vector<double>> times, dists, revisits, coverages;
  for (const BenchRow& r : rows) {
    const auto key = std::make_pair(r.metrics.world, r.metrics.method);
    auto it = slot.find(key);
    if (it == slot.end()) {
      it = slot.emplace(key, out.size()).first;
      out.push_back({r.metrics.world, r.metrics.method});
      times.emplace_back();
      dists.emplace_back();
      revisits.emplace_back();
      coverages.emplace_back();
    }
    const std::size_t k = it->second;
    ++out[k].runs;
    if (r.metrics.success && r.error.empty()) ++out[k].successes;
    times[k].push_back(r.metrics.sim_time);
    dists[k].push_back(r.metrics.distance);
    revisits[k].push_back(r.metrics.revisit_ratio);
    coverages[k].push_back(r.metrics.coverage);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    double unused = 0.0;
    mean_std(times[k], out[k].mean_time, out[k].std_time);
    mean_std(dists[k], out[k].mean_distance, out[k].std_distance);
    mean_std(revisits[k], out[k].mean_revisit, unused);
    mean_std(coverages[k], out[k].mean_coverage, unused);
  }
  return out;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
  out << kMetricsHeader << ",error\n";
  for (const BenchRow& r : report.rows) {
    metrics_row(out, r.metrics);
    out << ',' << r.error << '\n';
  }
}

void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggregates) {
  out << "world,method,runs,successes,mean_time_s,std_time_s,mean_distance_m,std_distance_m,mean_revisit_ratio,"
         "mean_coverage\n";
  for (const Aggregate& a : aggregates) {
    out << a.world << ',' << a.method << ',' << a.runs << ',' << a.successes << ',' << fixed(a.mean_time) << ','
        << fixed(a.std_time) << ',' << fixed(a.mean_distance) << ',' << fixed(a.std_distance) << ','
        << fixed(a.mean_revisit) << ',' << fixed(a.mean_coverage) << '\n';
  }
}

BacktrackingCheck check_backtracking(const std::vector<Aggregate>& aggregates, int min_worlds,
                                     double distance_factor) {
  BacktrackingCheck check;
  std::map<std::string, std::pair<const Aggregate*, const Aggregate*>> by_world;
  for (const Aggregate& a : aggregates) {
    auto& slot = by_world[a.world];
    if (a.method == "gvd-tg") slot.first = &a;
    if (a.method == "greedy") slot.second = &a;
  }
  for (const auto& [world, pair] : by_world) {
    if (!pair.first || !pair.second) continue;
    ++check.worlds;
    if (pair.first->mean_revisit <= pair.second->mean_revisit) ++check.revisit_wins;
    if (pair.first->mean_distance <= distance_factor * pair.second->mean_distance) ++check.distance_ok;
  }
  check.pass = check.worlds > 0 && check.revisit_wins >= std::min(min_worlds, check.worlds) &&
               check.distance_ok == check.worlds;
  return check;
}

}  // namespace gvdtg
