#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gvdtg/connectivity.hpp"
#include "gvdtg/grid.hpp"
#include "gvdtg/topology.hpp"

namespace gvdtg {

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CostParams {
  double alpha = 0.1;
  double beta = 0.05;
  double gamma = 0.9;  // switching hysteresis
  void validate() const;
};

constexpr double kUnreachableCost = std::numeric_limits<double>::infinity();

enum class Branch { kStraight, kTopological, kUnreachable };

const char* to_string(Branch b);

struct Candidate {
  int node = -1;
  Cell cell;
  double d_t = 0.0;    // straight-line distance, cells
  double theta = 0.0;  // heading change in [0, pi]
  bool straight_ok = false;
  double t = 0.0;      // hop + topological path + terminal leg, cells
  int n = 0;           // intermediate topological nodes
  double d_e = 0.0;    // terminal distance, cells
  double cost = kUnreachableCost;
  Branch branch = Branch::kUnreachable;
  std::vector<int> route;  // graph node ids from the hop node to the path end node
  bool reachable() const { return branch != Branch::kUnreachable; }
};

/// Cost of each formula branch, exposed for direct checks.
double straight_cost(double d_t, double theta, const CostParams& p);
double topological_cost(double t, int n, double theta, double d_e, const CostParams& p);

/// |angle between heading and the bearing from `from` to `to`|, folded to [0, pi].
double heading_change(Cell from, double heading, Cell to);

/// Robot-side state shared by every candidate of one planning cycle: the hop
/// to the nearest graph node and the shortest paths out of it.
class PlanContext {
 public:
  PlanContext(const TopoGraph& graph, const OccupancyGrid& grid, ConnectivityCache& cache, Cell robot,
              double heading);
  Cell robot() const { return robot_; }
  double heading() const { return heading_; }
  int hop_node() const { return hop_node_; }
  double hop_length() const { return hop_length_; }
  const ShortestPaths* paths() const { return paths_ ? &*paths_ : nullptr; }

 private:
  Cell robot_;
  double heading_;
  int hop_node_ = -1;
  double hop_length_ = 0.0;
  std::optional<ShortestPaths> paths_;
};

Candidate evaluate(const PlanContext& ctx, int node, const TopoGraph& graph, const OccupancyGrid& grid,
                   ConnectivityCache& cache, const CostParams& params);

/// Argmin of cost; ties by smaller D_t, then smaller node id.
/// Throws PlannerError("no reachable frontier") when every cost is infinite.
const Candidate& select(const std::vector<Candidate>& candidates);

struct SwitchDecision {
  int node = -1;
  bool switched = false;
};

/// Keeps `current` unless the fresh best beats gamma times its fresh cost.
/// A current target missing from `candidates` is no longer a frontier and is replaced.
SwitchDecision maybe_switch(std::optional<int> current, const std::vector<Candidate>& candidates, double gamma);

}  // namespace gvdtg
