#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gvdtg/connectivity.hpp"
#include "gvdtg/grid.hpp"
#include "gvdtg/gvd.hpp"

namespace gvdtg {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q-quantile of pairwise Euclidean distances (linear interpolation at q * (m - 1)).
/// Inputs above `max_points` are subsampled with a seeded generator.
double bandwidth(std::span<const Cell> points, double q = 0.3, std::uint64_t seed = 0, std::size_t max_points = 2000);

struct MeanShiftParams {
  double conv_eps = 0.1;       // cells
  int max_iters = 50;
  double merge_factor = 0.5;   // merge distance = merge_factor * bandwidth
  std::size_t leaf_capacity = 16;
};

struct Clustering {
  std::vector<Cell> centers;  // all on free cells
  std::vector<int> labels;    // per input point, index into centers
  std::vector<Point2> modes;  // converged position per seed
};

/// Connectivity-constrained mean shift. Neighborhoods only include points in
/// line of sight of the current center; labels go to the nearest visible center,
/// and a point that sees no center becomes its own.
Clustering mean_shift(std::span<const Cell> points, const OccupancyGrid& grid, ConnectivityCache& cache,
                      double bandwidth, const MeanShiftParams& params = {});

/// Nearest free cell to `c` by Euclidean distance, ties (y, x); c itself when free.
std::optional<Cell> snap_to_free(const OccupancyGrid& grid, Cell c, int max_radius);

enum class NodeKind { kCenter, kGvd };
enum class EdgeKind { kStraight, kGvdChain, kAstar };

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

struct TopoNode {
  Cell cell;
  NodeKind kind = NodeKind::kGvd;
  double radius = 0.0;
  int source = -1;  // index into the GVD node list or the cluster-center list
};

struct TopoEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::kStraight;
  std::vector<Cell> path;  // realized cell path from a to b
};

struct Label {
  int point_id = 0;   // GVD node index
  int center_id = 0;  // graph node id of the assigned center
};

class TopoGraph {
 public:
  int add_node(const TopoNode& n);
  void add_edge(TopoEdge e);

  const std::vector<TopoNode>& nodes() const { return nodes_; }
  const std::vector<TopoEdge>& edges() const { return edges_; }
  const std::vector<int>& incident(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }
  std::vector<Label>& labels() { return labels_; }
  const std::vector<Label>& labels() const { return labels_; }

  /// Component id per node; ids are dense and ordered by smallest member.
  std::vector<int> components() const;
  int component_count() const;

  bool isolated(int node) const { return isolated_.empty() ? false : isolated_[static_cast<std::size_t>(node)] != 0; }
  void set_isolated(int node, bool v);
  bool has_edge(int a, int b) const;

  /// Center node assigned to a GVD node's graph id, or the node itself.
  int center_of(int node) const;

 private:
  std::vector<TopoNode> nodes_;
  std::vector<TopoEdge> edges_;
  std::vector<std::vector<int>> adjacency_;  // edge indices
  std::vector<Label> labels_;
  std::vector<std::uint8_t> isolated_;
};

/// Graph with cluster centers first (ids 0..K-1) then GVD nodes (K..K+N-1).
TopoGraph build_graph(std::span<const GvdNode> gvd, const Clustering& clusters, const OccupancyGrid& grid,
                      bool unknown_blocks = true);

struct ConnectStats {
  int straight = 0;
  int chain = 0;
  int astar = 0;
  int isolated_components = 0;
};

/// Straight edges between visible pairs within `edge_radius`, then joins the
/// smallest component to the rest via GVD-node chains, falling back to
/// bidirectional A*. Components that cannot be joined are flagged isolated.
ConnectStats connect_components(TopoGraph& graph, const OccupancyGrid& grid, ConnectivityCache& cache,
                                double edge_radius);

struct TopoPath {
  std::vector<int> nodes;
  double length = 0.0;   // T
  int intermediate = 0;  // N
};

/// Single-source minimum-weight paths. Ties prefer fewer hops, then the
/// lexicographically smaller node sequence.
class ShortestPaths {
 public:
  ShortestPaths(const TopoGraph& graph, int source);
  bool reachable(int node) const { return cost_[static_cast<std::size_t>(node)] < std::numeric_limits<double>::infinity(); }
  double cost(int node) const { return cost_[static_cast<std::size_t>(node)]; }
  TopoPath path_to(int node) const;

 private:
  std::vector<double> cost_;
  std::vector<std::vector<int>> route_;
};

/// Throws TopologyError("unreachable") when a and b are in different components.
TopoPath topo_path(const TopoGraph& graph, int a, int b);

}  // namespace gvdtg
