#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvdtg/config.hpp"
#include "gvdtg/grid.hpp"
#include "gvdtg/gvd.hpp"
#include "gvdtg/topology.hpp"

namespace gvdtg {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct World {
  OccupancyGrid truth;  // free and occupied only
  std::string name;
};

/// Validates that the grid has no unknown cells.
World make_world(OccupancyGrid truth, std::string name);
World load_world(const std::string& path);

struct Pose {
  double x = 0.0;  // meters
  double y = 0.0;
  double theta = 0.0;  // radians, counter-clockwise from +x
};

struct BeamReading {
  double bearing = 0.0;   // world-frame angle
  double distance = 0.0;  // meters
  bool hit = false;
};

/// Visits the cells a ray passes through, in order, with the distance (cells)
/// at which it enters each one. The start cell is entered at 0. Stops when
/// `visit` returns false, at `max_cells`, or at the grid edge.
void trace_ray(const OccupancyGrid& grid, Point2 origin, double angle, double max_cells,
               const std::function<bool(Cell, double)>& visit);

/// Cells touched by the straight segment between two world points.
std::vector<Cell> swept_cells(const OccupancyGrid& grid, Point2 a, Point2 b);

std::vector<BeamReading> scan(const World& world, const Pose& pose, const SensorModel& sensor,
                              std::mt19937_64* noise_rng = nullptr);

/// Marks cells before each hit free and the hit cell occupied. Returns the cells whose state changed.
std::vector<Cell> integrate(OccupancyGrid& belief, const Pose& pose, std::span<const BeamReading> readings);

struct DriveOutcome {
  Pose pose;
  std::size_t next = 0;  // index of the waypoint being approached
  bool replan = false;   // next waypoint or swept cells not free in the belief
  bool done = false;     // every waypoint reached
  double moved = 0.0;    // meters
};

/// One control interval of rotate-then-translate motion along `path`.
DriveOutcome drive(const Pose& pose, std::span<const Point2> path, std::size_t next, const Kinematics& k,
                   const OccupancyGrid& belief);

enum class Method { kGvdTg, kGreedy };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct EpisodeMetrics {
  std::string world;
  std::string method;
  std::uint64_t seed = 0;
  int steps = 0;
  double sim_time = 0.0;  // s
  double distance = 0.0;  // m
  double coverage = 0.0;
  double revisit_ratio = 0.0;
  bool success = false;
  std::string termination;  // coverage | budget | no reachable frontier
  int frames = 0;           // pipeline runs
  std::vector<Pose> trajectory;  // pose after every step, starting with the start pose
};

struct DecisionRecord {
  int frame = 0;
  int step = 0;
  int chosen_id = -1;
  double cost = 0.0;
  std::string branch;
  int n_candidates = 0;
  Cell target;
  bool switched = false;
};

/// Read-only view handed to an observer after every pipeline run.
struct FrameView {
  int frame = 0;
  int step = 0;
  const OccupancyGrid& belief;
  const OccupancyGrid& working;
  const std::vector<GvdNode>& nodes;
  const TopoGraph& graph;
  const ConnectStats& connect;
  Pose pose;
  double coverage = 0.0;
};

using FrameObserver = std::function<void(const FrameView&)>;

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::vector<DecisionRecord> decisions;
  OccupancyGrid belief;
  std::vector<GvdNode> nodes;
  TopoGraph graph;
};

/// Start pose: configured start, else the free cell nearest the map center.
Pose start_pose(const World& world, const Config& cfg);

/// Free truth cells reachable from `start` by 8-connected flood fill.
std::vector<std::uint8_t> explorable_cells(const World& world, Cell start);

EpisodeResult run_episode(const World& world, const Config& cfg, Method method,
                          const FrameObserver& observer = {});

/// Static topology of a finished map: sampling to fixpoint, clustering and connection.
struct Extraction {
  std::vector<GvdNode> nodes;
  Clustering clusters;
  double bandwidth = 0.0;
  TopoGraph graph;
  ConnectStats connect;
};

Extraction extract_topology(const OccupancyGrid& map, const Config& cfg);

}  // namespace gvdtg
