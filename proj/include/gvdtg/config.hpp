#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "gvdtg/frontier.hpp"
#include "gvdtg/grid.hpp"
#include "gvdtg/gvd.hpp"
#include "gvdtg/planner.hpp"
#include "gvdtg/topology.hpp"

namespace gvdtg {

struct SensorModel {
  double fov_deg = 270.0;
  double range_m = 3.5;
  int beams = 360;
  double noise_std_m = 0.0;  // per-beam Gaussian range noise; 0 disables
};

struct Kinematics {
  double v_max = 0.3;             // m/s
  double omega_max_deg = 17.1;    // deg/s
  double dt = 0.1;                // s
  double heading_gate_deg = 15.0; // translate only below this heading error
  double reach_cells = 0.5;       // waypoint reached within this distance
};

struct TopologyParams {
  double quantile = 0.3;
  std::size_t bandwidth_max_points = 2000;
  MeanShiftParams mean_shift;
  double edge_radius_factor = 2.0;  // edge_radius = factor * bandwidth
  std::size_t cache_capacity = std::size_t{1} << 18;
};

struct EpisodeParams {
  int step_budget = 20000;
  int pipeline_every_n_steps = 10;
  double coverage_target = 0.95;
  std::optional<double> start_x;  // meters; default is the free cell nearest the map center
  std::optional<double> start_y;
  double start_theta = 0.0;       // radians
  int proximity_radius = 3;       // cells of wall clearance preferred by drive legs
  double proximity_weight = 2.0;
  int stall_steps = 600;          // steps without coverage gain before a target is dropped
};

struct Config {
  std::uint64_t seed = 1;
  DenoiseOptions denoise;
  SamplingParams gvd;
  TopologyParams topology;
  FrontierParams frontier;
  CostParams cost;
  SensorModel sensor;
  Kinematics kinematics;
  EpisodeParams episode;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys and malformed
/// values raise ParseError naming the line.
Config parse_config(std::istream& in, const std::string& source = "<stream>");
Config load_config(const std::string& path);
void write_config(std::ostream& out, const Config& cfg);

}  // namespace gvdtg
