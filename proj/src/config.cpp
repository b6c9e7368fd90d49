#include "gvdtg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gvdtg/map_io.hpp"

namespace gvdtg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw std::invalid_argument("expected a number");
  return out;
}

long long to_int(const std::string& v) {
  long long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw std::invalid_argument("expected an integer");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false");
}

using Setter = std::function<void(Config&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](Config& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); }},
      {"denoise_window_radius", [](Config& c, const std::string& v) { c.denoise.window_radius = static_cast<int>(to_int(v)); }},
      {"denoise_vote_threshold", [](Config& c, const std::string& v) { c.denoise.vote_threshold = static_cast<int>(to_int(v)); }},
      {"denoise_vote_rule",
       [](Config& c, const std::string& v) {
         if (v == "free") c.denoise.rule = VoteRule::kFreeNeighbors;
         else if (v == "known") c.denoise.rule = VoteRule::kKnownNeighbors;
         else throw std::invalid_argument("expected free or known");
       }},
      {"r_min", [](Config& c, const std::string& v) { c.gvd.r_min = to_double(v); }},
      {"delta_r", [](Config& c, const std::string& v) { c.gvd.delta_r = static_cast<int>(to_int(v)); }},
      {"delta", [](Config& c, const std::string& v) { c.gvd.delta = to_double(v); }},
      {"step_fine", [](Config& c, const std::string& v) { c.gvd.step_fine = static_cast<int>(to_int(v)); }},
      {"step_coarse", [](Config& c, const std::string& v) { c.gvd.step_coarse = static_cast<int>(to_int(v)); }},
      {"local_range_m", [](Config& c, const std::string& v) { c.gvd.local_range_m = to_double(v); }},
      {"pair_separation", [](Config& c, const std::string& v) { c.gvd.pair_separation = to_double(v); }},
      {"snap_radius", [](Config& c, const std::string& v) { c.gvd.snap_radius = static_cast<int>(to_int(v)); }},
      {"unknown_blocks", [](Config& c, const std::string& v) { c.gvd.unknown_blocks = to_bool(v); }},
      {"quantile", [](Config& c, const std::string& v) { c.topology.quantile = to_double(v); }},
      {"bandwidth_max_points", [](Config& c, const std::string& v) { c.topology.bandwidth_max_points = static_cast<std::size_t>(to_int(v)); }},
      {"conv_eps", [](Config& c, const std::string& v) { c.topology.mean_shift.conv_eps = to_double(v); }},
      {"max_iters", [](Config& c, const std::string& v) { c.topology.mean_shift.max_iters = static_cast<int>(to_int(v)); }},
      {"merge_factor", [](Config& c, const std::string& v) { c.topology.mean_shift.merge_factor = to_double(v); }},
      {"leaf_capacity", [](Config& c, const std::string& v) { c.topology.mean_shift.leaf_capacity = static_cast<std::size_t>(to_int(v)); }},
      {"edge_radius_factor", [](Config& c, const std::string& v) { c.topology.edge_radius_factor = to_double(v); }},
      {"cache_capacity", [](Config& c, const std::string& v) { c.topology.cache_capacity = static_cast<std::size_t>(to_int(v)); }},
      {"contact_min", [](Config& c, const std::string& v) { c.frontier.contact_min = static_cast<int>(to_int(v)); }},
      {"pseudo_fraction", [](Config& c, const std::string& v) { c.frontier.pseudo_fraction = to_double(v); }},
      {"alpha", [](Config& c, const std::string& v) { c.cost.alpha = to_double(v); }},
      {"beta", [](Config& c, const std::string& v) { c.cost.beta = to_double(v); }},
      {"gamma", [](Config& c, const std::string& v) { c.cost.gamma = to_double(v); }},
      {"fov_deg", [](Config& c, const std::string& v) { c.sensor.fov_deg = to_double(v); }},
      {"range_m", [](Config& c, const std::string& v) { c.sensor.range_m = to_double(v); }},
      {"beams", [](Config& c, const std::string& v) { c.sensor.beams = static_cast<int>(to_int(v)); }},
      {"noise_std_m", [](Config& c, const std::string& v) { c.sensor.noise_std_m = to_double(v); }},
      {"v_max", [](Config& c, const std::string& v) { c.kinematics.v_max = to_double(v); }},
      {"omega_max_deg", [](Config& c, const std::string& v) { c.kinematics.omega_max_deg = to_double(v); }},
      {"dt", [](Config& c, const std::string& v) { c.kinematics.dt = to_double(v); }},
      {"heading_gate_deg", [](Config& c, const std::string& v) { c.kinematics.heading_gate_deg = to_double(v); }},
      {"reach_cells", [](Config& c, const std::string& v) { c.kinematics.reach_cells = to_double(v); }},
      {"step_budget", [](Config& c, const std::string& v) { c.episode.step_budget = static_cast<int>(to_int(v)); }},
      {"pipeline_every_n_steps", [](Config& c, const std::string& v) { c.episode.pipeline_every_n_steps = static_cast<int>(to_int(v)); }},
      {"coverage_target", [](Config& c, const std::string& v) { c.episode.coverage_target = to_double(v); }},
      {"start_x", [](Config& c, const std::string& v) { c.episode.start_x = to_double(v); }},
      {"start_y", [](Config& c, const std::string& v) { c.episode.start_y = to_double(v); }},
      {"start_theta", [](Config& c, const std::string& v) { c.episode.start_theta = to_double(v); }},
      {"proximity_radius", [](Config& c, const std::string& v) { c.episode.proximity_radius = static_cast<int>(to_int(v)); }},
      {"proximity_weight", [](Config& c, const std::string& v) { c.episode.proximity_weight = to_double(v); }},
      {"stall_steps", [](Config& c, const std::string& v) { c.episode.stall_steps = static_cast<int>(to_int(v)); }},
  };
  return table;
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void Config::validate() const {
  try {
    gvd.validate();
    cost.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  require(denoise.window_radius >= 0, "denoise_window_radius must be non-negative");
  require(topology.quantile > 0.0 && topology.quantile < 1.0, "quantile must lie in (0, 1)");
  require(topology.bandwidth_max_points >= 2, "bandwidth_max_points must be at least 2");
  require(topology.mean_shift.conv_eps > 0.0, "conv_eps must be positive");
  require(topology.mean_shift.max_iters >= 1, "max_iters must be at least 1");
  require(topology.mean_shift.merge_factor >= 0.0, "merge_factor must be non-negative");
  require(topology.mean_shift.leaf_capacity >= 1, "leaf_capacity must be at least 1");
  require(topology.edge_radius_factor > 0.0, "edge_radius_factor must be positive");
  require(topology.cache_capacity >= 1, "cache_capacity must be at least 1");
  require(frontier.contact_min >= 0, "contact_min must be non-negative");
  require(frontier.pseudo_fraction >= 0.0 && frontier.pseudo_fraction <= 1.0, "pseudo_fraction must lie in [0, 1]");
  require(sensor.beams >= 1, "beams must be at least 1");
  require(sensor.range_m > 0.0, "range_m must be positive");
  require(sensor.fov_deg > 0.0 && sensor.fov_deg <= 360.0, "fov_deg must lie in (0, 360]");
  require(sensor.noise_std_m >= 0.0, "noise_std_m must be non-negative");
  require(kinematics.v_max > 0.0, "v_max must be positive");
  require(kinematics.omega_max_deg > 0.0, "omega_max_deg must be positive");
  require(kinematics.dt > 0.0, "dt must be positive");
  require(kinematics.heading_gate_deg > 0.0, "heading_gate_deg must be positive");
  require(kinematics.reach_cells >= 0.0, "reach_cells must be non-negative");
  require(episode.step_budget >= 1, "step_budget must be at least 1");
  require(episode.pipeline_every_n_steps >= 1, "pipeline_every_n_steps must be at least 1");
  require(episode.coverage_target > 0.0 && episode.coverage_target <= 1.0, "coverage_target must lie in (0, 1]");
  require(episode.proximity_radius >= 0, "proximity_radius must be non-negative");
  require(episode.proximity_weight >= 0.0, "proximity_weight must be non-negative");
  require(episode.stall_steps >= 1, "stall_steps must be at least 1");
}

Config parse_config(std::istream& in, const std::string& source) {
  Config cfg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(source, line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(source, line_no, "missing value for '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, "bad value '" + value + "' for '" + key + "': " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open config");
  return parse_config(in, path);
}

void write_config(std::ostream& out, const Config& c) {
  out << "seed = " << c.seed << '\n'
      << "denoise_window_radius = " << c.denoise.window_radius << '\n'
      << "denoise_vote_threshold = " << c.denoise.vote_threshold << '\n'
      << "denoise_vote_rule = " << (c.denoise.rule == VoteRule::kFreeNeighbors ? "free" : "known") << '\n'
      << "r_min = " << c.gvd.r_min << '\n'
      << "delta_r = " << c.gvd.delta_r << '\n'
      << "delta = " << c.gvd.delta << '\n'
      << "step_fine = " << c.gvd.step_fine << '\n'
      << "step_coarse = " << c.gvd.step_coarse << '\n'
      << "local_range_m = " << c.gvd.local_range_m << '\n'
      << "pair_separation = " << c.gvd.pair_separation << '\n'
      << "snap_radius = " << c.gvd.snap_radius << '\n'
      << "unknown_blocks = " << (c.gvd.unknown_blocks ? "true" : "false") << '\n'
      << "quantile = " << c.topology.quantile << '\n'
      << "bandwidth_max_points = " << c.topology.bandwidth_max_points << '\n'
      << "conv_eps = " << c.topology.mean_shift.conv_eps << '\n'
      << "max_iters = " << c.topology.mean_shift.max_iters << '\n'
      << "merge_factor = " << c.topology.mean_shift.merge_factor << '\n'
      << "leaf_capacity = " << c.topology.mean_shift.leaf_capacity << '\n'
      << "edge_radius_factor = " << c.topology.edge_radius_factor << '\n'
      << "cache_capacity = " << c.topology.cache_capacity << '\n'
      << "contact_min = " << c.frontier.contact_min << '\n'
      << "pseudo_fraction = " << c.frontier.pseudo_fraction << '\n'
      << "alpha = " << c.cost.alpha << '\n'
      << "beta = " << c.cost.beta << '\n'
      << "gamma = " << c.cost.gamma << '\n'
      << "fov_deg = " << c.sensor.fov_deg << '\n'
      << "range_m = " << c.sensor.range_m << '\n'
      << "beams = " << c.sensor.beams << '\n'
      << "noise_std_m = " << c.sensor.noise_std_m << '\n'
      << "v_max = " << c.kinematics.v_max << '\n'
      << "omega_max_deg = " << c.kinematics.omega_max_deg << '\n'
      << "dt = " << c.kinematics.dt << '\n'
      << "heading_gate_deg = " << c.kinematics.heading_gate_deg << '\n'
      << "reach_cells = " << c.kinematics.reach_cells << '\n'
      << "step_budget = " << c.episode.step_budget << '\n'
      << "pipeline_every_n_steps = " << c.episode.pipeline_every_n_steps << '\n'
      << "coverage_target = " << c.episode.coverage_target << '\n';
  if (c.episode.start_x) out << "start_x = " << *c.episode.start_x << '\n';
  if (c.episode.start_y) out << "start_y = " << *c.episode.start_y << '\n';
  out << "start_theta = " << c.episode.start_theta << '\n'
      << "proximity_radius = " << c.episode.proximity_radius << '\n'
      << "proximity_weight = " << c.episode.proximity_weight << '\n'
      << "stall_steps = " << c.episode.stall_steps << '\n';
}

}  // namespace gvdtg
