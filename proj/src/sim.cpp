#include "gvdtg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gvdtg/connectivity.hpp"
#include "gvdtg/frontier.hpp"
#include "gvdtg/grid_search.hpp"
#include "gvdtg/map_io.hpp"
#include "gvdtg/planner.hpp"

namespace gvdtg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Grid traversal in cell units. With `both_at_corners`, a ray passing through
// a lattice corner also reports the two side cells it touches.
void traverse(const OccupancyGrid& g, double u, double v, double dx, double dy, double max_t, bool both_at_corners,
              const std::function<bool(Cell, double)>& visit) {
  Cell c{static_cast<int>(std::floor(u)), static_cast<int>(std::floor(v))};
  if (!g.in_bounds(c) || !visit(c, 0.0)) return;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  double tx = sx > 0 ? (c.x + 1 - u) / dx : sx < 0 ? (u - c.x) / -dx : kInf;
  double ty = sy > 0 ? (c.y + 1 - v) / dy : sy < 0 ? (v - c.y) / -dy : kInf;
  const double ddx = sx != 0 ? 1.0 / std::abs(dx) : kInf;
  const double ddy = sy != 0 ? 1.0 / std::abs(dy) : kInf;
  while (true) {
    double t;
    if (both_at_corners && std::abs(tx - ty) < kTieEps) {
      t = std::min(tx, ty);
      if (t >= max_t) return;
      const Cell a{c.x + sx, c.y}, b{c.x, c.y + sy};
      if (g.in_bounds(a) && !visit(a, t)) return;
      if (g.in_bounds(b) && !visit(b, t)) return;
      c = {c.x + sx, c.y + sy};
      tx += ddx;
      ty += ddy;
    } else if (tx <= ty) {
      t = tx;
      if (t >= max_t) return;
      c.x += sx;
      tx += ddx;
    } else {
      t = ty;
      if (t >= max_t) return;
      c.y += sy;
      ty += ddy;
    }
    if (!g.in_bounds(c) || !visit(c, t)) return;
  }
}

}  // namespace

World make_world(OccupancyGrid truth, std::string name) {
  if (truth.count(CellState::kUnknown) != 0) throw SimError("world '" + name + "' contains unknown cells");
  return {std::move(truth), std::move(name)};
}

World load_world(const std::string& path) {
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  OccupancyGrid g = load_map(path);
  if (g.count(CellState::kUnknown) != 0) throw ParseError(path, 0, "world maps must not contain unknown cells");
  return {std::move(g), name};
}

void trace_ray(const OccupancyGrid& grid, Point2 origin, double angle, double max_cells,
               const std::function<bool(Cell, double)>& visit) {
  const double u = (origin.x - grid.origin().x) / grid.resolution();
  const double v = (origin.y - grid.origin().y) / grid.resolution();
  traverse(grid, u, v, std::cos(angle), std::sin(angle), max_cells, false, visit);
}

std::vector<Cell> swept_cells(const OccupancyGrid& grid, Point2 a, Point2 b) {
  std::vector<Cell> out;
  const double rho = grid.resolution();
  const double len = dist(a, b) / rho;
  const double u = (a.x - grid.origin().x) / rho, v = (a.y - grid.origin().y) / rho;
  if (len > 0.0) {
    traverse(grid, u, v, (b.x - a.x) / rho / len, (b.y - a.y) / rho / len, len, true, [&](Cell c, double) {
      out.push_back(c);
      return true;
    });
  } else {
    const Cell c{static_cast<int>(std::floor(u)), static_cast<int>(std::floor(v))};
    if (grid.in_bounds(c)) out.push_back(c);
  }
  const Cell end = grid.world_to_cell(b);
  if (grid.in_bounds(end) && std::find(out.begin(), out.end(), end) == out.end()) out.push_back(end);
  return out;
}

std::vector<BeamReading> scan(const World& world, const Pose& pose, const SensorModel& sensor,
                              std::mt19937_64* noise_rng) {
  const OccupancyGrid& g = world.truth;
  const Cell at = g.world_to_cell({pose.x, pose.y});
  if (!g.in_bounds(at) || g.at(at) != CellState::kFree) throw SimError("pose is not in free space");
  const double fov = deg2rad(sensor.fov_deg);
  const double range_cells = sensor.range_m / g.resolution();
  std::normal_distribution<double> noise(0.0, sensor.noise_std_m > 0 ? sensor.noise_std_m : 1.0);
  std::vector<BeamReading> out;
  out.reserve(static_cast<std::size_t>(sensor.beams));
  for (int i = 0; i < sensor.beams; ++i) {
    const double bearing =
        wrap(pose.theta - fov / 2.0 + fov * (static_cast<double>(i) + 0.5) / static_cast<double>(sensor.beams));
    BeamReading r{bearing, sensor.range_m, false};
    trace_ray(g, {pose.x, pose.y}, bearing, range_cells, [&](Cell c, double t) {
      if (g.at(c) != CellState::kOccupied) return true;
      r.distance = t * g.resolution();
      r.hit = true;
      return false;
    });
    if (r.hit && noise_rng && sensor.noise_std_m > 0.0) {
      r.distance = std::clamp(r.distance + noise(*noise_rng), 0.0, sensor.range_m);
    }
    out.push_back(r);
  }
  return out;
}

std::vector<Cell> integrate(OccupancyGrid& belief, const Pose& pose, std::span<const BeamReading> readings) {
  std::vector<Cell> changed;
  auto mark = [&](Cell c, CellState s) {
    if (belief.at(c) == s) return;
    belief.set(c, s);
    changed.push_back(c);
  };
  for (const BeamReading& r : readings) {
    const double d = r.distance / belief.resolution();
    trace_ray(belief, {pose.x, pose.y}, r.bearing, d + 2.0, [&](Cell c, double t) {
      if (t < d - kTieEps) {
        mark(c, CellState::kFree);
        return true;
      }
      if (r.hit) mark(c, CellState::kOccupied);
      return false;
    });
  }
  return changed;
}

DriveOutcome drive(const Pose& pose, std::span<const Point2> path, std::size_t next, const Kinematics& k,
                   const OccupancyGrid& belief) {
  DriveOutcome out{pose, next, false, false, 0.0};
  const double reach = k.reach_cells * belief.resolution();
  // Before moving only an exact hit advances, so a recentering waypoint is
  // actually driven to; after moving the reach tolerance applies.
  auto advance = [&](double tol) {
    while (out.next < path.size() && dist({out.pose.x, out.pose.y}, path[out.next]) <= tol + 1e-12) ++out.next;
    out.done = out.next >= path.size();
  };
  advance(0.0);
  if (out.done) return out;
  const Point2 wp = path[out.next];
  if (!belief.is_free(belief.world_to_cell(wp))) {
    out.replan = true;
    return out;
  }
  const double bearing = std::atan2(wp.y - out.pose.y, wp.x - out.pose.x);
  const double max_turn = deg2rad(k.omega_max_deg) * k.dt;
  const double err = wrap(bearing - out.pose.theta);
  out.pose.theta = wrap(out.pose.theta + std::clamp(err, -max_turn, max_turn));
  if (std::abs(wrap(bearing - out.pose.theta)) >= deg2rad(k.heading_gate_deg)) return out;

  const double remaining = dist({out.pose.x, out.pose.y}, wp);
  const double step = std::min(k.v_max * k.dt, remaining);
  const Point2 from{out.pose.x, out.pose.y};
  const Point2 to = step >= remaining ? wp : Point2{from.x + step * std::cos(bearing), from.y + step * std::sin(bearing)};
  for (const Cell c : swept_cells(belief, from, to)) {
    if (!belief.is_free(c)) {
      out.replan = true;
      return out;
    }
  }
  out.pose.x = to.x;
  out.pose.y = to.y;
  out.moved = step;
  advance(reach);
  return out;
}

const char* to_string(Method m) { return m == Method::kGvdTg ? "gvd-tg" : "greedy"; }

Method parse_method(const std::string& s) {
  if (s == "gvd-tg") return Method::kGvdTg;
  if (s == "greedy") return Method::kGreedy;
  throw SimError("unknown method '" + s + "'");
}

Pose start_pose(const World& world, const Config& cfg) {
  const OccupancyGrid& g = world.truth;
  if (cfg.episode.start_x || cfg.episode.start_y) {
    const Point2 p{cfg.episode.start_x.value_or(g.origin().x + g.width() * g.resolution() / 2),
                   cfg.episode.start_y.value_or(g.origin().y + g.height() * g.resolution() / 2)};
    const Cell c = g.world_to_cell(p);
    if (!g.is_free(c)) throw SimError("start pose is not in free space");
    const Point2 center = g.cell_center(c);
    return {center.x, center.y, cfg.episode.start_theta};
  }
  const Cell mid{g.width() / 2, g.height() / 2};
  const auto c = snap_to_free(g, mid, std::max(g.width(), g.height()));
  if (!c) throw SimError("world has no free cell");
  const Point2 center = g.cell_center(*c);
  return {center.x, center.y, cfg.episode.start_theta};
}

std::vector<std::uint8_t> explorable_cells(const World& world, Cell start) {
  return flood_fill(world.truth, start, [&](Cell c) { return world.truth.at(c) == CellState::kFree; }, true);
}

namespace {

void build_topology(const OccupancyGrid& map, const std::vector<GvdNode>& nodes, const Config& cfg,
                    ConnectivityCache& cache, Clustering& clusters, double& bw, TopoGraph& graph,
                    ConnectStats& stats) {
  clusters = {};
  graph = {};
  stats = {};
  bw = 0.0;
  if (nodes.empty()) return;
  std::vector<Cell> points(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) points[i] = nodes[i].center;
  bw = points.size() >= 2 ? bandwidth(points, cfg.topology.quantile, cfg.seed, cfg.topology.bandwidth_max_points) : 1.0;
  if (!(bw > 0.0)) bw = 1.0;
  clusters = mean_shift(points, map, cache, bw, cfg.topology.mean_shift);
  graph = build_graph(nodes, clusters, map, cfg.gvd.unknown_blocks);
  stats = connect_components(graph, map, cache, cfg.topology.edge_radius_factor * bw);
}

class Episode {
 public:
  Episode(const World& world, const Config& cfg, Method method, const FrameObserver& observer)
      : world_(world),
        cfg_(cfg),
        method_(method),
        observer_(observer),
        belief_(world.truth.width(), world.truth.height(), world.truth.resolution(), CellState::kUnknown,
                world.truth.origin()),
        working_(belief_),
        mask_(world.truth.width(), world.truth.height()),
        cache_(cfg.topology.cache_capacity),
        blacklist_(belief_.size(), 0),
        entries_(belief_.size(), 0),
        noise_rng_(cfg.seed) {}

  EpisodeResult run() {
    cfg_.validate();
    pose_ = start_pose(world_, cfg_);
    cell_ = belief_.world_to_cell({pose_.x, pose_.y});
    explorable_ = explorable_cells(world_, cell_);
    explorable_count_ = static_cast<std::size_t>(std::count(explorable_.begin(), explorable_.end(), 1));
    ++entries_[belief_.index(cell_)];

    EpisodeMetrics& m = result_.metrics;
    m.world = world_.name;
    m.method = to_string(method_);
    m.seed = cfg_.seed;
    m.trajectory.push_back(pose_);

    sense();
    bool need_plan = true;
    int since_plan = 0;
    int stuck = 0;
    while (coverage() < cfg_.episode.coverage_target && step_ < cfg_.episode.step_budget) {
      if (need_plan || since_plan >= cfg_.episode.pipeline_every_n_steps) {
        if (!plan()) {
          m.termination = "no reachable frontier";
          break;
        }
        need_plan = false;
        since_plan = 0;
      }
      const DriveOutcome out = drive(pose_, path_, next_, cfg_.kinematics, belief_);
      next_ = out.next;
      const bool pose_changed = out.pose.x != pose_.x || out.pose.y != pose_.y || out.pose.theta != pose_.theta;
      pose_ = out.pose;
      ++step_;
      ++since_plan;
      m.distance += out.moved;
      m.trajectory.push_back(pose_);
      const Cell now = belief_.world_to_cell({pose_.x, pose_.y});
      if (now != cell_) {
        cell_ = now;
        ++entries_[belief_.index(cell_)];
      }
      if (pose_changed) sense();
      if (out.replan) {
        need_plan = true;
        if (!pose_changed && ++stuck >= 3) {
          drop_target();
          stuck = 0;
        }
      } else {
        stuck = 0;
      }
      if (out.done) {
        need_plan = true;
        target_reached_ = true;
      }
      if (step_ - last_progress_ > cfg_.episode.stall_steps) {
        drop_target();
        last_progress_ = step_;
        need_plan = true;
      }
    }

    m.steps = step_;
    m.sim_time = step_ * cfg_.kinematics.dt;
    m.coverage = coverage();
    m.success = m.coverage >= cfg_.episode.coverage_target;
    if (m.success) m.termination = "coverage";
    else if (m.termination.empty()) m.termination = "budget";
    m.frames = frame_;
    std::size_t entered = 0, revisited = 0;
    for (const int e : entries_) {
      if (e >= 1) ++entered;
      if (e >= 2) ++revisited;
    }
    m.revisit_ratio = entered ? static_cast<double>(revisited) / static_cast<double>(entered) : 0.0;
    result_.belief = belief_;
    result_.nodes = nodes_;
    result_.graph = graph_;
    return std::move(result_);
  }

 private:
  double coverage() const {
    return explorable_count_ ? static_cast<double>(covered_) / static_cast<double>(explorable_count_) : 1.0;
  }

  void sense() {
    const auto readings = scan(world_, pose_, cfg_.sensor, &noise_rng_);
    for (const Cell c : integrate(belief_, pose_, readings)) {
      const std::size_t i = belief_.index(c);
      if (!explorable_[i]) continue;
      if (belief_.at(c) == CellState::kFree) {
        ++covered_;
        last_progress_ = step_;
      }
    }
  }

  void drop_target() {
    if (target_) blacklist_[belief_.index(*target_)] = 1;
    target_.reset();
  }

  bool blacklisted(Cell c) const { return blacklist_[belief_.index(c)] != 0; }

  bool frontier_cell(Cell c) const {
    if (!belief_.is_free(c) || blacklisted(c)) return false;
    constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + dx[k], c.y + dy[k]};
      if (belief_.in_bounds(n) && belief_.at(n) == CellState::kUnknown) return true;
    }
    return false;
  }

  const std::vector<float>& penalty() {
    if (!penalty_valid_) {
      penalty_ = proximity_penalty(belief_, cfg_.episode.proximity_radius,
                                   static_cast<float>(cfg_.episode.proximity_weight));
      penalty_valid_ = true;
    }
    return penalty_;
  }

  std::optional<std::vector<Cell>> leg(Cell a, Cell b) {
    if (a == b) return std::vector<Cell>{a};
    if (line_of_sight(belief_, a, b)) return std::vector<Cell>{a, b};
    auto p = astar(belief_, a, b, &penalty());
    if (!p) return std::nullopt;
    return std::move(p->cells);
  }

  // Turns a cell route into waypoints, keeping the robot's own cell center
  // only when it cannot head straight for the second route cell.
  void set_path(const std::vector<Cell>& cells) {
    const std::vector<Cell> route = shortcut_path(belief_, cells);
    path_.clear();
    next_ = 0;
    const Point2 here{pose_.x, pose_.y};
    bool direct = route.size() >= 2;
    if (direct) {
      for (const Cell c : swept_cells(belief_, here, belief_.cell_center(route[1]))) {
        if (!belief_.is_free(c)) {
          direct = false;
          break;
        }
      }
    }
    if (!direct) path_.push_back(belief_.cell_center(route.front()));
    for (std::size_t i = 1; i < route.size(); ++i) path_.push_back(belief_.cell_center(route[i]));
  }

  bool plan_to_cell(Cell goal, const std::vector<Cell>& via = {}) {
    std::vector<Cell> cells{cell_};
    std::vector<Cell> stops;
    for (const Cell c : via)
      if (belief_.is_free(c)) stops.push_back(c);
    stops.push_back(goal);
    for (const Cell s : stops) {
      auto l = leg(cells.back(), s);
      if (!l) {
        if (s == goal) return false;
        continue;
      }
      cells.insert(cells.end(), l->begin() + 1, l->end());
    }
    set_path(cells);
    return true;
  }

  void update_working() {
    OccupancyGrid overlay = working_;
    for (std::size_t i = 0; i < belief_.size(); ++i) {
      const Cell c = belief_.cell_of(i);
      if (belief_.at(c) != CellState::kUnknown) overlay.set(c, belief_.at(c));
    }
    DenoiseOptions opts = cfg_.denoise;
    opts.scope = DenoiseScope::kBoundingBox;
    OccupancyGrid next = denoise(overlay, working_, opts);
    const IncrementalRegion inc = diff(next, working_);
    cache_.invalidate(inc.bbox);
    working_ = std::move(next);

    // Drop nodes whose disk is no longer entirely free.
    std::erase_if(nodes_, [&](const GvdNode& n) {
      const int r = static_cast<int>(std::ceil(n.radius));
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          if (dx * dx + dy * dy >= n.radius * n.radius) continue;
          const Cell c{n.center.x + dx, n.center.y + dy};
          if (!working_.is_free(c)) return true;
        }
      return false;
    });
  }

  void record(const Candidate* c, const std::string& branch, Cell target, int n_candidates, bool switched) {
    DecisionRecord d;
    d.frame = frame_;
    d.step = step_;
    d.chosen_id = c ? c->node : -1;
    d.cost = c ? c->cost : 0.0;
    d.branch = branch;
    d.n_candidates = n_candidates;
    d.target = target;
    d.switched = switched;
    result_.decisions.push_back(d);
  }

  bool plan_greedy(int n_candidates) {
    while (true) {
      auto p = nearest_by_path(belief_, cell_, [&](Cell c) { return frontier_cell(c); });
      if (!p) return false;
      const Cell goal = p->cells.back();
      if (goal == cell_) {
        blacklist_[belief_.index(goal)] = 1;
        continue;
      }
      if (!plan_to_cell(goal)) {
        blacklist_[belief_.index(goal)] = 1;
        continue;
      }
      const bool switched = !target_ || *target_ != goal;
      target_ = goal;
      record(nullptr, "greedy", goal, n_candidates, switched);
      return true;
    }
  }

  bool plan() {
    ++frame_;
    penalty_valid_ = false;
    if (target_reached_ && target_) {
      if (method_ == Method::kGreedy ? frontier_cell(*target_) : true) blacklist_[belief_.index(*target_)] = 1;
      target_.reset();
    }
    target_reached_ = false;

    if (method_ == Method::kGreedy) {
      const bool ok = plan_greedy(0);
      notify();
      return ok;
    }

    update_working();
    const auto fresh = sample_frame(working_, mask_, cell_, cfg_.gvd, cfg_.seed, frame_);
    nodes_.insert(nodes_.end(), fresh.begin(), fresh.end());
    Clustering clusters;
    double bw = 0.0;
    build_topology(working_, nodes_, cfg_, cache_, clusters, bw, graph_, connect_);
    notify();

    std::vector<Candidate> cands;
    const int offset = static_cast<int>(clusters.centers.size());
    if (!nodes_.empty()) {
      const PlanContext ctx(graph_, working_, cache_, cell_, pose_.theta);
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (blacklisted(nodes_[i].center)) continue;
        if (!classify(working_, nodes_[i], cfg_.frontier).frontier()) continue;
        cands.push_back(evaluate(ctx, offset + static_cast<int>(i), graph_, working_, cache_, cfg_.cost));
      }
    }
    const int n_candidates = static_cast<int>(cands.size());
    std::optional<int> current;
    for (const Candidate& c : cands)
      if (target_ && c.cell == *target_) current = c.node;

    while (true) {
      const bool any = std::any_of(cands.begin(), cands.end(), [](const Candidate& c) { return c.reachable(); });
      if (!any) break;
      const SwitchDecision d = maybe_switch(current, cands, cfg_.cost.gamma);
      const auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate& c) { return c.node == d.node; });
      std::vector<Cell> via;
      if (it->branch == Branch::kTopological) {
        for (const int id : it->route) via.push_back(graph_.nodes()[static_cast<std::size_t>(id)].cell);
      }
      Cell goal = it->cell;
      if (!belief_.is_free(goal)) {
        if (auto s = snap_to_free(belief_, goal, cfg_.gvd.snap_radius + 2)) goal = *s;
      }
      if (belief_.is_free(goal) && goal != cell_ && plan_to_cell(goal, via)) {
        target_ = it->cell;
        record(&*it, to_string(it->branch), it->cell, n_candidates, d.switched);
        return true;
      }
      blacklist_[belief_.index(it->cell)] = 1;
      cands.erase(it);
      current.reset();
    }
    // No usable frontier node: fall back to the nearest frontier cell.
    return plan_greedy(n_candidates);
  }

  void notify() {
    if (!observer_) return;
    observer_(FrameView{frame_, step_, belief_, method_ == Method::kGvdTg ? working_ : belief_, nodes_, graph_,
                        connect_, pose_, coverage()});
  }

  const World& world_;
  Config cfg_;
  Method method_;
  const FrameObserver& observer_;
  OccupancyGrid belief_;
  OccupancyGrid working_;
  CoverageMask mask_;
  ConnectivityCache cache_;
  std::vector<GvdNode> nodes_;
  TopoGraph graph_;
  ConnectStats connect_;
  std::vector<std::uint8_t> blacklist_;
  std::vector<int> entries_;
  std::vector<std::uint8_t> explorable_;
  std::size_t explorable_count_ = 0;
  std::size_t covered_ = 0;
  std::mt19937_64 noise_rng_;
  std::vector<float> penalty_;
  bool penalty_valid_ = false;

  Pose pose_;
  Cell cell_;
  std::vector<Point2> path_;
  std::size_t next_ = 0;
  std::optional<Cell> target_;
  bool target_reached_ = false;
  int frame_ = 0;
  int step_ = 0;
  int last_progress_ = 0;
  EpisodeResult result_;
};

}  // namespace

EpisodeResult run_episode(const World& world, const Config& cfg, Method method, const FrameObserver& observer) {
  return Episode(world, cfg, method, observer).run();
}

Extraction extract_topology(const OccupancyGrid& map, const Config& cfg) {
  cfg.validate();
  Extraction ex;
  const OccupancyGrid clean = denoise(map, map, cfg.denoise);
  CoverageMask mask(clean.width(), clean.height());
  const Cell robot{clean.width() / 2, clean.height() / 2};
  ex.nodes = sample_to_fixpoint(clean, mask, robot, cfg.gvd, cfg.seed);
  ConnectivityCache cache(cfg.topology.cache_capacity);
  build_topology(clean, ex.nodes, cfg, cache, ex.clusters, ex.bandwidth, ex.graph, ex.connect);
  return ex;
}

}  // namespace gvdtg
