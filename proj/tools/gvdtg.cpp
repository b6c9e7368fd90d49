// gvdtg: exploration episodes, static topology extraction and benchmarks.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gvdtg/config.hpp"
#include "gvdtg/map_io.hpp"
#include "gvdtg/render.hpp"
#include "gvdtg/report.hpp"
#include "gvdtg/sim.hpp"

namespace fs = std::filesystem;
using namespace gvdtg;

namespace {

constexpr int kOk = 0;
constexpr int kEpisodeFailure = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  const char* level = std::getenv("GVDTG_LOG");
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

template <typename F>
std::string to_text(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

Config resolve_config(const std::string& path, std::optional<std::uint64_t> seed, std::optional<int> budget) {
  Config cfg = path.empty() ? Config{} : load_config(path);
  if (seed) cfg.seed = *seed;
  if (budget) cfg.episode.step_budget = *budget;
  cfg.validate();
  return cfg;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const std::string& n : names) {
    try {
      out.push_back(parse_method(n));
    } catch (const SimError& e) {
      throw InputError(e.what());
    }
  }
  return out;
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

int cmd_run(const std::string& world_path, const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> budget, const std::vector<std::string>& methods) {
  const Config cfg = resolve_config(config_path, seed, budget);
  const World world = load_world(world_path);
  const auto ms = parse_methods(methods);
  if (ms.size() != 1) throw InputError("run takes exactly one method");
  prepare_out(out_dir);
  spdlog::info("running {} on {} (seed {})", to_string(ms[0]), world.name, cfg.seed);
  const EpisodeResult r = run_episode(world, cfg, ms[0], [](const FrameView& v) {
    spdlog::debug("frame {} step {} nodes {} coverage {:.4f}", v.frame, v.step, v.nodes.size(), v.coverage);
  });
  const fs::path out(out_dir);
  write_file(out / "metrics.csv", to_text([&](std::ostream& s) { write_metrics_csv(s, r.metrics); }));
  write_file(out / "trajectory.csv", to_text([&](std::ostream& s) { write_trajectory_csv(s, r.metrics.trajectory); }));
  write_file(out / "decisions.csv", to_text([&](std::ostream& s) { write_decisions_csv(s, r.decisions); }));
  RenderLayers layers;
  layers.graph = &r.graph;
  layers.trajectory = r.metrics.trajectory;
  write_file(out / "render.svg", render_svg(r.belief, layers));
  std::cout << "world=" << r.metrics.world << " method=" << r.metrics.method << " success=" << r.metrics.success
            << " coverage=" << r.metrics.coverage << " steps=" << r.metrics.steps
            << " distance_m=" << r.metrics.distance << " termination=" << r.metrics.termination << '\n';
  return r.metrics.success ? kOk : kEpisodeFailure;
}

int cmd_extract(const std::string& map_path, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed) {
  const Config cfg = resolve_config(config_path, seed, std::nullopt);
  const OccupancyGrid map = load_map(map_path);
  prepare_out(out_dir);
  const Extraction ex = extract_topology(map, cfg);
  const fs::path out(out_dir);
  write_file(out / "nodes.csv", to_text([&](std::ostream& s) { write_nodes_csv(s, ex.nodes); }));
  write_file(out / "graph.json", graph_json(ex.graph));
  RenderLayers layers;
  layers.graph = &ex.graph;
  layers.disks = ex.nodes;
  write_file(out / "overlay.svg", render_svg(map, layers));
  std::cout << "nodes=" << ex.nodes.size() << " centers=" << ex.clusters.centers.size()
            << " edges=" << ex.graph.edges().size() << " components=" << ex.graph.component_count() << '\n';
  return kOk;
}

int cmd_bench(const std::string& scenario_dir, const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::optional<int> budget, int seeds,
              const std::vector<std::string>& methods) {
  if (seeds < 1) throw InputError("--seeds must be at least 1");
  const Config base = resolve_config(config_path, seed, budget);
  const auto ms = parse_methods(methods);
  std::vector<fs::path> files;
  if (fs::is_directory(scenario_dir)) {
    for (const auto& e : fs::directory_iterator(scenario_dir))
      if (e.is_regular_file() && (e.path().extension() == ".grid" || e.path().extension() == ".pgm"))
        files.push_back(e.path());
  } else if (fs::is_regular_file(scenario_dir)) {
    files.push_back(scenario_dir);
  }
  if (files.empty()) throw InputError("no scenario maps found in " + scenario_dir);
  std::sort(files.begin(), files.end());
  std::vector<World> worlds;
  for (const auto& f : files) worlds.push_back(load_world(f.string()));
  prepare_out(out_dir);

  BenchmarkReport report;
  for (const World& w : worlds) {
    for (const Method m : ms) {
      for (int k = 0; k < seeds; ++k) {
        Config cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(k);
        BenchRow row;
        try {
          row.metrics = run_episode(w, cfg, m).metrics;
          row.metrics.trajectory.clear();
        } catch (const std::exception& e) {
          row.metrics.world = w.name;
          row.metrics.method = to_string(m);
          row.metrics.seed = cfg.seed;
          row.metrics.termination = "error";
          row.error = e.what();
          std::replace(row.error.begin(), row.error.end(), ',', ';');
          spdlog::error("{} {} seed {}: {}", w.name, to_string(m), cfg.seed, e.what());
        }
        spdlog::info("{} {} seed {} success={} coverage={:.4f}", w.name, to_string(m), cfg.seed,
                     row.metrics.success, row.metrics.coverage);
        report.rows.push_back(std::move(row));
      }
    }
  }
  const auto aggregates = report.aggregates();
  const fs::path out(out_dir);
  write_file(out / "report.csv", to_text([&](std::ostream& s) { write_report_csv(s, report); }));
  write_file(out / "aggregates.csv", to_text([&](std::ostream& s) { write_aggregates_csv(s, aggregates); }));
  write_aggregates_csv(std::cout, aggregates);
  const BacktrackingCheck check = check_backtracking(aggregates);
  std::cout << "backtracking: worlds=" << check.worlds << " revisit_wins=" << check.revisit_wins
            << " distance_ok=" << check.distance_ok << " pass=" << (check.pass ? 1 : 0) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"GVD topological exploration: run, extract, bench"};
  app.require_subcommand(1);

  std::string world, config, out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  int seeds = 10;
  std::vector<std::string> methods;

  auto* run = app.add_subcommand("run", "Run one exploration episode");
  run->add_option("--world", world, "World map file")->required();
  run->add_option("--config", config, "Config file (key = value)");
  run->add_option("--out", out, "Output directory");
  run->add_option("--seed", seed, "Random seed");
  run->add_option("--budget", budget, "Step budget");
  run->add_option("--methods", methods, "Exploration method: gvd-tg or greedy")->delimiter(',');

  auto* extract = app.add_subcommand("extract", "Extract GVD nodes and the topological graph of a map");
  extract->add_option("--world", world, "Map file")->required();
  extract->add_option("--config", config, "Config file (key = value)");
  extract->add_option("--out", out, "Output directory");
  extract->add_option("--seed", seed, "Random seed");

  auto* bench = app.add_subcommand("bench", "Benchmark methods across scenario maps and seeds");
  bench->add_option("--world", world, "Scenario directory or single map")->required();
  bench->add_option("--config", config, "Config file (key = value)");
  bench->add_option("--out", out, "Output directory");
  bench->add_option("--seed", seed, "First seed");
  bench->add_option("--seeds", seeds, "Seeds per scenario and method");
  bench->add_option("--budget", budget, "Step budget");
  bench->add_option("--methods", methods, "Comma-separated methods")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) {
      if (methods.empty()) methods = {"gvd-tg"};
      return cmd_run(world, config, out, seed, budget, methods);
    }
    if (*extract) return cmd_extract(world, config, out, seed);
    if (methods.empty()) methods = {"gvd-tg", "greedy"};
    return cmd_bench(world, config, out, seed, budget, seeds, methods);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const GridError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEpisodeFailure;
  }
}
