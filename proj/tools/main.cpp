// navfuse CLI: single-shot planning, closed-loop simulation, fusion
// benchmarks, parameter sweeps and log replay.
//
// Exit codes: 0 success, 1 unexpected runtime failure, 2 no traversable
// path, 3 parse/config error, 4 ordering assertion failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "navfuse/config.hpp"
#include "navfuse/errors.hpp"
#include "navfuse/eval.hpp"
#include "navfuse/svg.hpp"

namespace {

using namespace navfuse;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitNoPath = 2;
constexpr int kExitParse = 3;
constexpr int kExitAssert = 4;

std::vector<double> parse_values(const std::string& values, const std::string& range) {
  std::vector<double> out;
  if (!values.empty()) {
    std::stringstream ss(values);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      out.push_back(std::stod(tok));
    }
  } else if (!range.empty()) {
    // lo:hi:count, inclusive linspace
    double lo, hi;
    int count;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
      throw ParseError("range must be lo:hi:count");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
  if (out.empty()) throw ParseError("no sweep values given (use --values or --range)");
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

// BEV scene: cost cells in grey scale, candidates, representatives and the
// selected path, goal direction as a dot at the map edge.
void write_plan_svg(const std::string& path, const CostMap& map, const PathSet& set,
                    const PlanDiagnostics& diag, const Vec2& goal_dir) {
  const auto& s = map.spec();
  const double px_per_m = 48.0;
  const double W = s.extent_x() * px_per_m;
  const double H = s.extent_z() * px_per_m;
  auto to_px = [&](const Vec2& p) {
    return std::pair<double, double>{(p.x - s.origin_x) * px_per_m,
                                     H - (p.z - s.origin_z) * px_per_m};
  };
  svg::Document doc(W, H);
  doc.rect(0, 0, W, H, "#808080");
  for (int iz = 0; iz < s.height; ++iz)
    for (int ix = 0; ix < s.width; ++ix) {
      const double c = map.at(ix, iz);
      if (c == s.unknown_cost) continue;
      const int grey = static_cast<int>(std::lround((1.0 - c) * 255.0));
      char color[8];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", grey, grey, grey);
      const auto [x, y] = to_px({s.origin_x + ix * s.resolution,
                                 s.origin_z + (iz + 1) * s.resolution});
      doc.rect(x, y, s.resolution * px_per_m, s.resolution * px_per_m, color);
    }
  auto draw_path = [&](const Path& p, const std::string& color, double w) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(p.waypoints.size());
    for (const auto& wp : p.waypoints) pts.push_back(to_px(wp));
    doc.polyline(pts, color, w);
  };
  for (int idx : diag.top_k) draw_path(set.paths[idx], "#4c72b0", 0.8);
  for (const auto& rep : diag.representatives.representatives)
    draw_path(rep, "#dd8452", 2.0);
  draw_path(diag.selected, "#c44e52", 3.0);
  const double edge = std::min({s.extent_z() - 0.2, s.extent_x() / 2.0 - 0.2});
  const auto [gx, gy] = to_px(goal_dir * edge);
  doc.circle(gx, gy, 6.0, "#2ca02c");
  doc.save(path);
}

int cmd_plan(const RunConfig& config, const std::string& mask_file,
             const std::string& calib_file, double goal_bearing,
             const std::string& out_file, const std::string& svg_file) {
  CameraConfig cam_cfg = config.camera;
  if (!calib_file.empty()) cam_cfg.ray_table = calib_file;
  const CameraModel camera = cam_cfg.build();
  const Mask mask = load_mask_pgm(mask_file);
  const CostMap bev = project_mask_to_bev(camera, mask, config.grid);
  const PathSet set = sample_paths(config.sampler, config.seed);
  const Vec2 goal_dir = direction_from_bearing(goal_bearing);

  PlanResult result = plan(set, bev, goal_dir, config.planner);
  write_text(out_file, diagnostics_to_json(result.diagnostics));
  if (!svg_file.empty()) write_plan_svg(svg_file, bev, set, result.diagnostics, goal_dir);
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, const std::string& world_file,
                 const std::string& mission_file, const std::string& log_file) {
  const World world = load_world_file(world_file);
  const Mission mission = load_mission_file(mission_file);
  const CameraModel camera = config.camera.build();
  const SimLog log = run_mission(world, mission, config.sim, camera, config.seed);
  if (!log_file.empty()) save_simlog(log, log_file);
  char line[96];
  std::snprintf(line, sizeof(line), "score=%g outcome=%s\n", log.score,
                to_string(log.outcome));
  std::cout << line;
  return kExitOk;
}

BenchContext make_context(const RunConfig& config) {
  BenchContext ctx;
  ctx.camera = config.camera.build();
  ctx.grid = config.grid;
  ctx.sampler = config.sampler;
  ctx.planner = config.planner;
  ctx.seed = config.seed;
  ctx.jobs = config.jobs;
  return ctx;
}

int cmd_bench(const RunConfig& config, const std::string& suite_dir,
              const std::string& strategies_arg, const std::string& out_file,
              const std::string& assert_ordering) {
  const auto cases = load_suite(suite_dir);
  std::vector<std::string> names;
  {
    std::stringstream ss(strategies_arg);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) names.push_back(tok);
  }
  if (names.empty()) throw ParseError("bench: no strategies given");

  std::vector<std::pair<std::string, MetricReport>> rows;
  for (const auto& name : names) {
    const auto strategy = strategy_from_string(name);
    if (!strategy) throw ParseError("bench: unknown strategy '" + name + "'");
    BenchContext ctx = make_context(config);
    ctx.planner.strategy = *strategy;
    rows.emplace_back(name, run_fusion_bench(cases, ctx));
  }
  write_text(out_file, bench_csv(rows));

  if (!assert_ordering.empty()) {
    std::vector<std::string> order;
    std::stringstream ss(assert_ordering);
    std::string tok;
    while (std::getline(ss, tok, '>'))
      if (!tok.empty()) order.push_back(tok);
    auto psa_of = [&](const std::string& name) {
      for (const auto& [n, r] : rows)
        if (n == name) return r.psa();
      throw ParseError("bench: ordering references strategy '" + name + "' not in run");
    };
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if (!(psa_of(order[i]) > psa_of(order[i + 1]))) {
        std::fprintf(stderr, "ordering violated: psa(%s)=%.4f !> psa(%s)=%.4f\n",
                     order[i].c_str(), psa_of(order[i]), order[i + 1].c_str(),
                     psa_of(order[i + 1]));
        return kExitAssert;
      }
    }
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, const std::string& kind,
              const std::string& suite_dir, const std::string& values_arg,
              const std::string& range_arg, const std::string& out_file,
              const std::string& svg_file) {
  const auto cases = load_suite(suite_dir);
  const auto values = parse_values(values_arg, range_arg);
  BenchContext ctx = make_context(config);

  if (kind == "threshold") {
    if (!std::is_sorted(values.begin(), values.end()))
      throw ParseError("sweep: threshold values must be sorted ascending");
    const auto points = pr_sweep(cases, values, ctx);
    write_text(out_file, pr_sweep_csv(points));
    if (!svg_file.empty()) {
      svg::Series pr{"PR", "#1f77b4", {}, {}};
      for (const auto& p : points)
        if (p.report.pip_defined() && p.report.pir_defined() &&
            p.report.merges_attempted() > 0)
          pr.points.emplace_back(p.report.pir(), p.report.pip());
      svg::write_line_plot(svg_file, "merge threshold sweep", "recall", "precision", {pr});
    }
  } else if (kind == "beta") {
    const auto points = beta_sweep(cases, values, ctx, config.eval_repeats);
    write_text(out_file, beta_sweep_csv(points));
    if (!svg_file.empty()) {
      svg::Series s{"no_fusion", "#1f77b4", {}, {}};
      for (const auto& p : points) {
        s.points.emplace_back(p.beta, p.psa_mean);
        s.yerr.push_back(p.psa_stderr);
      }
      svg::write_line_plot(svg_file, "selection accuracy vs goal weight", "beta", "psa", {s});
    }
  } else {
    throw ParseError("sweep: kind must be 'threshold' or 'beta'");
  }
  return kExitOk;
}

int cmd_replay(const std::string& log_file, const std::string& out_dir) {
  const SimLog log = load_simlog(log_file);
  const int frames = replay(log, out_dir);
  std::cout << "frames=" << frames << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navfuse: BEV path planning with path fusion"};
  app.require_subcommand(1);

  std::string config_file;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool ci_mode = false;
  int jobs = 1;
  std::string strategy_override, merge_threshold_override, goal_weight_override;
  app.add_option("--config", config_file, "JSON config file (flags override file values)");
  app.add_option("--seed", seed, "master seed")
      ->capture_default_str()
      ->each([&](const std::string&) { seed_given = true; });
  app.add_flag("--ci", ci_mode, "CI mode: --seed becomes mandatory");
  app.add_option("--jobs", jobs, "worker threads for bench/sweep")->capture_default_str();
  app.add_option("--strategy", strategy_override,
                 "planner strategy: no_fusion|kmeans_only|euclidean|angular");
  app.add_option("--merge-threshold", merge_threshold_override,
                 "fusion merge threshold (meters)");
  app.add_option("--goal-weight", goal_weight_override,
                 "goal-cost weight for no_fusion planning");

  auto* plan_cmd = app.add_subcommand("plan", "single-shot plan from a mask file");
  std::string mask_file, calib_file, plan_out = "-", plan_svg;
  double goal_bearing = 0.0;
  plan_cmd->add_option("--mask", mask_file, "traversability mask (P5 PGM)")->required();
  plan_cmd->add_option("--calib", calib_file, "ray table file (default: pinhole from config)");
  plan_cmd->add_option("--goal-bearing", goal_bearing,
                       "goal bearing in radians, positive to the right")
      ->capture_default_str()
      ->check(CLI::Range(-kPi, kPi));
  plan_cmd->add_option("--out", plan_out, "diagnostics JSON output ('-' = stdout)")
      ->capture_default_str();
  plan_cmd->add_option("--svg", plan_svg, "optional scene SVG output");

  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop mission run");
  std::string world_file, mission_file, sim_log;
  sim_cmd->add_option("--world", world_file, "world JSON file")->required();
  sim_cmd->add_option("--mission", mission_file, "mission JSON file")->required();
  sim_cmd->add_option("--log", sim_log, "write JSON-lines log here");

  auto* bench_cmd = app.add_subcommand("bench", "fusion/selection strategy benchmark");
  std::string suite_dir, strategies = "no_fusion,kmeans_only,euclidean,angular";
  std::string bench_out = "-", assert_ordering;
  bench_cmd->add_option("--suite", suite_dir, "directory of case JSON files")->required();
  bench_cmd->add_option("--strategies", strategies, "comma-separated strategy list")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "CSV output ('-' = stdout)")->capture_default_str();
  bench_cmd->add_option("--assert-ordering", assert_ordering,
                        "fail (exit 4) unless PSA ordering holds, e.g. angular>es>nf");

  auto* sweep_cmd = app.add_subcommand("sweep", "threshold or beta sweep over a suite");
  std::string sweep_kind, sweep_values, sweep_range, sweep_out = "-", sweep_svg;
  sweep_cmd->add_option("--kind", sweep_kind, "'threshold' or 'beta'")->required();
  sweep_cmd->add_option("--suite", suite_dir, "directory of case JSON files")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated sweep values");
  sweep_cmd->add_option("--range", sweep_range, "lo:hi:count inclusive linspace");
  sweep_cmd->add_option("--out", sweep_out, "CSV output ('-' = stdout)")->capture_default_str();
  sweep_cmd->add_option("--svg", sweep_svg, "optional SVG plot output");

  auto* replay_cmd = app.add_subcommand("replay", "render SVG frames from a sim log");
  std::string replay_log, replay_out = "replay_frames";
  replay_cmd->add_option("--log", replay_log, "JSON-lines sim log")->required();
  replay_cmd->add_option("--out", replay_out, "output frame directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (ci_mode && !seed_given) throw ParseError("--ci requires an explicit --seed");

    RunConfig config;
    if (!config_file.empty()) config = RunConfig::load(config_file);
    if (seed_given) config.seed = seed;
    if (jobs > 0) config.jobs = jobs;
    if (!strategy_override.empty()) {
      const auto s = strategy_from_string(strategy_override);
      if (!s) throw ParseError("unknown strategy '" + strategy_override + "'");
      config.planner.strategy = *s;
    }
    if (!merge_threshold_override.empty())
      config.planner.fusion.merge_threshold = std::stod(merge_threshold_override);
    if (!goal_weight_override.empty())
      config.planner.goal_weight = std::stod(goal_weight_override);
    config.sim.planner = config.planner;
    config.sim.sampler = config.sampler;
    config.sim.grid = config.grid;
    config.validate();

    if (plan_cmd->parsed())
      return cmd_plan(config, mask_file, calib_file, goal_bearing, plan_out, plan_svg);
    if (sim_cmd->parsed()) return cmd_simulate(config, world_file, mission_file, sim_log);
    if (bench_cmd->parsed())
      return cmd_bench(config, suite_dir, strategies, bench_out, assert_ordering);
    if (sweep_cmd->parsed())
      return cmd_sweep(config, sweep_kind, suite_dir, sweep_values, sweep_range, sweep_out,
                       sweep_svg);
    if (replay_cmd->parsed()) return cmd_replay(replay_log, replay_out);
    return kExitParse;
  } catch (const NoPathError& e) {
    std::fprintf(stderr, "no path: %s\n", e.what());
    return kExitNoPath;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}
