#include "navfuse/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "navfuse/errors.hpp"
#include "navfuse/rng.hpp"

namespace navfuse {

double iou(const Mask& pred, const Mask& gt) {
  if (pred.width != gt.width || pred.height != gt.height)
    throw std::invalid_argument("iou: mask dimensions differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const bool a = pred.data[i] != 0, b = gt.data[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void save_case(const FusionCase& c, const std::string& path) {
  nlohmann::ordered_json j;
  j["world"] = c.world_spec;
  j["pose"] = {{"x", c.pose.x}, {"z", c.pose.z}, {"theta", c.pose.theta}};
  j["goal_bearing"] = c.goal_bearing;
  j["noise"] = {{"flip_p", c.noise.flip_p}, {"erode_px", c.noise.erode_px}, {"seed", c.noise.seed}};
  std::ofstream out(path);
  if (!out) throw ParseError("case: cannot write " + path);
  out << j.dump(2) << "\n";
}

FusionCase load_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("case: cannot open " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("case: bad JSON in " + path + ": " + e.what());
  }
  FusionCase c;
  try {
    c.world_spec = j.at("world");
    c.pose = {j.at("pose").at("x").get<double>(), j.at("pose").at("z").get<double>(),
              j.at("pose").at("theta").get<double>()};
    c.goal_bearing = j.at("goal_bearing").get<double>();
    c.noise.flip_p = j.at("noise").value("flip_p", 0.0);
    c.noise.erode_px = j.at("noise").value("erode_px", 0);
    c.noise.seed = j.at("noise").value("seed", 0ULL);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("case: bad schema in " + path + ": " + e.what());
  }
  return c;
}

std::vector<FusionCase> load_suite(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParseError("suite: no .json cases in " + dir);
  std::vector<FusionCase> cases;
  cases.reserve(files.size());
  for (const auto& f : files) cases.push_back(load_case(f.string()));
  return cases;
}

void save_suite(std::span<const FusionCase> cases, const std::string& dir) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (std::size_t i = 0; i < cases.size(); ++i) {
    std::snprintf(name, sizeof(name), "case_%04zu.json", i);
    save_case(cases[i], (std::filesystem::path(dir) / name).string());
  }
}

namespace {

// Strict waypoint-majority membership of a path in a branch corridor.
bool majority_inside(const BranchAnnotation& branch, const Path& path) {
  int inside = 0;
  for (const auto& w : path.waypoints) inside += branch.contains(w);
  return 2 * inside > path.size();
}

}  // namespace

MergeEvents classify_fusion(std::span<const BranchAnnotation> branches,
                            const PlanDiagnostics& diag) {
  MergeEvents ev;
  const auto& reps = diag.representatives.representatives;
  const int nb = static_cast<int>(branches.size());
  const bool multi = nb >= 2;

  // pure_count[j]: representatives whose sole majority membership is branch j.
  std::vector<int> pure_count(nb, 0);
  for (const auto& rep : reps) {
    std::vector<int> cover;
    for (int j = 0; j < nb; ++j)
      if (majority_inside(branches[j], rep)) cover.push_back(j);
    if (cover.size() == 1) {
      ++pure_count[cover[0]];
    } else {
      // Straddling two branches or belonging to none: a bad merge.
      ++ev.fp;
    }
  }
  for (int j = 0; j < nb; ++j) {
    if (pure_count[j] == 0) {
      ++ev.fn;  // branch not identified
    } else {
      if (multi)
        ++ev.tp;
      else
        ++ev.tn;
      ev.fn += pure_count[j] - 1;  // redundant groups that failed to merge
    }
  }
  return ev;
}

bool selection_correct(std::span<const BranchAnnotation> branches, int correct_branch,
                       const Path& selected) {
  if (correct_branch < 0 || correct_branch >= static_cast<int>(branches.size())) return false;
  return majority_inside(branches[correct_branch], selected);
}

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["cases"] = case_count;
  j["tp"] = totals.tp;
  j["fp"] = totals.fp;
  j["fn"] = totals.fn;
  j["tn"] = totals.tn;
  j["pip"] = pip_defined() ? nlohmann::ordered_json(pip()) : nlohmann::ordered_json(nullptr);
  j["pir"] = pir_defined() ? nlohmann::ordered_json(pir()) : nlohmann::ordered_json(nullptr);
  j["psa"] = psa();
  auto& pc = j["per_case"] = nlohmann::ordered_json::array();
  for (const auto& r : per_case) {
    pc.push_back({{"tp", r.events.tp},
                  {"fp", r.events.fp},
                  {"fn", r.events.fn},
                  {"tn", r.events.tn},
                  {"psa_hit", r.psa_hit},
                  {"representatives", r.representative_count},
                  {"clusters", r.cluster_count},
                  {"branches", r.branch_count}});
  }
  return j;
}

namespace {

// Bounded deterministic parallel map: worker t handles indices t, t+jobs, ...
// and writes into a preallocated slot, so results are independent of timing.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&, t]() {
      for (int i = t; i < count; i += jobs) fn(i);
    });
  for (auto& w : workers) w.join();
}

CaseRecord evaluate_case(const FusionCase& c, const BenchContext& ctx,
                         const PathSet& pathset, const NoiseSpec& noise) {
  const World world = world_from_spec(c.world_spec);
  RobotState state;
  state.pose = c.pose;
  const Mask mask = render_observation(world, state, ctx.camera, noise);
  const CostMap bev = project_mask_to_bev(ctx.camera, mask, ctx.grid);
  const Vec2 goal_dir = direction_from_bearing(c.goal_bearing);

  std::vector<BranchAnnotation> branches = world.branches;
  for (auto& b : branches)
    for (auto& pt : b.polyline) pt = world_to_robot(c.pose, pt);

  CaseRecord rec;
  rec.branch_count = static_cast<int>(branches.size());
  try {
    const PlanResult result = plan(pathset, bev, goal_dir, ctx.planner);
    rec.cluster_count = result.diagnostics.k;
    rec.representative_count =
        static_cast<int>(result.diagnostics.representatives.representatives.size());
    for (const auto& group : result.diagnostics.representatives.provenance)
      rec.merged_groups += group.size() >= 2;
    if (ctx.planner.strategy != Strategy::no_fusion)
      rec.events = classify_fusion(branches, result.diagnostics);
    rec.psa_hit = selection_correct(branches, world.correct_branch, result.diagnostics.selected);
  } catch (const NoPathError&) {
    // A blocked plan identifies nothing: every branch is missed.
    rec.events.fn = rec.branch_count;
    rec.psa_hit = false;
  }
  return rec;
}

}  // namespace

MetricReport run_fusion_bench(std::span<const FusionCase> cases, const BenchContext& ctx) {
  if (cases.empty()) throw std::invalid_argument("bench: no cases");
  const PathSet pathset = sample_paths(ctx.sampler, ctx.seed);

  std::vector<CaseRecord> records(cases.size());
  parallel_for(static_cast<int>(cases.size()), ctx.jobs, [&](int i) {
    records[i] = evaluate_case(cases[i], ctx, pathset, cases[i].noise);
  });

  MetricReport report;
  report.merge_metrics_defined = ctx.planner.strategy != Strategy::no_fusion;
  report.case_count = static_cast<int>(cases.size());
  for (const auto& r : records) {
    report.totals.tp += r.events.tp;
    report.totals.fp += r.events.fp;
    report.totals.fn += r.events.fn;
    report.totals.tn += r.events.tn;
    report.psa_hits += r.psa_hit;
  }
  report.per_case = std::move(records);
  return report;
}

std::vector<PrPoint> pr_sweep(std::span<const FusionCase> cases,
                              std::span<const double> thresholds, const BenchContext& ctx) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end()))
    throw std::invalid_argument("pr_sweep: thresholds must be sorted ascending");
  std::vector<PrPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    BenchContext swept = ctx;
    swept.planner.fusion.merge_threshold = t;
    out.push_back({t, run_fusion_bench(cases, swept)});
  }
  return out;
}

std::vector<BetaPoint> beta_sweep(std::span<const FusionCase> cases,
                                  std::span<const double> betas, const BenchContext& ctx,
                                  int repeats) {
  if (betas.empty()) throw std::invalid_argument("beta_sweep: no beta values");
  if (repeats < 1) throw std::invalid_argument("beta_sweep: repeats must be >= 1");

  std::vector<BetaPoint> out;
  out.reserve(betas.size());
  const PathSet pathset = sample_paths(ctx.sampler, ctx.seed);
  for (double beta : betas) {
    BenchContext swept = ctx;
    swept.planner.strategy = Strategy::no_fusion;
    swept.planner.goal_weight = beta;

    std::vector<double> psa_per_repeat(repeats, 0.0);
    for (int r = 0; r < repeats; ++r) {
      std::vector<int> hits(cases.size(), 0);
      parallel_for(static_cast<int>(cases.size()), ctx.jobs, [&](int i) {
        NoiseSpec noise = cases[i].noise;
        noise.seed = derive_seed(cases[i].noise.seed, static_cast<std::uint64_t>(r));
        hits[i] = evaluate_case(cases[i], swept, pathset, noise).psa_hit ? 1 : 0;
      });
      int total = 0;
      for (int h : hits) total += h;
      psa_per_repeat[r] = static_cast<double>(total) / cases.size();
    }

    BetaPoint pt;
    pt.beta = beta;
    double mean = 0.0;
    for (double p : psa_per_repeat) mean += p;
    mean /= repeats;
    pt.psa_mean = mean;
    if (repeats > 1) {
      double var = 0.0;
      for (double p : psa_per_repeat) var += (p - mean) * (p - mean);
      var /= (repeats - 1);
      pt.psa_stderr = std::sqrt(var / repeats);
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<FusionCase> make_fork_suite(int count, std::uint64_t seed,
                                        const SuiteParams& params) {
  if (count < 1) throw std::invalid_argument("suite: count must be >= 1");
  std::vector<FusionCase> cases;
  cases.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const bool single = rng.uniform() < params.single_branch_fraction;
    const double width =
        rng.uniform(params.corridor_width_min, params.corridor_width_max);

    WorldParams wp;
    wp.extent = 12.0;
    wp.resolution = 0.05;
    wp.corridor_width = width;
    wp.obstacle_count = static_cast<int>(rng.uniform_index(params.obstacle_count_max + 1));
    wp.obstacle_radius = rng.uniform(0.2, 0.35);

    ScenarioKind kind;
    if (single) {
      kind = ScenarioKind::corridor;
      wp.corridor_bearing = rng.uniform(-kPi / 12.0, kPi / 12.0);
      wp.corridor_length = 9.0;
      wp.goal_bearing =
          wp.corridor_bearing + rng.uniform(-params.goal_jitter, params.goal_jitter);
    } else {
      kind = ScenarioKind::fork;
      wp.stem_length = 1.2;
      wp.branch_angle = rng.uniform(params.branch_angle_min, params.branch_angle_max);
      wp.branch_length = 8.0;
      const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
      wp.goal_bearing = side * wp.branch_angle +
                        rng.uniform(-params.goal_jitter, params.goal_jitter);
    }

    FusionCase c;
    c.world_spec = nlohmann::ordered_json{{"scenario_kind", to_string(kind)},
                                          {"params", wp.to_json()},
                                          {"seed", derive_seed(seed, 0x5eedULL + i)}};
    const World world = world_from_spec(c.world_spec);
    c.pose = world.start;
    c.pose.x += rng.uniform(-0.25, 0.25);
    c.goal_bearing = wp.goal_bearing;
    c.noise.flip_p = rng.uniform(params.flip_p_min, params.flip_p_max);
    c.noise.erode_px = params.erode_px;
    c.noise.seed = derive_seed(seed, 0xca5eULL + i);
    cases.push_back(std::move(c));
  }
  return cases;
}

namespace {

std::string metric_cell(bool defined, double value) {
  if (!defined) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

std::string bench_csv(std::span<const std::pair<std::string, MetricReport>> rows) {
  std::ostringstream out;
  out << "method,pip,pir,psa\n";
  char buf[32];
  for (const auto& [name, report] : rows) {
    std::snprintf(buf, sizeof(buf), "%.4f", report.psa());
    out << name << "," << metric_cell(report.pip_defined(), report.pip_defined() ? report.pip() : 0.0)
        << "," << metric_cell(report.pir_defined(), report.pir_defined() ? report.pir() : 0.0)
        << "," << buf << "\n";
  }
  return out.str();
}

std::string pr_sweep_csv(std::span<const PrPoint> points) {
  std::ostringstream out;
  out << "threshold,precision,recall\n";
  char buf[64];
  for (const auto& p : points) {
    // A sweep point with no merges performed has no merge precision.
    const bool prec_ok = p.report.pip_defined() && p.report.merges_attempted() > 0;
    std::snprintf(buf, sizeof(buf), "%.6g,", p.threshold);
    out << buf << metric_cell(prec_ok, prec_ok ? p.report.pip() : 0.0) << ","
        << metric_cell(p.report.pir_defined(), p.report.pir_defined() ? p.report.pir() : 0.0)
        << "\n";
  }
  return out.str();
}

std::string beta_sweep_csv(std::span<const BetaPoint> points) {
  std::ostringstream out;
  out << "beta,psa_mean,psa_stderr\n";
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6f,%.6f\n", p.beta, p.psa_mean, p.psa_stderr);
    out << buf;
  }
  return out.str();
}

}  // namespace navfuse
