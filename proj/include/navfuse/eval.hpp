#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "navfuse/camera.hpp"
#include "navfuse/fusion.hpp"
#include "navfuse/mask.hpp"
#include "navfuse/sim.hpp"

#include <nlohmann/json.hpp>

namespace navfuse {

// Intersection over union of two binary masks; the empty-union case is 1.
double iou(const Mask& pred, const Mask& gt);

// One benchmark scene: a world observed from a pose with a goal bearing.
struct FusionCase {
  nlohmann::ordered_json world_spec;  // regenerable world description
  Pose pose;
  double goal_bearing{0.0};  // robot frame, right-positive
  NoiseSpec noise;
};

void save_case(const FusionCase& c, const std::string& path);
FusionCase load_case(const std::string& path);
std::vector<FusionCase> load_suite(const std::string& dir);
void save_suite(std::span<const FusionCase> cases, const std::string& dir);

// Merge-decision bookkeeping. A representative belongs to a branch when a
// strict majority of its waypoints fall inside the branch corridor.
//   FP: a representative covering >= 2 branches, or none at all.
//   FN: extra representatives inside an already-covered branch, or a branch
//       left without a representative.
//   TP: a branch covered by exactly one representative (multi-branch case).
//   TN: the same outcome in a single-branch case.
struct MergeEvents {
  int tp{0};
  int fp{0};
  int fn{0};
  int tn{0};
};

struct CaseRecord {
  MergeEvents events;
  bool psa_hit{false};
  int representative_count{0};
  int cluster_count{0};
  int branch_count{0};
  int merged_groups{0};  // representatives formed from >= 2 clusters
};

struct MetricReport {
  MergeEvents totals;
  int psa_hits{0};
  int case_count{0};
  bool merge_metrics_defined{true};  // false for the no-fusion strategy
  std::vector<CaseRecord> per_case;

  bool pip_defined() const { return merge_metrics_defined && totals.tp + totals.fp > 0; }
  bool pir_defined() const { return merge_metrics_defined && totals.tp + totals.fn > 0; }
  double pip() const { return static_cast<double>(totals.tp) / (totals.tp + totals.fp); }
  double pir() const { return static_cast<double>(totals.tp) / (totals.tp + totals.fn); }
  double psa() const { return case_count ? static_cast<double>(psa_hits) / case_count : 0.0; }
  // Threshold merges performed anywhere in the suite; zero means a sweep
  // point's merge precision is undefined rather than 0 or 1.
  int merges_attempted() const {
    int n = 0;
    for (const auto& r : per_case) n += r.merged_groups;
    return n;
  }

  nlohmann::ordered_json to_json() const;
};

// Classifies the fusion outcome of one case. Branches must be expressed in
// the same (robot) frame as the diagnostics' representatives.
MergeEvents classify_fusion(std::span<const BranchAnnotation> branches,
                            const PlanDiagnostics& diag);

// True when the selected path has a strict waypoint majority inside the
// goal-correct branch corridor.
bool selection_correct(std::span<const BranchAnnotation> branches, int correct_branch,
                       const Path& selected);

// Everything a bench run needs besides the cases themselves.
struct BenchContext {
  CameraModel camera;
  GridSpec grid;
  SamplerSpec sampler;
  PlannerConfig planner;
  std::uint64_t seed{0};  // path-set seed
  int jobs{1};
};

MetricReport run_fusion_bench(std::span<const FusionCase> cases, const BenchContext& ctx);

struct PrPoint {
  double threshold{0.0};
  MetricReport report;
};

// One bench run per merge threshold, all other knobs fixed. Thresholds must
// be sorted ascending.
std::vector<PrPoint> pr_sweep(std::span<const FusionCase> cases,
                              std::span<const double> thresholds,
                              const BenchContext& ctx);

struct BetaPoint {
  double beta{0.0};
  double psa_mean{0.0};
  double psa_stderr{0.0};
};

// No-fusion selection accuracy per goal weight, averaged over `repeats`
// re-noised evaluations of the suite.
std::vector<BetaPoint> beta_sweep(std::span<const FusionCase> cases,
                                  std::span<const double> betas,
                                  const BenchContext& ctx, int repeats);

// Distribution knobs for the synthetic fork suite generator.
struct SuiteParams {
  double single_branch_fraction{0.25};
  double branch_angle_min{kPi / 9.0};       // 20 deg
  double branch_angle_max{7.0 * kPi / 36.0};  // 35 deg
  double corridor_width_min{1.2};
  double corridor_width_max{1.8};
  double goal_jitter{kPi / 18.0};  // +/- 10 deg around the correct branch
  double flip_p_min{0.02};
  double flip_p_max{0.06};
  int erode_px{1};
  int obstacle_count_max{6};
};

// Seeded generator for the synthetic fork benchmark: a mix of fork scenes
// (goal-correct branch marked) and single-branch corridor scenes.
std::vector<FusionCase> make_fork_suite(int count, std::uint64_t seed,
                                        const SuiteParams& params);

// CSV emitters. Undefined precision/recall cells hold "-".
std::string bench_csv(std::span<const std::pair<std::string, MetricReport>> rows);
std::string pr_sweep_csv(std::span<const PrPoint> points);
std::string beta_sweep_csv(std::span<const BetaPoint> points);

}  // namespace navfuse
