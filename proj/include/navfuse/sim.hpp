#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "navfuse/camera.hpp"
#include "navfuse/costmap.hpp"
#include "navfuse/fusion.hpp"
#include "navfuse/geometry.hpp"
#include "navfuse/mask.hpp"
#include "navfuse/paths.hpp"

#include <nlohmann/json.hpp>

namespace navfuse {

enum class ScenarioKind { open, corridor, fork, fork_with_deadend, obstacle_field };

const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_from_string(const std::string& name);

// Labeled corridor centerline; ground truth for branch-membership metrics.
struct BranchAnnotation {
  std::string label;
  std::vector<Vec2> polyline;  // world frame
  double width{0.0};           // full corridor width
  bool goal_correct{false};

  bool contains(const Vec2& point) const;  // within width/2 of the polyline
};

// Knobs for synthesize_world. Fields are ignored when they do not apply to
// the scenario kind. Bearings are robot-frame at the canonical start pose,
// positive to the right.
struct WorldParams {
  double extent{16.0};
  double resolution{0.05};
  double corridor_width{2.0};
  double corridor_length{12.0};
  double corridor_bearing{0.0};
  double stem_length{3.0};
  double branch_angle{kPi / 6.0};  // fork half-angle
  double branch_length{8.0};
  double branch_width_left{0.0};   // 0 = corridor_width
  double branch_width_right{0.0};
  double deadend_length{2.5};
  int deadend_branch{1};           // 0 = left, 1 = right
  int obstacle_count{0};
  double obstacle_radius{0.3};
  double goal_bearing{0.0};        // marks the goal-correct branch

  nlohmann::ordered_json to_json() const;
  static WorldParams from_json(const nlohmann::json& j);  // unknown keys rejected
};

// Synthetic ground-truth environment. truth cells are exactly 0 or 1.
struct World {
  ScenarioKind kind{ScenarioKind::open};
  WorldParams params;
  std::uint64_t seed{0};
  CostMap truth;                        // origin (0,0), extent x extent
  std::vector<BranchAnnotation> branches;
  Pose start;                           // canonical start pose
  int correct_branch{-1};

  bool truth_traversable(const Vec2& world_point) const;
  nlohmann::ordered_json spec_json() const;  // regenerable {scenario_kind, params, seed}
};

World synthesize_world(ScenarioKind kind, const WorldParams& params, std::uint64_t seed);
World world_from_spec(const nlohmann::json& spec);

// World file: either the regenerable {scenario_kind, params, seed} form or
// {grid: <costmap file>, annotations: <json file>, start: {x, z, theta}}.
World load_world_file(const std::string& path);
void save_world_file(const World& world, const std::string& path);

struct RobotState {
  Pose pose;
  double v{0.0};
  double omega{0.0};
};

struct NoiseSpec {
  double flip_p{0.0};
  int erode_px{0};
  std::uint64_t seed{0};
};

struct KinematicLimits {
  double v_max{1.0};
  double omega_max{1.5};
};

struct ControllerParams {
  double lookahead{0.8};
  double heading_gain{2.0};
  double v_min{0.05};
  KinematicLimits limits;
};

struct Mission {
  struct Checkpoint {
    Vec2 point;
    double radius{1.0};
  };
  std::vector<Checkpoint> checkpoints;
  int difficulty{1};
  double time_limit{60.0};
};

Mission load_mission_file(const std::string& path);
void save_mission_file(const Mission& mission, const std::string& path);

// Sensor oracle: per-pixel traversability by casting each camera ray to the
// ground plane and sampling the truth grid. Noise erodes the traversable
// region by erode_px, then flips each pixel independently with flip_p.
Mask render_observation(const World& world, const RobotState& state,
                        const CameraModel& camera, const NoiseSpec& noise);

// Unicycle Euler step; commands are clamped to the limits first.
RobotState step_kinematics(const RobotState& state, double v_cmd, double omega_cmd,
                           double dt, const KinematicLimits& limits);

// Pure-pursuit style tracking of a world-frame path: steer toward the first
// waypoint at least `lookahead` away from the robot, slow down as the
// heading error grows. Returns (v_cmd, omega_cmd).
std::pair<double, double> track_path(const Path& world_path, const RobotState& state,
                                     const ControllerParams& params);

// True iff any lethal truth cell intersects the closed footprint disk.
bool check_collision(const World& world, const RobotState& state, double footprint_radius);

enum class Outcome { success, partial, collision, timeout };
const char* to_string(Outcome o);

// ERC-style scoring: full difficulty when every checkpoint is reached,
// proportional partial credit otherwise, zero on collision.
double mission_score(int reached, int total, int difficulty, bool collided);

struct StepRecord {
  double t{0.0};
  Pose pose;
  double v{0.0};
  double omega{0.0};
  bool collision{false};
  int checkpoint_index{0};
  std::optional<nlohmann::ordered_json> replan;  // diagnostics, replan steps only
};

struct SimLog {
  nlohmann::ordered_json header;
  std::vector<StepRecord> steps;
  Outcome outcome{Outcome::timeout};
  double score{0.0};
  int reached{0};
  int total{0};
  double sim_time{0.0};
};

struct SimConfig {
  double dt{0.05};
  int substeps_per_replan{7};  // ~3 Hz replanning at dt = 0.05
  double footprint_radius{0.25};
  ControllerParams controller;
  NoiseSpec noise;
  int recovery_budget{8};
  double recovery_rotation{kPi / 4.0};
  GridSpec grid;
  SamplerSpec sampler;
  PlannerConfig planner;
};

// Receding-horizon loop: observe, project, plan, track, step, check
// collision; replan every substeps_per_replan control steps. A no-path plan
// triggers rotate-in-place recovery up to recovery_budget consecutive tries.
SimLog run_mission(const World& world, const Mission& mission, const SimConfig& config,
                   const CameraModel& camera, std::uint64_t seed);

// JSON-lines: header record, one record per step, outcome record last.
void save_simlog(const SimLog& log, const std::string& path);
SimLog load_simlog(const std::string& path);

// Renders one SVG frame per step into out_dir (frame_00000.svg, ...).
// Returns the number of frames written.
int replay(const SimLog& log, const std::string& out_dir);

}  // namespace navfuse
