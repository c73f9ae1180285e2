#include "navfuse/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "navfuse/errors.hpp"
#include "navfuse/rng.hpp"
#include "navfuse/svg.hpp"

namespace navfuse {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::open: return "open";
    case ScenarioKind::corridor: return "corridor";
    case ScenarioKind::fork: return "fork";
    case ScenarioKind::fork_with_deadend: return "fork_with_deadend";
    case ScenarioKind::obstacle_field: return "obstacle_field";
  }
  return "open";
}

std::optional<ScenarioKind> scenario_from_string(const std::string& name) {
  if (name == "open") return ScenarioKind::open;
  if (name == "corridor") return ScenarioKind::corridor;
  if (name == "fork") return ScenarioKind::fork;
  if (name == "fork_with_deadend") return ScenarioKind::fork_with_deadend;
  if (name == "obstacle_field") return ScenarioKind::obstacle_field;
  return std::nullopt;
}

bool BranchAnnotation::contains(const Vec2& point) const {
  const double half = width / 2.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    if (point_segment_distance(point, polyline[i], polyline[i + 1]) <= half) return true;
  return false;
}

nlohmann::ordered_json WorldParams::to_json() const {
  nlohmann::ordered_json j;
  j["extent"] = extent;
  j["resolution"] = resolution;
  j["corridor_width"] = corridor_width;
  j["corridor_length"] = corridor_length;
  j["corridor_bearing"] = corridor_bearing;
  j["stem_length"] = stem_length;
  j["branch_angle"] = branch_angle;
  j["branch_length"] = branch_length;
  j["branch_width_left"] = branch_width_left;
  j["branch_width_right"] = branch_width_right;
  j["deadend_length"] = deadend_length;
  j["deadend_branch"] = deadend_branch;
  j["obstacle_count"] = obstacle_count;
  j["obstacle_radius"] = obstacle_radius;
  j["goal_bearing"] = goal_bearing;
  return j;
}

WorldParams WorldParams::from_json(const nlohmann::json& j) {
  WorldParams p;
  static const std::set<std::string> known = {
      "extent",         "resolution",     "corridor_width", "corridor_length",
      "corridor_bearing", "stem_length",  "branch_angle",   "branch_length",
      "deadend_length", "deadend_branch", "obstacle_count", "obstacle_radius",
      "goal_bearing"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ParseError("world params: unknown key '" + it.key() + "'");
  p.extent = j.value("extent", p.extent);
  p.resolution = j.value("resolution", p.resolution);
  p.corridor_width = j.value("corridor_width", p.corridor_width);
  p.corridor_length = j.value("corridor_length", p.corridor_length);
  p.corridor_bearing = j.value("corridor_bearing", p.corridor_bearing);
  p.stem_length = j.value("stem_length", p.stem_length);
  p.branch_angle = j.value("branch_angle", p.branch_angle);
  p.branch_length = j.value("branch_length", p.branch_length);
  p.deadend_length = j.value("deadend_length", p.deadend_length);
  p.deadend_branch = j.value("deadend_branch", p.deadend_branch);
  p.obstacle_count = j.value("obstacle_count", p.obstacle_count);
  p.obstacle_radius = j.value("obstacle_radius", p.obstacle_radius);
  p.goal_bearing = j.value("goal_bearing", p.goal_bearing);
  return p;
}

bool World::truth_traversable(const Vec2& world_point) const {
  return truth.point_cost(world_point) < 0.5;
}

nlohmann::ordered_json World::spec_json() const {
  nlohmann::ordered_json j;
  j["scenario_kind"] = to_string(kind);
  j["params"] = params.to_json();
  j["seed"] = seed;
  return j;
}

namespace {

// Carves every cell within width/2 of segment [a, b] as traversable.
void carve_corridor(CostMap& grid, const Vec2& a, const Vec2& b, double width) {
  const auto& s = grid.spec();
  const double half = width / 2.0;
  const double lo_x = std::min(a.x, b.x) - half, hi_x = std::max(a.x, b.x) + half;
  const double lo_z = std::min(a.z, b.z) - half, hi_z = std::max(a.z, b.z) + half;
  const int ix0 = std::max(0, static_cast<int>(std::floor((lo_x - s.origin_x) / s.resolution)));
  const int ix1 = std::min(s.width - 1, static_cast<int>(std::floor((hi_x - s.origin_x) / s.resolution)));
  const int iz0 = std::max(0, static_cast<int>(std::floor((lo_z - s.origin_z) / s.resolution)));
  const int iz1 = std::min(s.height - 1, static_cast<int>(std::floor((hi_z - s.origin_z) / s.resolution)));
  for (int iz = iz0; iz <= iz1; ++iz)
    for (int ix = ix0; ix <= ix1; ++ix)
      if (point_segment_distance(grid.cell_center({ix, iz}), a, b) <= half)
        grid.set(ix, iz, 0.0);
}

void fill_disc(CostMap& grid, const Vec2& center, double radius, double cost) {
  const auto& s = grid.spec();
  const int ix0 = std::max(0, static_cast<int>(std::floor((center.x - radius - s.origin_x) / s.resolution)));
  const int ix1 = std::min(s.width - 1, static_cast<int>(std::floor((center.x + radius - s.origin_x) / s.resolution)));
  const int iz0 = std::max(0, static_cast<int>(std::floor((center.z - radius - s.origin_z) / s.resolution)));
  const int iz1 = std::min(s.height - 1, static_cast<int>(std::floor((center.z + radius - s.origin_z) / s.resolution)));
  for (int iz = iz0; iz <= iz1; ++iz)
    for (int ix = ix0; ix <= ix1; ++ix)
      if ((grid.cell_center({ix, iz}) - center).norm() <= radius) grid.set(ix, iz, cost);
}

// Scatters lethal discs over traversable ground, keeping a clearance bubble
// around the start pose.
void scatter_obstacles(CostMap& grid, int count, double radius, const Pose& start,
                       double clearance, Rng& rng) {
  const auto& s = grid.spec();
  int placed = 0, attempts = 0;
  while (placed < count && attempts < count * 50) {
    ++attempts;
    const Vec2 c{s.origin_x + rng.uniform() * s.extent_x(),
                 s.origin_z + rng.uniform() * s.extent_z()};
    if (std::hypot(c.x - start.x, c.z - start.z) < clearance) continue;
    if (grid.point_cost(c) >= 0.5) continue;  // only on open ground
    fill_disc(grid, c, radius, 1.0);
    ++placed;
  }
}

}  // namespace

World synthesize_world(ScenarioKind kind, const WorldParams& params, std::uint64_t seed) {
  if (params.extent <= 0.0 || params.resolution <= 0.0)
    throw std::invalid_argument("world: extent and resolution must be > 0");
  const int cells = static_cast<int>(std::lround(params.extent / params.resolution));

  GridSpec spec;
  spec.resolution = params.resolution;
  spec.width = cells;
  spec.height = cells;
  spec.origin_x = 0.0;
  spec.origin_z = 0.0;
  spec.unknown_cost = 1.0;  // truth grids are binary: 0 or 1

  World world;
  world.kind = kind;
  world.params = params;
  world.seed = seed;
  world.truth = CostMap(spec);
  world.start = Pose{params.extent / 2.0, 1.0, kPi / 2.0};
  Rng rng(seed);

  const Vec2 start_pt{world.start.x, world.start.z};
  // At the canonical start pose the robot frame and world frame axes
  // coincide, so robot-frame bearings map to world offsets directly.
  auto ahead = [&](double bearing, double dist, const Vec2& from) {
    return from + direction_from_bearing(bearing) * dist;
  };

  switch (kind) {
    case ScenarioKind::open: {
      for (auto& c : world.truth.cells()) c = 0.0;
      break;
    }
    case ScenarioKind::obstacle_field: {
      for (auto& c : world.truth.cells()) c = 0.0;
      scatter_obstacles(world.truth, params.obstacle_count, params.obstacle_radius,
                        world.start, 1.5, rng);
      break;
    }
    case ScenarioKind::corridor: {
      const Vec2 end = ahead(params.corridor_bearing, params.corridor_length, start_pt);
      carve_corridor(world.truth, start_pt, end, params.corridor_width);
      BranchAnnotation b;
      b.label = "corridor";
      b.polyline = {start_pt, end};
      b.width = params.corridor_width;
      b.goal_correct = true;
      world.branches.push_back(b);
      world.correct_branch = 0;
      break;
    }
    case ScenarioKind::fork:
    case ScenarioKind::fork_with_deadend: {
      const Vec2 fork_pt = ahead(0.0, params.stem_length, start_pt);
      carve_corridor(world.truth, start_pt, fork_pt, params.corridor_width);
      const double bearings[2] = {-params.branch_angle, params.branch_angle};
      const char* labels[2] = {"left", "right"};
      for (int side = 0; side < 2; ++side) {
        double carved_len = params.branch_length;
        if (kind == ScenarioKind::fork_with_deadend && side == params.deadend_branch)
          carved_len = params.deadend_length;
        const Vec2 carve_end = ahead(bearings[side], carved_len, fork_pt);
        carve_corridor(world.truth, fork_pt, carve_end, params.corridor_width);

        // The annotation starts at the fork: the shared stem belongs to no
        // branch, so waypoint-majority membership can discriminate sides.
        BranchAnnotation b;
        b.label = labels[side];
        b.polyline = {fork_pt, ahead(bearings[side], params.branch_length, fork_pt)};
        b.width = params.corridor_width;
        world.branches.push_back(b);
      }
      // Goal-correct branch: nearest bearing to the goal.
      const int correct =
          std::abs(params.goal_bearing - bearings[0]) <= std::abs(params.goal_bearing - bearings[1])
              ? 0
              : 1;
      world.branches[correct].goal_correct = true;
      world.correct_branch = correct;
      break;
    }
  }

  if (kind != ScenarioKind::obstacle_field && params.obstacle_count > 0)
    scatter_obstacles(world.truth, params.obstacle_count, params.obstacle_radius,
                      world.start, 1.5, rng);
  return world;
}

World world_from_spec(const nlohmann::json& spec) {
  const auto kind = scenario_from_string(spec.at("scenario_kind").get<std::string>());
  if (!kind) throw ParseError("world: unknown scenario_kind");
  const auto params = WorldParams::from_json(spec.value("params", nlohmann::json::object()));
  return synthesize_world(*kind, params, spec.value("seed", 0ULL));
}

World load_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("world: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("world: bad JSON in " + path + ": " + e.what());
  }
  if (j.contains("scenario_kind")) return world_from_spec(j);

  // Explicit form: grid dump + annotations.
  if (!j.contains("grid")) throw ParseError("world: need scenario_kind or grid in " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  World world;
  world.kind = ScenarioKind::open;
  world.truth = load_costmap_text((dir / j.at("grid").get<std::string>()).string());
  world.params.extent = world.truth.spec().extent_x();
  world.params.resolution = world.truth.spec().resolution;
  if (j.contains("start")) {
    world.start.x = j["start"].value("x", 0.0);
    world.start.z = j["start"].value("z", 0.0);
    world.start.theta = j["start"].value("theta", kPi / 2.0);
  }
  if (j.contains("annotations")) {
    std::ifstream ain(dir / j.at("annotations").get<std::string>());
    if (!ain) throw ParseError("world: cannot open annotations file");
    nlohmann::json aj;
    ain >> aj;
    int idx = 0;
    for (const auto& bj : aj.at("branches")) {
      BranchAnnotation b;
      b.label = bj.value("label", std::string("branch") + std::to_string(idx));
      b.width = bj.at("width").get<double>();
      b.goal_correct = bj.value("goal_correct", false);
      for (const auto& pt : bj.at("polyline"))
        b.polyline.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
      if (b.goal_correct) world.correct_branch = idx;
      world.branches.push_back(std::move(b));
      ++idx;
    }
  }
  return world;
}

void save_world_file(const World& world, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("world: cannot write " + path);
  out << world.spec_json().dump(2) << "\n";
}

Mission load_mission_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("mission: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("mission: bad JSON in " + path + ": " + e.what());
  }
  Mission m;
  try {
    for (const auto& cj : j.at("checkpoints")) {
      Mission::Checkpoint c;
      c.point = {cj.at("x").get<double>(), cj.at("z").get<double>()};
      c.radius = cj.value("radius", 1.0);
      if (c.radius <= 0.0) throw ParseError("mission: checkpoint radius must be > 0");
      m.checkpoints.push_back(c);
    }
    m.difficulty = j.value("difficulty", 1);
    m.time_limit = j.value("time_limit", 60.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("mission: bad schema in " + path + ": " + e.what());
  }
  if (m.checkpoints.empty()) throw ParseError("mission: needs at least one checkpoint");
  return m;
}

void save_mission_file(const Mission& mission, const std::string& path) {
  nlohmann::ordered_json j;
  auto& cps = j["checkpoints"] = nlohmann::ordered_json::array();
  for (const auto& c : mission.checkpoints)
    cps.push_back({{"x", c.point.x}, {"z", c.point.z}, {"radius", c.radius}});
  j["difficulty"] = mission.difficulty;
  j["time_limit"] = mission.time_limit;
  std::ofstream out(path);
  if (!out) throw ParseError("mission: cannot write " + path);
  out << j.dump(2) << "\n";
}

Mask render_observation(const World& world, const RobotState& state,
                        const CameraModel& camera, const NoiseSpec& noise) {
  Mask mask(camera.width, camera.height);
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const auto hit = intersect_ray_ground(camera.ray(u, v), camera.height_m);
      if (!hit) continue;  // sky stays non-traversable
      const Vec2 world_pt = robot_to_world(state.pose, *hit);
      mask.set(u, v, world.truth.cell_of(world_pt) && world.truth_traversable(world_pt));
    }
  }

  if (noise.erode_px > 0) {
    // Separable min filter: a pixel survives only if its whole
    // (2r+1)-square neighborhood is traversable.
    const int r = noise.erode_px;
    Mask tmp = mask;
    for (int v = 0; v < mask.height; ++v)
      for (int u = 0; u < mask.width; ++u) {
        std::uint8_t keep = 1;
        for (int du = -r; du <= r && keep; ++du) {
          const int uu = u + du;
          if (uu < 0 || uu >= mask.width || !mask.at(uu, v)) keep = 0;
        }
        tmp.set(u, v, keep != 0);
      }
    for (int v = 0; v < mask.height; ++v)
      for (int u = 0; u < mask.width; ++u) {
        std::uint8_t keep = 1;
        for (int dv = -r; dv <= r && keep; ++dv) {
          const int vv = v + dv;
          if (vv < 0 || vv >= mask.height || !tmp.at(u, vv)) keep = 0;
        }
        mask.set(u, v, keep != 0);
      }
  }

  if (noise.flip_p > 0.0) {
    Rng rng(noise.seed);
    for (auto& px : mask.data)
      if (rng.bernoulli(noise.flip_p)) px = px ? 0 : 1;
  }
  return mask;
}

RobotState step_kinematics(const RobotState& state, double v_cmd, double omega_cmd,
                           double dt, const KinematicLimits& limits) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
  const double v = std::clamp(v_cmd, -limits.v_max, limits.v_max);
  const double w = std::clamp(omega_cmd, -limits.omega_max, limits.omega_max);
  RobotState next = state;
  next.pose.x += v * std::cos(state.pose.theta) * dt;
  next.pose.z += v * std::sin(state.pose.theta) * dt;
  next.pose.theta = normalize_angle(state.pose.theta + w * dt);
  next.v = v;
  next.omega = w;
  return next;
}

std::pair<double, double> track_path(const Path& world_path, const RobotState& state,
                                     const ControllerParams& params) {
  if (world_path.waypoints.empty()) throw std::invalid_argument("track: empty path");
  const Vec2 here{state.pose.x, state.pose.z};
  const Vec2* target = &world_path.waypoints.back();
  for (const auto& wp : world_path.waypoints) {
    if ((wp - here).norm() >= params.lookahead) {
      target = &wp;
      break;
    }
  }
  const Vec2 local = world_to_robot(state.pose, *target);
  // Heading error, CCW(left)-positive so it matches omega's sign.
  const double psi = std::atan2(-local.x, local.z);
  const double omega = std::clamp(params.heading_gain * psi, -params.limits.omega_max,
                                  params.limits.omega_max);
  const double v =
      params.v_min + (params.limits.v_max - params.v_min) * std::max(0.0, std::cos(psi));
  return {v, omega};
}

bool check_collision(const World& world, const RobotState& state, double footprint_radius) {
  if (footprint_radius <= 0.0)
    throw std::invalid_argument("collision: footprint_radius must be > 0");
  const auto& s = world.truth.spec();
  const double cx = state.pose.x, cz = state.pose.z;
  const int ix0 = std::max(0, static_cast<int>(std::floor((cx - footprint_radius - s.origin_x) / s.resolution)));
  const int ix1 = std::min(s.width - 1, static_cast<int>(std::floor((cx + footprint_radius - s.origin_x) / s.resolution)));
  const int iz0 = std::max(0, static_cast<int>(std::floor((cz - footprint_radius - s.origin_z) / s.resolution)));
  const int iz1 = std::min(s.height - 1, static_cast<int>(std::floor((cz + footprint_radius - s.origin_z) / s.resolution)));
  for (int iz = iz0; iz <= iz1; ++iz) {
    for (int ix = ix0; ix <= ix1; ++ix) {
      if (world.truth.at(ix, iz) < 1.0) continue;
      // Closed-disk vs cell box: clamp the center into the box.
      const double bx0 = s.origin_x + ix * s.resolution, bx1 = bx0 + s.resolution;
      const double bz0 = s.origin_z + iz * s.resolution, bz1 = bz0 + s.resolution;
      const double nx = std::clamp(cx, bx0, bx1);
      const double nz = std::clamp(cz, bz0, bz1);
      if (std::hypot(cx - nx, cz - nz) <= footprint_radius) return true;
    }
  }
  return false;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::partial: return "partial";
    case Outcome::collision: return "collision";
    case Outcome::timeout: return "timeout";
  }
  return "timeout";
}

double mission_score(int reached, int total, int difficulty, bool collided) {
  if (total < 1) throw std::invalid_argument("score: total must be >= 1");
  if (collided) return 0.0;
  if (reached >= total) return static_cast<double>(difficulty);
  return static_cast<double>(difficulty) * reached / total;
}

SimLog run_mission(const World& world, const Mission& mission, const SimConfig& config,
                   const CameraModel& camera, std::uint64_t seed) {
  if (mission.checkpoints.empty()) throw std::invalid_argument("mission: no checkpoints");
  config.planner.validate();
  config.sampler.validate();
  config.grid.validate();

  SimLog log;
  log.total = static_cast<int>(mission.checkpoints.size());
  log.header["type"] = "header";
  log.header["world"] = world.spec_json();
  {
    nlohmann::ordered_json mj;
    auto& cps = mj["checkpoints"] = nlohmann::ordered_json::array();
    for (const auto& c : mission.checkpoints)
      cps.push_back({{"x", c.point.x}, {"z", c.point.z}, {"radius", c.radius}});
    mj["difficulty"] = mission.difficulty;
    mj["time_limit"] = mission.time_limit;
    log.header["mission"] = mj;
  }
  log.header["seed"] = seed;

  const PathSet pathset = sample_paths(config.sampler, derive_seed(seed, 0));
  RobotState state;
  state.pose = world.start;

  double t = 0.0;
  int reached = 0;
  int replans = 0;
  int recovery_left = config.recovery_budget;
  std::optional<Outcome> outcome;

  auto record_step = [&](const std::optional<nlohmann::ordered_json>& replan_diag,
                         bool collided) {
    StepRecord rec;
    rec.t = t;
    rec.pose = state.pose;
    rec.v = state.v;
    rec.omega = state.omega;
    rec.collision = collided;
    rec.checkpoint_index = reached;
    rec.replan = replan_diag;
    log.steps.push_back(std::move(rec));
  };

  while (!outcome && t < mission.time_limit) {
    ++replans;
    const Vec2 goal_world = mission.checkpoints[reached].point;
    NoiseSpec step_noise = config.noise;
    step_noise.seed = derive_seed(seed, 1000 + replans);
    const Mask mask = render_observation(world, state, camera, step_noise);
    const CostMap bev = project_mask_to_bev(camera, mask, config.grid);

    Vec2 goal_local = world_to_robot(state.pose, goal_world);
    const double goal_dist = goal_local.norm();
    const Vec2 goal_dir =
        goal_dist > 1e-9 ? goal_local * (1.0 / goal_dist) : Vec2{0.0, 1.0};

    std::optional<PlanResult> result;
    try {
      result = plan(pathset, bev, goal_dir, config.planner);
      recovery_left = config.recovery_budget;
    } catch (const NoPathError&) {
      // Rotate-in-place recovery: spin a fixed increment toward the goal
      // side, re-observe, and try again up to the budget.
      if (--recovery_left < 0) {
        outcome = Outcome::timeout;
        break;
      }
      const double dir = bearing_of(goal_local) >= 0.0 ? -1.0 : 1.0;  // omega sign
      double remaining = config.recovery_rotation;
      while (remaining > 1e-9 && t < mission.time_limit) {
        const double step_angle =
            std::min(remaining, config.controller.limits.omega_max * config.dt);
        state = step_kinematics(state, 0.0, dir * step_angle / config.dt, config.dt,
                                config.controller.limits);
        t += config.dt;
        remaining -= step_angle;
        record_step(std::nullopt, false);
      }
      continue;
    }

    // The plan lives in the robot frame at plan time; track it in world
    // coordinates so substeps stay consistent while the robot moves.
    Path world_path = result->path;
    for (auto& wp : world_path.waypoints) wp = robot_to_world(state.pose, wp);

    nlohmann::ordered_json diag;
    diag["replan_index"] = replans;
    diag["k"] = result->diagnostics.k;
    diag["strategy"] = to_string(result->diagnostics.strategy);
    diag["representative_count"] =
        static_cast<int>(result->diagnostics.representatives.representatives.size());
    diag["selected_index"] = result->diagnostics.selected_index;
    diag["selected_traversability"] = result->diagnostics.selected_traversability;
    diag["selected_goal"] = result->diagnostics.selected_goal;
    std::optional<nlohmann::ordered_json> step_diag = diag;

    for (int sub = 0; sub < config.substeps_per_replan && !outcome; ++sub) {
      const auto [v_cmd, w_cmd] = track_path(world_path, state, config.controller);
      state = step_kinematics(state, v_cmd, w_cmd, config.dt, config.controller.limits);
      t += config.dt;
      const bool collided = check_collision(world, state, config.footprint_radius);
      record_step(step_diag, collided);
      step_diag.reset();  // only the first substep carries the replan info
      if (collided) {
        outcome = Outcome::collision;
        break;
      }
      const Vec2 here{state.pose.x, state.pose.z};
      while (reached < log.total &&
             (mission.checkpoints[reached].point - here).norm() <=
                 mission.checkpoints[reached].radius) {
        ++reached;
      }
      if (reached == log.total) {
        outcome = Outcome::success;
        break;
      }
      if (t >= mission.time_limit) break;
    }
  }

  if (!outcome) outcome = reached > 0 ? Outcome::partial : Outcome::timeout;
  log.outcome = *outcome;
  log.reached = reached;
  log.sim_time = t;
  log.score = mission_score(reached, log.total, mission.difficulty,
                            log.outcome == Outcome::collision);
  return log;
}

void save_simlog(const SimLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("simlog: cannot write " + path);
  out << log.header.dump() << "\n";
  for (const auto& s : log.steps) {
    nlohmann::ordered_json j;
    j["type"] = "step";
    j["t"] = s.t;
    j["x"] = s.pose.x;
    j["z"] = s.pose.z;
    j["theta"] = s.pose.theta;
    j["v"] = s.v;
    j["omega"] = s.omega;
    j["collision"] = s.collision;
    j["checkpoint"] = s.checkpoint_index;
    j["replan"] = s.replan ? nlohmann::ordered_json(*s.replan) : nlohmann::ordered_json(nullptr);
    out << j.dump() << "\n";
  }
  nlohmann::ordered_json j;
  j["type"] = "outcome";
  j["outcome"] = to_string(log.outcome);
  j["score"] = log.score;
  j["reached"] = log.reached;
  j["total"] = log.total;
  j["sim_time"] = log.sim_time;
  j["steps"] = log.steps.size();
  out << j.dump() << "\n";
}

SimLog load_simlog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("simlog: cannot open " + path);
  SimLog log;
  std::string line;
  bool have_header = false, have_outcome = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("simlog: bad JSON line in " + path + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "header") {
      log.header = j;
      have_header = true;
    } else if (type == "step") {
      StepRecord s;
      s.t = j.at("t").get<double>();
      s.pose = {j.at("x").get<double>(), j.at("z").get<double>(), j.at("theta").get<double>()};
      s.v = j.at("v").get<double>();
      s.omega = j.at("omega").get<double>();
      s.collision = j.at("collision").get<bool>();
      s.checkpoint_index = j.at("checkpoint").get<int>();
      if (!j.at("replan").is_null()) s.replan = j.at("replan");
      log.steps.push_back(std::move(s));
    } else if (type == "outcome") {
      const std::string o = j.at("outcome").get<std::string>();
      if (o == "success") log.outcome = Outcome::success;
      else if (o == "partial") log.outcome = Outcome::partial;
      else if (o == "collision") log.outcome = Outcome::collision;
      else log.outcome = Outcome::timeout;
      log.score = j.at("score").get<double>();
      log.reached = j.at("reached").get<int>();
      log.total = j.at("total").get<int>();
      log.sim_time = j.at("sim_time").get<double>();
      have_outcome = true;
    } else {
      throw ParseError("simlog: unknown record type in " + path);
    }
  }
  if (!have_header || !have_outcome)
    throw ParseError("simlog: missing header or outcome record in " + path);
  return log;
}

namespace {

// Draws the world as merged horizontal runs of lethal cells.
void draw_world(svg::Document& doc, const World& world, double px_per_m) {
  const auto& s = world.truth.spec();
  const double H = s.extent_z() * px_per_m;
  for (int iz = 0; iz < s.height; ++iz) {
    int run_start = -1;
    for (int ix = 0; ix <= s.width; ++ix) {
      const bool lethal = ix < s.width && world.truth.at(ix, iz) >= 1.0;
      if (lethal && run_start < 0) run_start = ix;
      if (!lethal && run_start >= 0) {
        const double x = (s.origin_x + run_start * s.resolution) * px_per_m;
        const double w = (ix - run_start) * s.resolution * px_per_m;
        // flip z so forward is up in the image
        const double y = H - (s.origin_z + (iz + 1) * s.resolution) * px_per_m;
        doc.rect(x, y, w, s.resolution * px_per_m, "#555555");
        run_start = -1;
      }
    }
  }
}

}  // namespace

int replay(const SimLog& log, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (log.steps.empty()) return 0;
  if (!log.header.contains("world")) throw ParseError("replay: log header lacks world spec");
  const World world = world_from_spec(log.header.at("world"));

  const double px_per_m = 24.0;
  const double W = world.truth.spec().extent_x() * px_per_m;
  const double H = world.truth.spec().extent_z() * px_per_m;
  auto to_px = [&](const Vec2& p) {
    return std::pair<double, double>{p.x * px_per_m, H - p.z * px_per_m};
  };

  std::vector<std::pair<double, double>> trace;
  int frame = 0;
  for (const auto& step : log.steps) {
    trace.push_back(to_px({step.pose.x, step.pose.z}));
    svg::Document doc(W, H);
    doc.rect(0, 0, W, H, "#e8e4da");
    draw_world(doc, world, px_per_m);
    if (log.header.contains("mission")) {
      for (const auto& cj : log.header["mission"]["checkpoints"]) {
        const auto [cx, cy] = to_px({cj["x"].get<double>(), cj["z"].get<double>()});
        doc.circle(cx, cy, cj["radius"].get<double>() * px_per_m, "#9ecae1");
      }
    }
    doc.polyline(trace, "#d62728", 2.0);
    const auto [rx, ry] = to_px({step.pose.x, step.pose.z});
    doc.circle(rx, ry, 4.0, "#1f77b4");
    doc.line(rx, ry, rx + 10.0 * std::cos(step.pose.theta), ry - 10.0 * std::sin(step.pose.theta),
             "#1f77b4", 2.0);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.svg", frame);
    doc.save((std::filesystem::path(out_dir) / name).string());
    ++frame;
  }
  return frame;
}

}  // namespace navfuse
