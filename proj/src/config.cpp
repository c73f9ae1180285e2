#include "navfuse/config.hpp"

#include <fstream>
#include <set>

#include "navfuse/errors.hpp"

namespace navfuse {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  if (!j.is_object()) throw ParseError("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ParseError("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

CameraModel CameraConfig::build() const {
  if (!ray_table.empty()) return load_ray_table(ray_table, mount_height);
  return make_pinhole(fx, fy, cx, cy, pitch, mount_height, width, height);
}

void RunConfig::validate() const {
  grid.validate();
  sampler.validate();
  planner.validate();
  if (camera.width < 1 || camera.height < 1)
    throw ParseError("config: camera dims must be >= 1");
  if (camera.mount_height <= 0.0) throw ParseError("config: camera mount_height must be > 0");
  if (sim.dt <= 0.0 || sim.substeps_per_replan < 1)
    throw ParseError("config: sim timing must be positive");
  if (sim.footprint_radius <= 0.0) throw ParseError("config: footprint_radius must be > 0");
  if (eval_repeats < 1) throw ParseError("config: eval repeats must be >= 1");
  if (jobs < 1) throw ParseError("config: jobs must be >= 1");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["camera"] = {{"width", camera.width},   {"height", camera.height},
                 {"fx", camera.fx},         {"fy", camera.fy},
                 {"cx", camera.cx},         {"cy", camera.cy},
                 {"pitch", camera.pitch},   {"mount_height", camera.mount_height},
                 {"ray_table", camera.ray_table}};
  j["grid"] = {{"resolution", grid.resolution}, {"width", grid.width},
               {"height", grid.height},         {"origin_x", grid.origin_x},
               {"origin_z", grid.origin_z},     {"unknown_cost", grid.unknown_cost}};
  j["sampler"] = {{"path_count", sampler.path_count},
                  {"waypoints_per_path", sampler.waypoints_per_path},
                  {"fov_halfangle", sampler.fov_halfangle},
                  {"endpoint_radius", sampler.endpoint_radius},
                  {"curvature_range", sampler.curvature_range}};
  j["planner"] = {{"top_k", planner.top_k},
                  {"goal_weight", planner.goal_weight},
                  {"strategy", to_string(planner.strategy)},
                  {"lethal_fraction", planner.lethal_fraction},
                  {"es_goal_distance", planner.es_goal_distance},
                  {"fusion",
                   {{"max_clusters", planner.fusion.max_clusters},
                    {"merge_threshold", planner.fusion.merge_threshold},
                    {"kmeans_restarts", planner.fusion.kmeans_restarts},
                    {"kmeans_max_iters", planner.fusion.kmeans_max_iters}}}};
  j["sim"] = {{"dt", sim.dt},
              {"substeps_per_replan", sim.substeps_per_replan},
              {"footprint_radius", sim.footprint_radius},
              {"lookahead", sim.controller.lookahead},
              {"heading_gain", sim.controller.heading_gain},
              {"v_min", sim.controller.v_min},
              {"v_max", sim.controller.limits.v_max},
              {"omega_max", sim.controller.limits.omega_max},
              {"recovery_budget", sim.recovery_budget},
              {"recovery_rotation", sim.recovery_rotation},
              {"noise", {{"flip_p", sim.noise.flip_p}, {"erode_px", sim.noise.erode_px}}}};
  j["eval"] = {{"repeats", eval_repeats}};
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  reject_unknown(j, {"seed", "jobs", "camera", "grid", "sampler", "planner", "sim", "eval"},
                 "config root");
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);

  if (j.contains("camera")) {
    const auto& cj = j["camera"];
    reject_unknown(cj, {"width", "height", "fx", "fy", "cx", "cy", "pitch", "mount_height",
                        "ray_table"},
                   "camera");
    c.camera.width = cj.value("width", c.camera.width);
    c.camera.height = cj.value("height", c.camera.height);
    c.camera.fx = cj.value("fx", c.camera.fx);
    c.camera.fy = cj.value("fy", c.camera.fy);
    c.camera.cx = cj.value("cx", c.camera.cx);
    c.camera.cy = cj.value("cy", c.camera.cy);
    c.camera.pitch = cj.value("pitch", c.camera.pitch);
    c.camera.mount_height = cj.value("mount_height", c.camera.mount_height);
    c.camera.ray_table = cj.value("ray_table", c.camera.ray_table);
  }
  if (j.contains("grid")) {
    const auto& gj = j["grid"];
    reject_unknown(gj, {"resolution", "width", "height", "origin_x", "origin_z", "unknown_cost"},
                   "grid");
    c.grid.resolution = gj.value("resolution", c.grid.resolution);
    c.grid.width = gj.value("width", c.grid.width);
    c.grid.height = gj.value("height", c.grid.height);
    c.grid.origin_x = gj.value("origin_x", c.grid.origin_x);
    c.grid.origin_z = gj.value("origin_z", c.grid.origin_z);
    c.grid.unknown_cost = gj.value("unknown_cost", c.grid.unknown_cost);
  }
  if (j.contains("sampler")) {
    const auto& sj = j["sampler"];
    reject_unknown(sj, {"path_count", "waypoints_per_path", "fov_halfangle", "endpoint_radius",
                        "curvature_range"},
                   "sampler");
    c.sampler.path_count = sj.value("path_count", c.sampler.path_count);
    c.sampler.waypoints_per_path = sj.value("waypoints_per_path", c.sampler.waypoints_per_path);
    c.sampler.fov_halfangle = sj.value("fov_halfangle", c.sampler.fov_halfangle);
    c.sampler.endpoint_radius = sj.value("endpoint_radius", c.sampler.endpoint_radius);
    c.sampler.curvature_range = sj.value("curvature_range", c.sampler.curvature_range);
  }
  if (j.contains("planner")) {
    const auto& pj = j["planner"];
    reject_unknown(pj, {"top_k", "goal_weight", "strategy", "lethal_fraction",
                        "es_goal_distance", "fusion"},
                   "planner");
    c.planner.top_k = pj.value("top_k", c.planner.top_k);
    c.planner.goal_weight = pj.value("goal_weight", c.planner.goal_weight);
    if (pj.contains("strategy")) {
      const auto s = strategy_from_string(pj["strategy"].get<std::string>());
      if (!s) throw ParseError("config: unknown strategy '" +
                               pj["strategy"].get<std::string>() + "'");
      c.planner.strategy = *s;
    }
    c.planner.lethal_fraction = pj.value("lethal_fraction", c.planner.lethal_fraction);
    c.planner.es_goal_distance = pj.value("es_goal_distance", c.planner.es_goal_distance);
    if (pj.contains("fusion")) {
      const auto& fj = pj["fusion"];
      reject_unknown(fj, {"max_clusters", "merge_threshold", "kmeans_restarts",
                          "kmeans_max_iters"},
                     "planner.fusion");
      c.planner.fusion.max_clusters = fj.value("max_clusters", c.planner.fusion.max_clusters);
      c.planner.fusion.merge_threshold =
          fj.value("merge_threshold", c.planner.fusion.merge_threshold);
      c.planner.fusion.kmeans_restarts =
          fj.value("kmeans_restarts", c.planner.fusion.kmeans_restarts);
      c.planner.fusion.kmeans_max_iters =
          fj.value("kmeans_max_iters", c.planner.fusion.kmeans_max_iters);
    }
  }
  if (j.contains("sim")) {
    const auto& sj = j["sim"];
    reject_unknown(sj, {"dt", "substeps_per_replan", "footprint_radius", "lookahead",
                        "heading_gain", "v_min", "v_max", "omega_max", "recovery_budget",
                        "recovery_rotation", "noise"},
                   "sim");
    c.sim.dt = sj.value("dt", c.sim.dt);
    c.sim.substeps_per_replan = sj.value("substeps_per_replan", c.sim.substeps_per_replan);
    c.sim.footprint_radius = sj.value("footprint_radius", c.sim.footprint_radius);
    c.sim.controller.lookahead = sj.value("lookahead", c.sim.controller.lookahead);
    c.sim.controller.heading_gain = sj.value("heading_gain", c.sim.controller.heading_gain);
    c.sim.controller.v_min = sj.value("v_min", c.sim.controller.v_min);
    c.sim.controller.limits.v_max = sj.value("v_max", c.sim.controller.limits.v_max);
    c.sim.controller.limits.omega_max = sj.value("omega_max", c.sim.controller.limits.omega_max);
    c.sim.recovery_budget = sj.value("recovery_budget", c.sim.recovery_budget);
    c.sim.recovery_rotation = sj.value("recovery_rotation", c.sim.recovery_rotation);
    if (sj.contains("noise")) {
      const auto& nj = sj["noise"];
      reject_unknown(nj, {"flip_p", "erode_px"}, "sim.noise");
      c.sim.noise.flip_p = nj.value("flip_p", c.sim.noise.flip_p);
      c.sim.noise.erode_px = nj.value("erode_px", c.sim.noise.erode_px);
    }
  }
  if (j.contains("eval")) {
    const auto& ej = j["eval"];
    reject_unknown(ej, {"repeats"}, "eval");
    c.eval_repeats = ej.value("repeats", c.eval_repeats);
  }

  // The sim loop shares the planning stack configured above.
  c.sim.grid = c.grid;
  c.sim.sampler = c.sampler;
  c.sim.planner = c.planner;
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config: bad JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace navfuse
