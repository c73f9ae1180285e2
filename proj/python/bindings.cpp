// pybind11 surface for the navfuse core: camera projection, cost maps, path
// sampling/scoring, fusion planning, the mission simulator and the metrics
// harness. Plan diagnostics cross the boundary as JSON strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "navfuse/camera.hpp"
#include "navfuse/config.hpp"
#include "navfuse/costmap.hpp"
#include "navfuse/errors.hpp"
#include "navfuse/eval.hpp"
#include "navfuse/fusion.hpp"
#include "navfuse/mask.hpp"
#include "navfuse/paths.hpp"
#include "navfuse/sim.hpp"

namespace py = pybind11;
using namespace navfuse;

namespace {

Vec2 to_vec2(const std::pair<double, double>& p) { return {p.first, p.second}; }

std::vector<std::pair<double, double>> waypoints_out(const Path& p) {
  std::vector<std::pair<double, double>> out;
  out.reserve(p.waypoints.size());
  for (const auto& w : p.waypoints) out.emplace_back(w.x, w.z);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "BEV path planning with path fusion: C++ core bindings";

  py::register_exception<NoPathError>(m, "NoPathError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<Mask>(m, "Mask")
      .def(py::init<int, int, std::uint8_t>(), py::arg("width"), py::arg("height"),
           py::arg("fill") = 0)
      .def_readonly("width", &Mask::width)
      .def_readonly("height", &Mask::height)
      .def("at", &Mask::at)
      .def("set", &Mask::set)
      .def("count_set", &Mask::count_set);
  m.def("load_mask_pgm", &load_mask_pgm);
  m.def("save_mask_pgm", &save_mask_pgm);
  m.def("iou", &iou, py::arg("pred"), py::arg("gt"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("resolution", &GridSpec::resolution)
      .def_readwrite("width", &GridSpec::width)
      .def_readwrite("height", &GridSpec::height)
      .def_readwrite("origin_x", &GridSpec::origin_x)
      .def_readwrite("origin_z", &GridSpec::origin_z)
      .def_readwrite("unknown_cost", &GridSpec::unknown_cost);

  py::class_<CostMap>(m, "CostMap")
      .def(py::init<const GridSpec&>())
      .def_property_readonly("spec", &CostMap::spec)
      .def("at", &CostMap::at)
      .def("set", &CostMap::set)
      .def("point_cost",
           [](const CostMap& map, double x, double z) { return map.point_cost({x, z}); })
      .def("cell_of",
           [](const CostMap& map, double x, double z) -> py::object {
             const auto c = map.cell_of({x, z});
             if (!c) return py::none();
             return py::make_tuple(c->ix, c->iz);
           })
      .def("set_cells", [](CostMap& map, const std::vector<std::pair<int, int>>& cells,
                           double cost) {
        std::vector<CellIndex> idx;
        idx.reserve(cells.size());
        for (const auto& [ix, iz] : cells) idx.push_back({ix, iz});
        map.set_cells(idx, cost);
      });
  m.def("save_costmap_text", &save_costmap_text);
  m.def("load_costmap_text", &load_costmap_text);

  py::class_<CameraModel>(m, "CameraModel")
      .def_readonly("width", &CameraModel::width)
      .def_readonly("height", &CameraModel::height)
      .def_readonly("mount_height", &CameraModel::height_m);
  m.def("make_pinhole", &make_pinhole, py::arg("fx"), py::arg("fy"), py::arg("cx"),
        py::arg("cy"), py::arg("pitch"), py::arg("cam_height"), py::arg("width"),
        py::arg("height"));
  m.def("load_ray_table", &load_ray_table);
  m.def("save_ray_table", &save_ray_table);
  m.def("ground_intersect", [](const CameraModel& model, int u, int v) -> py::object {
    const auto hit = ground_intersect(model, u, v);
    if (!hit) return py::none();
    return py::make_tuple(hit->x, hit->z);
  });
  m.def("project_mask_to_bev", &project_mask_to_bev);

  py::enum_<PathKind>(m, "PathKind")
      .value("linear", PathKind::linear)
      .value("quadratic", PathKind::quadratic);

  py::class_<Path>(m, "Path")
      .def_readonly("kind", &Path::kind)
      .def_property_readonly("waypoints", &waypoints_out)
      .def_property_readonly("endpoint",
                             [](const Path& p) { return py::make_tuple(p.endpoint().x, p.endpoint().z); });

  py::class_<SamplerSpec>(m, "SamplerSpec")
      .def(py::init<>())
      .def_readwrite("path_count", &SamplerSpec::path_count)
      .def_readwrite("waypoints_per_path", &SamplerSpec::waypoints_per_path)
      .def_readwrite("fov_halfangle", &SamplerSpec::fov_halfangle)
      .def_readwrite("endpoint_radius", &SamplerSpec::endpoint_radius)
      .def_readwrite("curvature_range", &SamplerSpec::curvature_range);

  py::class_<PathSet>(m, "PathSet")
      .def_property_readonly("paths",
                             [](const PathSet& s) { return s.paths; })
      .def_readonly("seed", &PathSet::seed)
      .def("__len__", &PathSet::size);
  m.def("sample_paths", &sample_paths, py::arg("spec"), py::arg("seed"));

  m.def("traversability_cost", &traversability_cost);
  m.def("goal_cost", [](const Path& p, const std::pair<double, double>& dir) {
    return goal_cost(p, to_vec2(dir));
  });
  m.def("combined_cost",
        [](const Path& p, const CostMap& map, const std::pair<double, double>& dir,
           double goal_weight) { return combined_cost(p, map, to_vec2(dir), goal_weight); });
  m.def("top_k", &top_k);
  m.def("top_k_indices", &top_k_indices);

  m.def("path_distance", &path_distance);
  py::class_<Clustering>(m, "Clustering")
      .def_readonly("k", &Clustering::k)
      .def_readonly("assignments", &Clustering::assignments)
      .def_readonly("centroids", &Clustering::centroids)
      .def_readonly("inertia", &Clustering::inertia)
      .def_readonly("fallback", &Clustering::fallback);
  m.def("kmeans", [](const std::vector<Path>& paths, int k, std::uint64_t seed, int restarts,
                     int max_iters) { return kmeans(paths, k, seed, restarts, max_iters); });
  m.def("silhouette_loss", [](const std::vector<Path>& paths, const Clustering& c) {
    return silhouette_loss(paths, c);
  });

  py::class_<FusionConfig>(m, "FusionConfig")
      .def(py::init<>())
      .def_readwrite("max_clusters", &FusionConfig::max_clusters)
      .def_readwrite("merge_threshold", &FusionConfig::merge_threshold)
      .def_readwrite("seed", &FusionConfig::seed)
      .def_readwrite("kmeans_restarts", &FusionConfig::kmeans_restarts)
      .def_readwrite("kmeans_max_iters", &FusionConfig::kmeans_max_iters);
  m.def("adaptive_kmeans", [](const std::vector<Path>& paths, const FusionConfig& cfg) {
    return adaptive_kmeans(paths, cfg);
  });

  py::class_<RepresentativeSet>(m, "RepresentativeSet")
      .def_readonly("representatives", &RepresentativeSet::representatives)
      .def_readonly("provenance", &RepresentativeSet::provenance);
  m.def("merge_centroids", [](const std::vector<Path>& paths, const Clustering& c,
                              double threshold) { return merge_centroids(paths, c, threshold); });
  m.def("select_angular", [](const std::vector<Path>& reps, const std::pair<double, double>& dir) {
    return select_angular(reps, to_vec2(dir));
  });
  m.def("select_euclidean",
        [](const std::vector<Path>& reps, const std::pair<double, double>& goal) {
          return select_euclidean(reps, to_vec2(goal));
        });

  py::enum_<Strategy>(m, "Strategy")
      .value("no_fusion", Strategy::no_fusion)
      .value("kmeans_only", Strategy::kmeans_only)
      .value("euclidean", Strategy::euclidean)
      .value("angular", Strategy::angular);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("top_k", &PlannerConfig::top_k)
      .def_readwrite("goal_weight", &PlannerConfig::goal_weight)
      .def_readwrite("strategy", &PlannerConfig::strategy)
      .def_readwrite("fusion", &PlannerConfig::fusion)
      .def_readwrite("lethal_fraction", &PlannerConfig::lethal_fraction)
      .def_readwrite("es_goal_distance", &PlannerConfig::es_goal_distance);

  m.def("plan", [](const PathSet& set, const CostMap& map,
                   const std::pair<double, double>& goal_dir, const PlannerConfig& cfg) {
    PlanResult result = plan(set, map, to_vec2(goal_dir), cfg);
    return py::make_tuple(result.path, diagnostics_to_json(result.diagnostics));
  });

  py::enum_<ScenarioKind>(m, "ScenarioKind")
      .value("open", ScenarioKind::open)
      .value("corridor", ScenarioKind::corridor)
      .value("fork", ScenarioKind::fork)
      .value("fork_with_deadend", ScenarioKind::fork_with_deadend)
      .value("obstacle_field", ScenarioKind::obstacle_field);

  py::class_<WorldParams>(m, "WorldParams")
      .def(py::init<>())
      .def_readwrite("extent", &WorldParams::extent)
      .def_readwrite("resolution", &WorldParams::resolution)
      .def_readwrite("corridor_width", &WorldParams::corridor_width)
      .def_readwrite("corridor_length", &WorldParams::corridor_length)
      .def_readwrite("corridor_bearing", &WorldParams::corridor_bearing)
      .def_readwrite("stem_length", &WorldParams::stem_length)
      .def_readwrite("branch_angle", &WorldParams::branch_angle)
      .def_readwrite("branch_length", &WorldParams::branch_length)
      .def_readwrite("deadend_length", &WorldParams::deadend_length)
      .def_readwrite("deadend_branch", &WorldParams::deadend_branch)
      .def_readwrite("obstacle_count", &WorldParams::obstacle_count)
      .def_readwrite("obstacle_radius", &WorldParams::obstacle_radius)
      .def_readwrite("goal_bearing", &WorldParams::goal_bearing);

  py::class_<World>(m, "World")
      .def_property_readonly("kind", [](const World& w) { return w.kind; })
      .def_property_readonly(
          "start", [](const World& w) { return py::make_tuple(w.start.x, w.start.z, w.start.theta); })
      .def_readonly("correct_branch", &World::correct_branch)
      .def("truth_traversable",
           [](const World& w, double x, double z) { return w.truth_traversable({x, z}); });
  m.def("synthesize_world", &synthesize_world, py::arg("kind"), py::arg("params"),
        py::arg("seed"));
  m.def("save_world_file", &save_world_file);
  m.def("load_world_file", &load_world_file);

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init<>())
      .def_readwrite("flip_p", &NoiseSpec::flip_p)
      .def_readwrite("erode_px", &NoiseSpec::erode_px)
      .def_readwrite("seed", &NoiseSpec::seed);

  py::class_<Mission>(m, "Mission")
      .def(py::init<>())
      .def_readwrite("difficulty", &Mission::difficulty)
      .def_readwrite("time_limit", &Mission::time_limit)
      .def("add_checkpoint", [](Mission& m_, double x, double z, double radius) {
        m_.checkpoints.push_back({{x, z}, radius});
      });
  m.def("save_mission_file", &save_mission_file);
  m.def("load_mission_file", &load_mission_file);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("substeps_per_replan", &SimConfig::substeps_per_replan)
      .def_readwrite("footprint_radius", &SimConfig::footprint_radius)
      .def_readwrite("noise", &SimConfig::noise)
      .def_readwrite("recovery_budget", &SimConfig::recovery_budget)
      .def_readwrite("grid", &SimConfig::grid)
      .def_readwrite("sampler", &SimConfig::sampler)
      .def_readwrite("planner", &SimConfig::planner);

  py::class_<SimLog>(m, "SimLog")
      .def_property_readonly("outcome",
                             [](const SimLog& log) { return std::string(to_string(log.outcome)); })
      .def_readonly("score", &SimLog::score)
      .def_readonly("reached", &SimLog::reached)
      .def_readonly("total", &SimLog::total)
      .def_readonly("sim_time", &SimLog::sim_time)
      .def("__len__", [](const SimLog& log) { return log.steps.size(); });
  m.def("run_mission", &run_mission, py::arg("world"), py::arg("mission"), py::arg("config"),
        py::arg("camera"), py::arg("seed"));
  m.def("save_simlog", &save_simlog);
  m.def("load_simlog", &load_simlog);
  m.def("replay", &replay, py::arg("log"), py::arg("out_dir"));
  m.def("mission_score", &mission_score, py::arg("reached"), py::arg("total"),
        py::arg("difficulty"), py::arg("collided"));

  m.def("render_observation", &render_observation, py::arg("world"), py::arg("state"),
        py::arg("camera"), py::arg("noise"));
  py::class_<RobotState>(m, "RobotState")
      .def(py::init<>())
      .def_property(
          "pose",
          [](const RobotState& s) { return py::make_tuple(s.pose.x, s.pose.z, s.pose.theta); },
          [](RobotState& s, const std::tuple<double, double, double>& p) {
            s.pose = {std::get<0>(p), std::get<1>(p), std::get<2>(p)};
          })
      .def_readwrite("v", &RobotState::v)
      .def_readwrite("omega", &RobotState::omega);
}
