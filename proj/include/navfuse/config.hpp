#pragma once

#include <cstdint>
#include <string>

#include "navfuse/camera.hpp"
#include "navfuse/costmap.hpp"
#include "navfuse/fusion.hpp"
#include "navfuse/paths.hpp"
#include "navfuse/sim.hpp"

#include <nlohmann/json.hpp>

namespace navfuse {

// Pinhole parameters kept alongside the run config so a camera can be
// rebuilt without an external ray-table file.
struct CameraConfig {
  int width{160};
  int height{120};
  double fx{75.0};
  double fy{75.0};
  double cx{79.5};
  double cy{59.5};
  double pitch{-0.45};
  double mount_height{0.45};
  std::string ray_table;  // when set, overrides the pinhole parameters

  CameraModel build() const;
};

// Merged configuration for every CLI command. JSON file values are applied
// over the defaults; unknown keys are rejected.
struct RunConfig {
  std::uint64_t seed{0};
  CameraConfig camera;
  GridSpec grid;
  SamplerSpec sampler;
  PlannerConfig planner;
  SimConfig sim;
  int eval_repeats{5};
  int jobs{1};

  void validate() const;

  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
};

}  // namespace navfuse
