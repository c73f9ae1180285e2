#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navfuse/costmap.hpp"
#include "navfuse/geometry.hpp"
#include "navfuse/mask.hpp"

namespace navfuse {

// Rays with direction-y above -kHorizonEpsilon never intersect the ground
// at a usable range; the scale solve diverges near the horizon.
inline constexpr double kHorizonEpsilon = 1e-6;

// Calibrated camera as a dense per-pixel table of unit rays plus the mounted
// height above the ground plane. Camera frame: x right, y up, z forward;
// image frame: u right, v down.
struct CameraModel {
  int width{0};
  int height{0};
  double height_m{0.0};          // camera center above the ground plane
  std::vector<Vec3> rays;        // row-major, v * width + u, unit length

  const Vec3& ray(int u, int v) const {
    return rays[static_cast<std::size_t>(v) * width + u];
  }
  bool in_bounds(int u, int v) const {
    return u >= 0 && u < width && v >= 0 && v < height;
  }
};

// Builds a pinhole ray table. pitch rotates rays about the camera x axis;
// negative pitch tilts the optical axis toward the ground.
CameraModel make_pinhole(double fx, double fy, double cx, double cy,
                         double pitch, double cam_height, int width, int height);

// Ray table file: line 1 `width height`, then width*height lines `dx dy dz`,
// row-major. Rays are renormalized to unit length on load; a zero vector is
// a parse error. Camera height comes from config, not the file.
CameraModel load_ray_table(const std::string& path, double cam_height);
void save_ray_table(const CameraModel& model, const std::string& path);

// Solves s * ray = (x, -h, z) for the ground-plane hit of a single ray.
// Returns the (x, z) hit point, or nullopt for rays at or above the horizon.
std::optional<Vec2> intersect_ray_ground(const Vec3& ray, double cam_height);

// Per-pixel ground intersection. Throws std::invalid_argument when (u, v)
// is out of image bounds; above-horizon pixels return nullopt.
std::optional<Vec2> ground_intersect(const CameraModel& model, int u, int v);

// Projects an image-space traversability mask onto a BEV cost grid.
// A cell is traversable (0) only if at least one traversable pixel and no
// non-traversable pixel landed in it; all other cells (vetoed by obstacle
// evidence or unobserved) carry grid.unknown_cost.
CostMap project_mask_to_bev(const CameraModel& model, const Mask& mask,
                            const GridSpec& grid);

}  // namespace navfuse
