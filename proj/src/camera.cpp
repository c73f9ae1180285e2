#include "navfuse/camera.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "navfuse/errors.hpp"

namespace navfuse {

CameraModel make_pinhole(double fx, double fy, double cx, double cy, double pitch,
                         double cam_height, int width, int height) {
  if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("camera: focal length must be > 0");
  if (cam_height <= 0.0) throw std::invalid_argument("camera: height must be > 0");
  if (width < 1 || height < 1) throw std::invalid_argument("camera: image dims must be >= 1");

  CameraModel model;
  model.width = width;
  model.height = height;
  model.height_m = cam_height;
  model.rays.resize(static_cast<std::size_t>(width) * height);

  const double cp = std::cos(pitch);
  const double sp = std::sin(pitch);
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      // Back-project, flipping image-down v into camera-up y.
      const double x = (u - cx) / fx;
      const double y = -(v - cy) / fy;
      // Rotate about the camera x axis; positive pitch tilts the axis up.
      Vec3 d{x, y * cp + sp, -y * sp + cp};
      model.rays[static_cast<std::size_t>(v) * width + u] = d.normalized();
    }
  }
  return model;
}

CameraModel load_ray_table(const std::string& path, double cam_height) {
  if (cam_height <= 0.0) throw std::invalid_argument("camera: height must be > 0");
  std::ifstream in(path);
  if (!in) throw ParseError("ray table: cannot open " + path);
  int width = 0, height = 0;
  if (!(in >> width >> height) || width < 1 || height < 1)
    throw ParseError("ray table: bad dimensions in " + path);

  CameraModel model;
  model.width = width;
  model.height = height;
  model.height_m = cam_height;
  model.rays.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < model.rays.size(); ++i) {
    Vec3 d;
    if (!(in >> d.x >> d.y >> d.z))
      throw ParseError("ray table: truncated (expected " +
                       std::to_string(model.rays.size()) + " rays) in " + path);
    const double n = d.norm();
    if (n < 1e-12) throw ParseError("ray table: zero-length ray in " + path);
    model.rays[i] = {d.x / n, d.y / n, d.z / n};
  }
  return model;
}

void save_ray_table(const CameraModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("ray table: cannot write " + path);
  out << model.width << " " << model.height << "\n";
  char buf[96];
  for (const auto& d : model.rays) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", d.x, d.y, d.z);
    out << buf;
  }
}

std::optional<Vec2> intersect_ray_ground(const Vec3& ray, double cam_height) {
  if (ray.y >= -kHorizonEpsilon) return std::nullopt;
  const double s = -cam_height / ray.y;
  return Vec2{s * ray.x, s * ray.z};
}

std::optional<Vec2> ground_intersect(const CameraModel& model, int u, int v) {
  if (!model.in_bounds(u, v))
    throw std::invalid_argument("camera: pixel out of image bounds");
  return intersect_ray_ground(model.ray(u, v), model.height_m);
}

CostMap project_mask_to_bev(const CameraModel& model, const Mask& mask,
                            const GridSpec& grid) {
  if (mask.width != model.width || mask.height != model.height)
    throw std::invalid_argument("camera: mask dims do not match camera dims");
  grid.validate();

  // Per-cell evidence: bit 0 = traversable pixel seen, bit 1 = obstacle seen.
  std::vector<std::uint8_t> evidence(static_cast<std::size_t>(grid.width) * grid.height, 0);
  CostMap map(grid);
  for (int v = 0; v < model.height; ++v) {
    for (int u = 0; u < model.width; ++u) {
      const auto hit = intersect_ray_ground(model.ray(u, v), model.height_m);
      if (!hit) continue;
      const auto cell = map.cell_of(*hit);
      if (!cell) continue;
      const std::size_t idx = static_cast<std::size_t>(cell->iz) * grid.width + cell->ix;
      evidence[idx] |= mask.at(u, v) ? 1 : 2;
    }
  }
  // A cell is traversable only on clean evidence: any obstacle pixel vetoes.
  // Everything else (vetoed or unobserved) keeps unknown_cost.
  for (int iz = 0; iz < grid.height; ++iz)
    for (int ix = 0; ix < grid.width; ++ix)
      if (evidence[static_cast<std::size_t>(iz) * grid.width + ix] == 1) map.set(ix, iz, 0.0);
  return map;
}

}  // namespace navfuse
