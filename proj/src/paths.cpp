#include "navfuse/paths.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "navfuse/errors.hpp"
#include "navfuse/rng.hpp"

namespace navfuse {

const char* to_string(PathKind kind) {
  return kind == PathKind::linear ? "linear" : "quadratic";
}

void SamplerSpec::validate() const {
  if (path_count < 1) throw std::invalid_argument("sampler: path_count must be >= 1");
  if (waypoints_per_path < 2)
    throw std::invalid_argument("sampler: waypoints_per_path must be >= 2");
  if (fov_halfangle <= 0.0 || fov_halfangle > kPi / 2.0)
    throw std::invalid_argument("sampler: fov_halfangle must be in (0, pi/2]");
  if (endpoint_radius <= 0.0)
    throw std::invalid_argument("sampler: endpoint_radius must be > 0");
  if (curvature_range < 0.0)
    throw std::invalid_argument("sampler: curvature_range must be >= 0");
}

namespace {

// Resamples a densely evaluated curve to n points at equal arc-length
// stations, keeping the exact first and last points.
std::vector<Vec2> resample_arclength(const std::vector<Vec2>& dense, int n) {
  std::vector<double> cum(dense.size(), 0.0);
  for (std::size_t i = 1; i < dense.size(); ++i)
    cum[i] = cum[i - 1] + (dense[i] - dense[i - 1]).norm();
  const double total = cum.back();

  std::vector<Vec2> out;
  out.reserve(n);
  out.push_back(dense.front());
  std::size_t seg = 0;
  for (int i = 1; i < n - 1; ++i) {
    const double target = total * i / (n - 1);
    while (seg + 1 < cum.size() && cum[seg + 1] < target) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double t = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
    out.push_back(dense[seg] + (dense[seg + 1] - dense[seg]) * t);
  }
  out.push_back(dense.back());
  return out;
}

Path make_linear_path(const Vec2& endpoint, int n) {
  Path p;
  p.kind = PathKind::linear;
  p.waypoints.reserve(n);
  for (int i = 0; i < n; ++i)
    p.waypoints.push_back(endpoint * (static_cast<double>(i) / (n - 1)));
  return p;
}

Path make_quadratic_path(const Vec2& endpoint, double b, int n) {
  // Lateral offset as a polynomial in forward distance: x(z) = a z + b z^2,
  // with a fixed by the endpoint constraint.
  const double ze = endpoint.z;
  const double a = (endpoint.x - b * ze * ze) / ze;
  const int dense_n = std::max(10 * n, 100);
  std::vector<Vec2> dense;
  dense.reserve(dense_n);
  for (int i = 0; i < dense_n; ++i) {
    const double z = ze * i / (dense_n - 1);
    dense.push_back({a * z + b * z * z, z});
  }
  Path p;
  p.kind = PathKind::quadratic;
  p.waypoints = resample_arclength(dense, n);
  p.waypoints.front() = {0.0, 0.0};
  p.waypoints.back() = endpoint;
  return p;
}

}  // namespace

PathSet sample_paths(const SamplerSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  PathSet set;
  set.seed = seed;
  set.paths.reserve(spec.path_count);
  for (int i = 0; i < spec.path_count; ++i) {
    const double bearing = rng.uniform(-spec.fov_halfangle, spec.fov_halfangle);
    const Vec2 endpoint = direction_from_bearing(bearing) * spec.endpoint_radius;
    const double b = rng.uniform(-spec.curvature_range, spec.curvature_range);
    const bool quadratic = (i % 2 == 1) && spec.curvature_range > 0.0 && endpoint.z > 1e-6;
    set.paths.push_back(quadratic
                            ? make_quadratic_path(endpoint, b, spec.waypoints_per_path)
                            : make_linear_path(endpoint, spec.waypoints_per_path));
  }
  return set;
}

double traversability_cost(const Path& path, const CostMap& map) {
  double sum = 0.0;
  for (const auto& p : path.waypoints) sum += map.point_cost(p);
  return sum;
}

double goal_cost(const Path& path, const Vec2& goal_direction) {
  const double gn = goal_direction.norm();
  if (std::abs(gn - 1.0) > 1e-6)
    throw std::invalid_argument("goal_cost: goal_direction must be unit length");
  const Vec2& start = path.waypoints.front();
  double sum = 0.0;
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
    const Vec2 d = path.waypoints[i] - start;
    const double n = d.norm();
    if (n == 0.0) continue;
    const double c = d.dot(goal_direction) / n;
    sum += 0.5 * (1.0 - c);
  }
  return sum;
}

double combined_cost(const Path& path, const CostMap& map, const Vec2& goal_direction,
                     double goal_weight) {
  if (goal_weight < 0.0) throw std::invalid_argument("combined_cost: goal_weight must be >= 0");
  return traversability_cost(path, map) + goal_weight * goal_cost(path, goal_direction);
}

std::vector<int> top_k_indices(const PathSet& set, const CostMap& map, int k) {
  if (k < 1 || k > set.size())
    throw std::invalid_argument("top_k: k must be in [1, path count]");
  std::vector<std::pair<double, int>> scored;
  scored.reserve(set.size());
  for (int i = 0; i < set.size(); ++i)
    scored.emplace_back(traversability_cost(set.paths[i], map), i);
  std::stable_sort(scored.begin(), scored.end());
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<Path> top_k(const PathSet& set, const CostMap& map, int k) {
  std::vector<Path> out;
  out.reserve(k);
  for (int idx : top_k_indices(set, map, k)) out.push_back(set.paths[idx]);
  return out;
}

std::string pathset_to_json(const PathSet& set) {
  std::ostringstream out;
  char buf[80];
  out << "[";
  for (int i = 0; i < set.size(); ++i) {
    const Path& p = set.paths[i];
    out << (i ? ",\n " : "\n ") << "{\"kind\":\"" << to_string(p.kind)
        << "\",\"waypoints\":[";
    for (std::size_t j = 0; j < p.waypoints.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "[%.17g,%.17g]", p.waypoints[j].x, p.waypoints[j].z);
      out << (j ? "," : "") << buf;
    }
    out << "]}";
  }
  out << "\n]\n";
  return out.str();
}

void save_pathset_json(const PathSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("pathset: cannot write " + path);
  out << pathset_to_json(set);
}

}  // namespace navfuse
