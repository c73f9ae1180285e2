#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navfuse/costmap.hpp"
#include "navfuse/geometry.hpp"

namespace navfuse {

enum class PathKind { linear, quadratic };

const char* to_string(PathKind kind);

// Candidate path: n waypoints in the robot BEV frame, near-uniform in arc
// length, starting at the origin.
struct Path {
  PathKind kind{PathKind::linear};
  std::vector<Vec2> waypoints;

  int size() const { return static_cast<int>(waypoints.size()); }
  const Vec2& endpoint() const { return waypoints.back(); }
};

// Knobs for the one-time candidate sampler. Endpoints are drawn on the arc
// of radius endpoint_radius within +/- fov_halfangle of straight ahead.
struct SamplerSpec {
  int path_count{128};
  int waypoints_per_path{20};
  double fov_halfangle{kPi / 3.0};
  double endpoint_radius{3.5};
  double curvature_range{0.15};  // |b| bound for lateral x(z) = a z + b z^2

  void validate() const;  // throws std::invalid_argument
};

struct PathSet {
  std::vector<Path> paths;
  std::uint64_t seed{0};

  int size() const { return static_cast<int>(paths.size()); }
};

// Generates the random path set. Deterministic in (spec, seed). Alternates
// linear and quadratic candidates; quadratic lateral offset is a polynomial
// in forward distance with the endpoint constraint fixing the linear term.
PathSet sample_paths(const SamplerSpec& spec, std::uint64_t seed);

// Sum of the cost map value over all waypoints.
double traversability_cost(const Path& path, const CostMap& map);

// Sum over waypoints (excluding the start) of (1 - cos angle)/2, where the
// angle is between the waypoint offset from the start and goal_direction.
// goal_direction must be unit length.
double goal_cost(const Path& path, const Vec2& goal_direction);

double combined_cost(const Path& path, const CostMap& map,
                     const Vec2& goal_direction, double goal_weight);

// Indices of the k paths with smallest traversability cost, sorted by
// (cost, index). Throws std::invalid_argument when k is out of range.
std::vector<int> top_k_indices(const PathSet& set, const CostMap& map, int k);
std::vector<Path> top_k(const PathSet& set, const CostMap& map, int k);

// Debug/golden-test dump: JSON array of {kind, waypoints: [[x, z], ...]}.
std::string pathset_to_json(const PathSet& set);
void save_pathset_json(const PathSet& set, const std::string& path);

}  // namespace navfuse
