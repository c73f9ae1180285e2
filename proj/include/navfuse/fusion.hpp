#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navfuse/costmap.hpp"
#include "navfuse/paths.hpp"

namespace navfuse {

// Result of k-means over paths embedded as 2n-dimensional vectors.
// Centroids are waypoint-wise means of their members; inertia is the sum of
// squared embedded distances from members to their centroid.
struct Clustering {
  int k{0};
  std::vector<int> assignments;   // path index -> cluster id
  std::vector<Path> centroids;
  double inertia{0.0};
  bool fallback{false};           // set when fewer than 3 paths forced k = 1
};

// Post-merge representative paths. provenance[i] lists the cluster ids that
// merged into representative i.
struct RepresentativeSet {
  std::vector<Path> representatives;
  std::vector<std::vector<int>> provenance;
};

struct FusionConfig {
  int max_clusters{6};
  double merge_threshold{0.5};   // meters, on the mean-waypoint path metric
  std::uint64_t seed{0};
  int kmeans_restarts{8};
  int kmeans_max_iters{50};

  void validate() const;
};

// Mean Euclidean distance between corresponding waypoints. Throws
// std::invalid_argument when waypoint counts differ.
double path_distance(const Path& a, const Path& b);

// Lloyd's algorithm with k-means++ seeding, `restarts` independent runs,
// best inertia kept. Empty clusters are repaired by reseeding from the point
// farthest from its centroid. Deterministic given seed.
Clustering kmeans(std::span<const Path> paths, int k, std::uint64_t seed,
                  int restarts, int max_iters);

// Negative mean silhouette coefficient, distances via path_distance.
// Singleton clusters (and the a = b = 0 case) contribute coefficient 0.
// Throws std::invalid_argument when clustering.k < 2.
double silhouette_loss(std::span<const Path> paths, const Clustering& clustering);

// Runs kmeans for k in [2, min(max_clusters, N-1)] and keeps the clustering
// with minimum silhouette loss, smaller k on ties. Fewer than 3 paths fall
// back to a flagged single-cluster result.
Clustering adaptive_kmeans(std::span<const Path> paths, const FusionConfig& config);

// Single-linkage agglomeration over centroids: clusters whose centroids are
// strictly within merge_threshold (directly or by chaining) join one group.
// Each group's representative is the waypoint-wise mean of all member paths
// of its constituent clusters.
RepresentativeSet merge_centroids(std::span<const Path> paths,
                                  const Clustering& clustering,
                                  double merge_threshold);

// Representative whose endpoint bearing is most aligned with goal_direction
// (unit vector); ties break to the lower index. A sole representative is
// returned unconditionally.
int select_angular(std::span<const Path> representatives, const Vec2& goal_direction);

// Representative whose endpoint is closest to goal_point; lower index wins ties.
int select_euclidean(std::span<const Path> representatives, const Vec2& goal_point);

enum class Strategy { no_fusion, kmeans_only, euclidean, angular };

const char* to_string(Strategy s);
std::optional<Strategy> strategy_from_string(const std::string& name);

struct PlannerConfig {
  int top_k{32};
  double goal_weight{1.0};       // beta in the combined cost (no-fusion path)
  Strategy strategy{Strategy::angular};
  FusionConfig fusion;
  double lethal_fraction{0.9};   // no-path trigger, fraction of waypoints
  double es_goal_distance{3.5};  // intermediate-goal range for euclidean selection

  void validate() const;
};

struct PlanDiagnostics {
  Strategy strategy{Strategy::angular};
  int k{0};                           // clusters chosen (0 for no_fusion)
  std::optional<double> silhouette;   // loss at the chosen k
  RepresentativeSet representatives;  // empty for no_fusion
  int selected_index{0};  // into representatives, or into top-K for no_fusion
  Path selected;
  std::vector<int> top_k;             // original path indices, cost order
  double selected_traversability{0.0};
  double selected_goal{0.0};
  double selected_combined{0.0};
  bool fallback{false};
};

struct PlanResult {
  Path path;
  PlanDiagnostics diagnostics;
};

// Full pipeline: top-K by traversability, adaptive k-means, centroid merge,
// goal-aligned selection. Strategy variants: no_fusion picks the argmin of
// the combined cost over the top-K; kmeans_only selects among unmerged
// centroids; euclidean selects by endpoint distance to the intermediate goal
// at es_goal_distance along goal_direction. Throws NoPathError when every
// top-K path has traversability_cost >= lethal_fraction * n.
PlanResult plan(const PathSet& set, const CostMap& map,
                const Vec2& goal_direction, const PlannerConfig& config);

std::string diagnostics_to_json(const PlanDiagnostics& diag);

}  // namespace navfuse
