#include "navfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "navfuse/errors.hpp"
#include "navfuse/rng.hpp"

namespace navfuse {

void FusionConfig::validate() const {
  if (max_clusters < 2) throw std::invalid_argument("fusion: max_clusters must be >= 2");
  if (merge_threshold < 0.0)
    throw std::invalid_argument("fusion: merge_threshold must be >= 0");
  if (kmeans_restarts < 1) throw std::invalid_argument("fusion: kmeans_restarts must be >= 1");
  if (kmeans_max_iters < 1) throw std::invalid_argument("fusion: kmeans_max_iters must be >= 1");
}

double path_distance(const Path& a, const Path& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("path_distance: waypoint counts differ");
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) sum += (a.waypoints[i] - b.waypoints[i]).norm();
  return sum / a.size();
}

namespace {

// Squared Euclidean distance between paths embedded as concatenated
// waypoint vectors; this is the metric Lloyd's algorithm optimizes.
double embedded_dist2(const Path& a, const Path& b) {
  double sum = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const Vec2 d = a.waypoints[i] - b.waypoints[i];
    sum += d.x * d.x + d.z * d.z;
  }
  return sum;
}

Path waypointwise_mean(std::span<const Path> paths, std::span<const int> members) {
  const int n = paths[members[0]].size();
  Path mean;
  mean.kind = paths[members[0]].kind;
  mean.waypoints.assign(n, Vec2{});
  for (int m : members)
    for (int i = 0; i < n; ++i) mean.waypoints[i] += paths[m].waypoints[i];
  const double inv = 1.0 / members.size();
  for (auto& w : mean.waypoints) w = w * inv;
  return mean;
}

struct LloydResult {
  std::vector<int> assignments;
  std::vector<Path> centroids;
  double inertia{0.0};
};

// k-means++ seeding: first centroid uniform, the rest proportional to the
// squared distance to the nearest chosen centroid.
std::vector<int> kmeanspp_seeds(std::span<const Path> paths, int k, Rng& rng) {
  const int n = static_cast<int>(paths.size());
  std::vector<int> seeds;
  seeds.push_back(static_cast<int>(rng.uniform_index(n)));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(seeds.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], embedded_dist2(paths[i], paths[seeds.back()]));
      total += d2[i];
    }
    int chosen = -1;
    if (total <= 0.0) {
      // all points coincide with a centroid; any unused index will do
      for (int i = 0; i < n; ++i) {
        if (std::find(seeds.begin(), seeds.end(), i) == seeds.end()) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) chosen = static_cast<int>(rng.uniform_index(n));
    } else {
      double target = rng.uniform() * total;
      for (int i = 0; i < n; ++i) {
        target -= d2[i];
        if (target <= 0.0) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) chosen = n - 1;
    }
    seeds.push_back(chosen);
  }
  return seeds;
}

LloydResult lloyd(std::span<const Path> paths, int k, std::span<const int> seed_indices,
                  int max_iters) {
  const int n = static_cast<int>(paths.size());
  std::vector<Path> centroids;
  centroids.reserve(k);
  for (int s : seed_indices) centroids.push_back(paths[s]);

  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = embedded_dist2(paths[i], centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = embedded_dist2(paths[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }

    // Repair empty clusters by reseeding from the point farthest from its
    // centroid, then recompute means.
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < n; ++i) members[assign[i]].push_back(i);
    for (int c = 0; c < k; ++c) {
      if (!members[c].empty()) continue;
      int farthest = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(members[assign[i]].size()) <= 1) continue;
        const double d = embedded_dist2(paths[i], centroids[assign[i]]);
        if (d > far_d) {
          far_d = d;
          farthest = i;
        }
      }
      auto& old_members = members[assign[farthest]];
      old_members.erase(std::find(old_members.begin(), old_members.end(), farthest));
      assign[farthest] = c;
      members[c].push_back(farthest);
      changed = true;
    }
    for (int c = 0; c < k; ++c) centroids[c] = waypointwise_mean(paths, members[c]);
    if (!changed && iter > 0) break;
  }

  double inertia = 0.0;
  for (int i = 0; i < n; ++i) inertia += embedded_dist2(paths[i], centroids[assign[i]]);
  return {std::move(assign), std::move(centroids), inertia};
}

}  // namespace

Clustering kmeans(std::span<const Path> paths, int k, std::uint64_t seed, int restarts,
                  int max_iters) {
  const int n = static_cast<int>(paths.size());
  if (n == 0) throw std::invalid_argument("kmeans: no paths");
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k must be in [1, path count]");

  LloydResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    const auto seeds = kmeanspp_seeds(paths, k, rng);
    auto result = lloyd(paths, k, seeds, max_iters);
    if (result.inertia < best.inertia) best = std::move(result);
  }

  Clustering out;
  out.k = k;
  out.assignments = std::move(best.assignments);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  return out;
}

double silhouette_loss(std::span<const Path> paths, const Clustering& clustering) {
  if (clustering.k < 2) throw std::invalid_argument("silhouette: k must be >= 2");
  const int n = static_cast<int>(paths.size());
  std::vector<std::vector<int>> members(clustering.k);
  for (int i = 0; i < n; ++i) members[clustering.assignments[i]].push_back(i);
  for (const auto& m : members)
    if (m.empty()) throw std::invalid_argument("silhouette: empty cluster");

  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int ci = clustering.assignments[i];
    // a(i): mean distance to the other members of i's cluster. Singletons
    // take coefficient 0 by convention.
    if (members[ci].size() == 1) continue;
    double a = 0.0;
    for (int j : members[ci])
      if (j != i) a += path_distance(paths[i], paths[j]);
    a /= static_cast<double>(members[ci].size() - 1);

    // b(i): smallest mean distance to any other cluster.
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < clustering.k; ++c) {
      if (c == ci) continue;
      double mean = 0.0;
      for (int j : members[c]) mean += path_distance(paths[i], paths[j]);
      mean /= static_cast<double>(members[c].size());
      b = std::min(b, mean);
    }

    const double denom = std::max(a, b);
    if (denom > 0.0) sum += (b - a) / denom;
  }
  return -sum / n;
}

Clustering adaptive_kmeans(std::span<const Path> paths, const FusionConfig& config) {
  config.validate();
  const int n = static_cast<int>(paths.size());
  if (n == 0) throw std::invalid_argument("adaptive_kmeans: no paths");
  if (n < 3) {
    // Too few paths for silhouette-guided selection; flag a single cluster.
    auto single = kmeans(paths, 1, derive_seed(config.seed, 1), 1, config.kmeans_max_iters);
    single.fallback = true;
    return single;
  }

  const int k_hi = std::min(config.max_clusters, n - 1);
  Clustering best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_hi; ++k) {
    auto c = kmeans(paths, k, derive_seed(config.seed, k), config.kmeans_restarts,
                    config.kmeans_max_iters);
    const double loss = silhouette_loss(paths, c);
    if (loss < best_loss) {  // strict: ties keep the smaller k
      best_loss = loss;
      best = std::move(c);
    }
  }
  return best;
}

RepresentativeSet merge_centroids(std::span<const Path> paths, const Clustering& clustering,
                                  double merge_threshold) {
  const int k = clustering.k;
  // Single-linkage closure via union-find over centroid pairs strictly
  // within the threshold.
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (path_distance(clustering.centroids[i], clustering.centroids[j]) < merge_threshold)
        parent[find(i)] = find(j);

  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(k, -1);
  for (int c = 0; c < k; ++c) {
    const int root = find(c);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(c);
  }

  RepresentativeSet out;
  for (const auto& group : groups) {
    std::vector<int> member_paths;
    for (std::size_t i = 0; i < clustering.assignments.size(); ++i)
      if (std::find(group.begin(), group.end(), clustering.assignments[i]) != group.end())
        member_paths.push_back(static_cast<int>(i));
    // Representative weights every member path, not just the centroids.
    out.representatives.push_back(waypointwise_mean(paths, member_paths));
    out.provenance.push_back(group);
  }
  return out;
}

int select_angular(std::span<const Path> representatives, const Vec2& goal_direction) {
  if (representatives.empty()) throw std::invalid_argument("select: no representatives");
  if (std::abs(goal_direction.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("select: goal_direction must be unit length");
  if (representatives.size() == 1) return 0;
  int best = 0;
  double best_angle = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < representatives.size(); ++i) {
    const Vec2 heading = representatives[i].endpoint() - representatives[i].waypoints.front();
    const double ang = angle_between(heading, goal_direction);
    if (ang < best_angle) {
      best_angle = ang;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int select_euclidean(std::span<const Path> representatives, const Vec2& goal_point) {
  if (representatives.empty()) throw std::invalid_argument("select: no representatives");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < representatives.size(); ++i) {
    const double d = (representatives[i].endpoint() - goal_point).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::no_fusion: return "no_fusion";
    case Strategy::kmeans_only: return "kmeans_only";
    case Strategy::euclidean: return "euclidean";
    case Strategy::angular: return "angular";
  }
  return "angular";
}

std::optional<Strategy> strategy_from_string(const std::string& name) {
  if (name == "no_fusion" || name == "nf") return Strategy::no_fusion;
  if (name == "kmeans_only" || name == "km") return Strategy::kmeans_only;
  if (name == "euclidean" || name == "es") return Strategy::euclidean;
  if (name == "angular" || name == "ours") return Strategy::angular;
  return std::nullopt;
}

void PlannerConfig::validate() const {
  if (top_k < 1) throw std::invalid_argument("planner: top_k must be >= 1");
  if (goal_weight < 0.0) throw std::invalid_argument("planner: goal_weight must be >= 0");
  if (lethal_fraction <= 0.0 || lethal_fraction > 1.0)
    throw std::invalid_argument("planner: lethal_fraction must be in (0, 1]");
  if (es_goal_distance <= 0.0)
    throw std::invalid_argument("planner: es_goal_distance must be > 0");
  fusion.validate();
}

PlanResult plan(const PathSet& set, const CostMap& map, const Vec2& goal_direction,
                const PlannerConfig& config) {
  config.validate();
  if (set.size() < 1) throw std::invalid_argument("plan: empty path set");
  if (std::abs(goal_direction.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("plan: goal_direction must be unit length");

  const int K = std::min(config.top_k, set.size());
  auto top_idx = top_k_indices(set, map, K);

  std::vector<Path> candidates;
  candidates.reserve(K);
  std::vector<double> trav;
  trav.reserve(K);
  for (int idx : top_idx) {
    candidates.push_back(set.paths[idx]);
    trav.push_back(traversability_cost(set.paths[idx], map));
  }

  const int n = candidates.front().size();
  const double lethal_cutoff = config.lethal_fraction * n;
  if (*std::min_element(trav.begin(), trav.end()) >= lethal_cutoff)
    throw NoPathError("plan: every top-K candidate is blocked");

  PlanDiagnostics diag;
  diag.strategy = config.strategy;
  diag.top_k = top_idx;

  if (config.strategy == Strategy::no_fusion) {
    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < K; ++i) {
      const double c = trav[i] + config.goal_weight * goal_cost(candidates[i], goal_direction);
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    diag.selected_index = best;
    diag.selected = candidates[best];
    diag.selected_traversability = trav[best];
    diag.selected_goal = goal_cost(candidates[best], goal_direction);
    diag.selected_combined = best_cost;
    return {candidates[best], std::move(diag)};
  }

  const auto clustering = adaptive_kmeans(candidates, config.fusion);
  diag.k = clustering.k;
  diag.fallback = clustering.fallback;
  if (clustering.k >= 2) diag.silhouette = silhouette_loss(candidates, clustering);

  RepresentativeSet reps;
  if (config.strategy == Strategy::kmeans_only) {
    reps.representatives = clustering.centroids;
    for (int c = 0; c < clustering.k; ++c) reps.provenance.push_back({c});
  } else {
    reps = merge_centroids(candidates, clustering, config.fusion.merge_threshold);
  }

  int selected;
  if (config.strategy == Strategy::euclidean) {
    selected = select_euclidean(reps.representatives,
                                goal_direction * config.es_goal_distance);
  } else {
    selected = select_angular(reps.representatives, goal_direction);
  }

  diag.representatives = reps;
  diag.selected_index = selected;
  diag.selected = reps.representatives[selected];
  diag.selected_traversability = traversability_cost(diag.selected, map);
  diag.selected_goal = goal_cost(diag.selected, goal_direction);
  diag.selected_combined =
      diag.selected_traversability + config.goal_weight * diag.selected_goal;
  return {diag.selected, std::move(diag)};
}

namespace {

nlohmann::ordered_json path_to_json(const Path& p) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(p.kind);
  auto& wp = j["waypoints"] = nlohmann::ordered_json::array();
  for (const auto& w : p.waypoints) wp.push_back({w.x, w.z});
  return j;
}

}  // namespace

std::string diagnostics_to_json(const PlanDiagnostics& diag) {
  nlohmann::ordered_json j;
  j["k"] = diag.k;
  if (diag.silhouette)
    j["silhouette_loss"] = *diag.silhouette;
  else
    j["silhouette_loss"] = nullptr;
  auto& reps = j["representatives"] = nlohmann::ordered_json::array();
  for (const auto& r : diag.representatives.representatives) reps.push_back(path_to_json(r));
  j["selected_index"] = diag.selected_index;
  j["strategy"] = to_string(diag.strategy);
  j["costs"] = {{"traversability", diag.selected_traversability},
                {"goal", diag.selected_goal},
                {"combined", diag.selected_combined}};
  j["selected_path"] = path_to_json(diag.selected);
  j["top_k"] = diag.top_k;
  j["fallback"] = diag.fallback;
  return j.dump(2) + "\n";
}

}  // namespace navfuse
