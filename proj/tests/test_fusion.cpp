#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "navfuse/errors.hpp"
#include "navfuse/fusion.hpp"
#include "navfuse/rng.hpp"

using namespace navfuse;

namespace {

Path path_from(std::vector<Vec2> wps) {
  Path p;
  p.kind = PathKind::linear;
  p.waypoints = std::move(wps);
  return p;
}

Path straight_path(double bearing, double length, int n) {
  Path p;
  p.kind = PathKind::linear;
  const Vec2 end = direction_from_bearing(bearing) * length;
  for (int i = 0; i < n; ++i) p.waypoints.push_back(end * (static_cast<double>(i) / (n - 1)));
  return p;
}

Path translated(const Path& a, const Vec2& offset) {
  Path p = a;
  for (auto& w : p.waypoints) w += offset;
  return p;
}

std::vector<Path> random_paths(int count, int n, Rng& rng, double spread = 3.0) {
  std::vector<Path> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Path p;
    p.kind = PathKind::linear;
    Vec2 at{rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
    for (int j = 0; j < n; ++j) {
      p.waypoints.push_back(at);
      at += Vec2{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Independent brute-force evaluation of the negative mean silhouette
// coefficient, straight from its definition.
double silhouette_oracle(const std::vector<Path>& paths, const std::vector<int>& assign,
                         int k) {
  const int n = static_cast<int>(paths.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    int own = 0;
    for (int j = 0; j < n; ++j) own += j != i && assign[j] == assign[i];
    if (own == 0) continue;  // singleton: coefficient 0
    double a = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i && assign[j] == assign[i]) a += path_distance(paths[i], paths[j]);
    a /= own;
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == assign[i]) continue;
      double sum = 0.0;
      int cnt = 0;
      for (int j = 0; j < n; ++j)
        if (assign[j] == c) {
          sum += path_distance(paths[i], paths[j]);
          ++cnt;
        }
      if (cnt > 0) b = std::min(b, sum / cnt);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return -total / n;
}

// Random clustering with every cluster non-empty.
std::vector<int> random_assignment(int n, int k, Rng& rng) {
  std::vector<int> assign(n);
  while (true) {
    std::vector<int> count(k, 0);
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(rng.uniform_index(k));
      ++count[assign[i]];
    }
    if (std::all_of(count.begin(), count.end(), [](int c) { return c > 0; })) return assign;
  }
}

Clustering make_clustering(const std::vector<Path>& paths, std::vector<int> assign, int k) {
  Clustering c;
  c.k = k;
  c.assignments = std::move(assign);
  c.centroids.resize(k);
  for (int cl = 0; cl < k; ++cl) {
    std::vector<int> members;
    for (int i = 0; i < static_cast<int>(paths.size()); ++i)
      if (c.assignments[i] == cl) members.push_back(i);
    Path mean;
    mean.kind = PathKind::linear;
    mean.waypoints.assign(paths[0].size(), Vec2{});
    for (int m : members)
      for (int j = 0; j < paths[0].size(); ++j) mean.waypoints[j] += paths[m].waypoints[j];
    for (auto& w : mean.waypoints) w = w * (1.0 / members.size());
    c.centroids[cl] = mean;
  }
  return c;
}

double embedded_inertia(const std::vector<Path>& paths, const Clustering& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (int j = 0; j < paths[i].size(); ++j) {
      const Vec2 d = paths[i].waypoints[j] - c.centroids[c.assignments[i]].waypoints[j];
      sum += d.x * d.x + d.z * d.z;
    }
  }
  return sum;
}

}  // namespace

TEST_CASE("path_distance identity, uniform offset, symmetry, triangle inequality") {
  Rng rng(12);
  const auto paths = random_paths(12, 8, rng);
  for (const auto& p : paths) CHECK(path_distance(p, p) == 0.0);

  const Path shifted = translated(paths[0], {1.0, 0.0});
  CHECK(path_distance(paths[0], shifted) == doctest::Approx(1.0));

  for (int trial = 0; trial < 40; ++trial) {
    const Path& a = paths[rng.uniform_index(paths.size())];
    const Path& b = paths[rng.uniform_index(paths.size())];
    const Path& c = paths[rng.uniform_index(paths.size())];
    CHECK(path_distance(a, b) == doctest::Approx(path_distance(b, a)));
    CHECK(path_distance(a, c) <= path_distance(a, b) + path_distance(b, c) + 1e-12);
  }

  Path other = paths[0];
  other.waypoints.pop_back();
  CHECK_THROWS_AS(path_distance(paths[0], other), std::invalid_argument);
}

TEST_CASE("kmeans with k=1 returns the global mean") {
  Rng rng(5);
  const auto paths = random_paths(9, 6, rng);
  const auto c = kmeans(paths, 1, 1, 2, 30);
  CHECK(c.k == 1);
  for (int j = 0; j < 6; ++j) {
    Vec2 mean{};
    for (const auto& p : paths) mean += p.waypoints[j];
    mean = mean * (1.0 / paths.size());
    CHECK(c.centroids[0].waypoints[j].x == doctest::Approx(mean.x));
    CHECK(c.centroids[0].waypoints[j].z == doctest::Approx(mean.z));
  }
}

TEST_CASE("kmeans separates two groups of identical paths exactly") {
  std::vector<Path> paths;
  const Path a = straight_path(-0.5, 3.0, 10);
  const Path b = straight_path(0.5, 3.0, 10);
  for (int i = 0; i < 4; ++i) paths.push_back(a);
  for (int i = 0; i < 4; ++i) paths.push_back(b);
  const auto c = kmeans(paths, 2, 7, 4, 30);
  CHECK(c.inertia == doctest::Approx(0.0));
  CHECK(c.assignments[0] != c.assignments[4]);
  for (int i = 1; i < 4; ++i) CHECK(c.assignments[i] == c.assignments[0]);
  for (int i = 5; i < 8; ++i) CHECK(c.assignments[i] == c.assignments[4]);
  CHECK_THROWS_AS(kmeans(paths, 9, 1, 1, 10), std::invalid_argument);
}

TEST_CASE("kmeans restarts reach the exhaustive-seeding oracle on a small instance") {
  Rng rng(2022);
  const auto paths = random_paths(12, 5, rng);
  const auto best = kmeans(paths, 3, 11, 8, 50);

  // No independently seeded single restart can beat the returned clustering.
  for (int r = 0; r < 8; ++r) {
    const auto single = kmeans(paths, 3, derive_seed(11, r), 1, 50);
    CHECK(best.inertia <= single.inertia + 1e-9);
  }

  // Exhaustive Lloyd from every 3-subset seeding.
  double oracle = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(paths.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        // run Lloyd by hand from centroids {i, j, l}
        std::vector<Path> cent = {paths[i], paths[j], paths[l]};
        std::vector<int> assign(n, -1);
        for (int iter = 0; iter < 100; ++iter) {
          bool changed = false;
          for (int p = 0; p < n; ++p) {
            int bestc = 0;
            double bestd = std::numeric_limits<double>::infinity();
            for (int cidx = 0; cidx < 3; ++cidx) {
              double d = 0.0;
              for (int w = 0; w < paths[p].size(); ++w) {
                const Vec2 diff = paths[p].waypoints[w] - cent[cidx].waypoints[w];
                d += diff.x * diff.x + diff.z * diff.z;
              }
              if (d < bestd) {
                bestd = d;
                bestc = cidx;
              }
            }
            if (assign[p] != bestc) {
              assign[p] = bestc;
              changed = true;
            }
          }
          bool empty = false;
          for (int cidx = 0; cidx < 3; ++cidx) {
            std::vector<int> members;
            for (int p = 0; p < n; ++p)
              if (assign[p] == cidx) members.push_back(p);
            if (members.empty()) {
              empty = true;
              continue;
            }
            Path mean;
            mean.kind = PathKind::linear;
            mean.waypoints.assign(paths[0].size(), Vec2{});
            for (int m : members)
              for (int w = 0; w < paths[0].size(); ++w) mean.waypoints[w] += paths[m].waypoints[w];
            for (auto& w : mean.waypoints) w = w * (1.0 / members.size());
            cent[cidx] = mean;
          }
          if (empty || !changed) break;
        }
        bool valid = true;
        for (int cidx = 0; cidx < 3; ++cidx)
          if (std::count(assign.begin(), assign.end(), cidx) == 0) valid = false;
        if (!valid) continue;
        Clustering trial = make_clustering(paths, assign, 3);
        oracle = std::min(oracle, embedded_inertia(paths, trial));
      }
  CHECK(best.inertia == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("kmeans is deterministic given the seed") {
  Rng rng(9);
  const auto paths = random_paths(20, 6, rng);
  const auto a = kmeans(paths, 4, 123, 8, 50);
  const auto b = kmeans(paths, 4, 123, 8, 50);
  CHECK(a.assignments == b.assignments);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("silhouette matches the brute-force oracle on random instances") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_index(26));
    const int k = 2 + static_cast<int>(rng.uniform_index(std::min(4, n - 1)));
    const auto paths = random_paths(n, 5, rng);
    const auto assign = random_assignment(n, k, rng);
    const auto clustering = make_clustering(paths, assign, k);
    const double loss = silhouette_loss(paths, clustering);
    const double oracle = silhouette_oracle(paths, assign, k);
    CHECK(loss == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(loss >= -1.0);
    CHECK(loss <= 1.0);
  }
}

TEST_CASE("silhouette degenerate conventions") {
  // all paths identical, arbitrary 2-way split: a = b = 0 -> loss 0
  std::vector<Path> paths(6, straight_path(0.0, 2.0, 5));
  std::vector<int> assign = {0, 0, 0, 1, 1, 1};
  CHECK(silhouette_loss(paths, make_clustering(paths, assign, 2)) == 0.0);

  // three zero-spread clusters at mutual distance D: every coefficient is 1
  std::vector<Path> tight;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 3; ++i)
      tight.push_back(translated(straight_path(0.0, 2.0, 5), {4.0 * c, 0.0}));
  std::vector<int> tassign = {0, 0, 0, 1, 1, 1, 2, 2, 2};
  CHECK(silhouette_loss(tight, make_clustering(tight, tassign, 3)) == doctest::Approx(-1.0));

  // two far-separated tight clusters: loss below -0.9
  Rng rng(31);
  std::vector<Path> two;
  for (int i = 0; i < 6; ++i) {
    const Path base = straight_path(i < 3 ? -0.4 : 0.4, 3.0, 8);
    two.push_back(translated(base, {rng.uniform(-0.01, 0.01) + (i < 3 ? -10.0 : 10.0),
                                    rng.uniform(-0.01, 0.01)}));
  }
  std::vector<int> sassign = {0, 0, 0, 1, 1, 1};
  CHECK(silhouette_loss(two, make_clustering(two, sassign, 2)) < -0.9);

  CHECK_THROWS_AS(silhouette_loss(paths, make_clustering(paths, {0, 0, 0, 0, 0, 0}, 1)),
                  std::invalid_argument);
}

TEST_CASE("adaptive kmeans recovers the bundle count") {
  Rng rng(123);
  FusionConfig config;
  config.max_clusters = 6;
  config.seed = 5;

  auto bundles = [&](const std::vector<double>& bearings, int per_bundle) {
    std::vector<Path> paths;
    for (double b : bearings)
      for (int i = 0; i < per_bundle; ++i) {
        Path p = straight_path(b + rng.uniform(-0.02, 0.02), 3.5, 10);
        paths.push_back(translated(p, {rng.uniform(-0.05, 0.05), 0.0}));
      }
    return paths;
  };

  // two well-separated bundles -> k = 2, confirmed by a per-k oracle sweep
  {
    const auto paths = bundles({-0.9, 0.9}, 6);
    const auto chosen = adaptive_kmeans(paths, config);
    CHECK(chosen.k == 2);
    double best_loss = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 2; k <= 6; ++k) {
      const auto c = kmeans(paths, k, derive_seed(config.seed, k), config.kmeans_restarts,
                            config.kmeans_max_iters);
      const double loss = silhouette_loss(paths, c);
      if (loss < best_loss) {
        best_loss = loss;
        best_k = k;
      }
    }
    CHECK(best_k == 2);
  }

  // three bundles -> k = 3
  {
    const auto paths = bundles({-1.0, 0.0, 1.0}, 5);
    CHECK(adaptive_kmeans(paths, config).k == 3);
  }

  // three paths total: only k = 2 is valid
  {
    const auto paths = bundles({-1.0, 0.0, 1.0}, 1);
    CHECK(adaptive_kmeans(paths, config).k == 2);
  }

  // fewer than three paths: flagged single-cluster fallback
  {
    const auto paths = bundles({0.0}, 2);
    const auto c = adaptive_kmeans(paths, config);
    CHECK(c.k == 1);
    CHECK(c.fallback);
  }
}

TEST_CASE("merge_centroids limits and the distance-triple case") {
  Rng rng(8);
  std::vector<Path> paths;
  // three tight bundles whose centroids sit at mutual distances ~{0.4, 2.0, 2.1}
  const Vec2 offsets[3] = {{0.0, 0.0}, {0.4, 0.0}, {2.0, 0.35}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 3; ++i)
      paths.push_back(translated(straight_path(0.0, 3.0, 8), offsets[c]));
  Clustering clustering = make_clustering(paths, {0, 0, 0, 1, 1, 1, 2, 2, 2}, 3);

  const double d01 = path_distance(clustering.centroids[0], clustering.centroids[1]);
  const double d02 = path_distance(clustering.centroids[0], clustering.centroids[2]);
  const double d12 = path_distance(clustering.centroids[1], clustering.centroids[2]);
  CHECK(d01 == doctest::Approx(0.4));
  CHECK(d02 > 1.9);
  CHECK(d12 > 1.5);

  // threshold 0: no merging, representatives are the centroids
  const auto none = merge_centroids(paths, clustering, 0.0);
  REQUIRE(none.representatives.size() == 3);
  for (int c = 0; c < 3; ++c)
    CHECK(path_distance(none.representatives[c], clustering.centroids[c]) ==
          doctest::Approx(0.0));

  // threshold covering only the close pair: two representatives (brute-force
  // single linkage on the triple: only d01 < 0.5)
  const auto merged = merge_centroids(paths, clustering, 0.5);
  CHECK(merged.representatives.size() == 2);
  // merged representative equals the mean over all six member paths
  const auto& group = merged.provenance[0];
  CHECK(group.size() == 2);

  // infinite threshold: single representative = global mean path
  const auto all = merge_centroids(paths, clustering,
                                   std::numeric_limits<double>::infinity());
  REQUIRE(all.representatives.size() == 1);
  Path global;
  global.kind = PathKind::linear;
  global.waypoints.assign(8, Vec2{});
  for (const auto& p : paths)
    for (int j = 0; j < 8; ++j) global.waypoints[j] += p.waypoints[j];
  for (auto& w : global.waypoints) w = w * (1.0 / paths.size());
  CHECK(path_distance(all.representatives[0], global) == doctest::Approx(0.0));
}

TEST_CASE("merged representative weights members, not centroids") {
  // unequal clusters: 5 paths at x=0, 1 path at x=1 -> mean at 1/6
  std::vector<Path> paths;
  for (int i = 0; i < 5; ++i) paths.push_back(straight_path(0.0, 3.0, 6));
  paths.push_back(translated(straight_path(0.0, 3.0, 6), {1.0, 0.0}));
  Clustering clustering = make_clustering(paths, {0, 0, 0, 0, 0, 1}, 2);
  const auto merged = merge_centroids(paths, clustering, 5.0);
  REQUIRE(merged.representatives.size() == 1);
  CHECK(merged.representatives[0].waypoints[0].x == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("representative count is monotone non-increasing in the threshold") {
  Rng rng(456);
  const auto paths = random_paths(24, 6, rng);
  const auto clustering = kmeans(paths, 6, 3, 4, 40);
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (double t : {0.0, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto reps = merge_centroids(paths, clustering, t);
    CHECK(reps.representatives.size() <= prev);
    prev = reps.representatives.size();

    // groups are separated: no inter-group centroid pair within threshold
    for (std::size_t g1 = 0; g1 < reps.provenance.size(); ++g1)
      for (std::size_t g2 = g1 + 1; g2 < reps.provenance.size(); ++g2)
        for (int c1 : reps.provenance[g1])
          for (int c2 : reps.provenance[g2])
            CHECK(path_distance(clustering.centroids[c1], clustering.centroids[c2]) >= t);
  }
}

TEST_CASE("angular selection: alignment, ties, single representative") {
  const Path left = straight_path(-30.0 * kPi / 180.0, 3.5, 10);
  const Path right = straight_path(10.0 * kPi / 180.0, 3.5, 10);
  std::vector<Path> reps = {translated(left, {0, 0}), right};

  // goal at 0 deg: the -10-deg path wins over +30 (here right = +10 wins)
  CHECK(select_angular(reps, direction_from_bearing(0.0)) == 1);

  // symmetric bearings, goal straight ahead: lower index wins
  std::vector<Path> sym = {straight_path(-20.0 * kPi / 180.0, 3.5, 10),
                           straight_path(20.0 * kPi / 180.0, 3.5, 10)};
  CHECK(select_angular(sym, direction_from_bearing(0.0)) == 0);

  // single representative is returned even when the goal is behind
  std::vector<Path> single = {straight_path(0.0, 3.5, 10)};
  CHECK(select_angular(single, direction_from_bearing(kPi)) == 0);

  // scaling all representative geometries preserves the choice
  std::vector<Path> scaled;
  for (const auto& r : sym) {
    Path s = r;
    for (auto& w : s.waypoints) w = w * 7.3;
    scaled.push_back(s);
  }
  CHECK(select_angular(scaled, direction_from_bearing(0.3)) ==
        select_angular(sym, direction_from_bearing(0.3)));
}

TEST_CASE("euclidean selection: proximity and ties") {
  std::vector<Path> reps = {path_from({{0, 0}, {1, 3}}), path_from({{0, 0}, {-2, 3}})};
  CHECK(select_euclidean(reps, {0.0, 10.0}) == 0);
  CHECK(select_euclidean(reps, {1.0, 3.0}) == 0);  // goal on an endpoint
  std::vector<Path> tie = {path_from({{0, 0}, {1, 3}}), path_from({{0, 0}, {-1, 3}})};
  CHECK(select_euclidean(tie, {0.0, 3.0}) == 0);   // equidistant: lower index
}

namespace {

CostMap plan_map(double fill) {
  GridSpec s;
  s.resolution = 0.1;
  s.width = 120;
  s.height = 60;
  s.origin_x = -6.0;
  s.origin_z = 0.0;
  s.unknown_cost = 0.5;
  CostMap map(s);
  for (auto& c : map.cells()) c = fill;
  return map;
}

}  // namespace

TEST_CASE("plan: open field sends the selected path toward the goal") {
  SamplerSpec sampler;
  sampler.path_count = 128;
  const PathSet set = sample_paths(sampler, 17);
  const CostMap open = plan_map(0.0);
  PlannerConfig config;
  config.fusion.seed = 4;

  const auto result = plan(set, open, direction_from_bearing(0.0), config);
  const double bearing = bearing_of(result.path.endpoint());
  CHECK(std::abs(bearing) <= 5.0 * kPi / 180.0);
}

TEST_CASE("plan: two-branch fork with the angular strategy stays in the goal branch") {
  SamplerSpec sampler;
  sampler.path_count = 128;
  const PathSet set = sample_paths(sampler, 29);

  // corridor fork carved into a lethal field: stem ahead, branches at +-30 deg
  CostMap map = plan_map(1.0);
  const auto& s = map.spec();
  const double fork_z = 1.0;
  const Vec2 fork{0.0, fork_z};
  auto carve = [&](const Vec2& a, const Vec2& b, double width) {
    for (int iz = 0; iz < s.height; ++iz)
      for (int ix = 0; ix < s.width; ++ix)
        if (point_segment_distance(map.cell_center({ix, iz}), a, b) <= width / 2.0)
          map.set(ix, iz, 0.0);
  };
  carve({0, 0}, fork, 1.2);
  const Vec2 left_end = fork + direction_from_bearing(-kPi / 6.0) * 5.0;
  const Vec2 right_end = fork + direction_from_bearing(kPi / 6.0) * 5.0;
  carve(fork, left_end, 1.2);
  carve(fork, right_end, 1.2);

  PlannerConfig config;
  config.strategy = Strategy::angular;
  config.fusion.seed = 10;
  const Vec2 goal = direction_from_bearing(-kPi / 6.0);
  const auto result = plan(set, map, goal, config);

  // membership oracle: most waypoints lie within the left corridor
  int inside = 0;
  for (const auto& w : result.path.waypoints) {
    const double d = std::min(point_segment_distance(w, {0, 0}, fork),
                              point_segment_distance(w, fork, left_end));
    inside += d <= 0.9;
  }
  CHECK(inside * 2 > result.path.size());

  // diagnostics carry at least two representatives for the fork
  CHECK(result.diagnostics.representatives.representatives.size() >= 2);
  CHECK(result.diagnostics.k >= 2);
}

TEST_CASE("plan: fully lethal map raises the no-path error") {
  SamplerSpec sampler;
  sampler.path_count = 32;
  const PathSet set = sample_paths(sampler, 3);
  const CostMap lethal = plan_map(1.0);
  PlannerConfig config;
  CHECK_THROWS_AS(plan(set, lethal, direction_from_bearing(0.0), config), NoPathError);
}

TEST_CASE("plan: no_fusion picks the combined-cost argmin over the top-K") {
  SamplerSpec sampler;
  sampler.path_count = 64;
  const PathSet set = sample_paths(sampler, 31);
  const CostMap open = plan_map(0.0);

  PlannerConfig config;
  config.strategy = Strategy::no_fusion;
  config.goal_weight = 1.0;
  const Vec2 goal = direction_from_bearing(0.25);
  const auto result = plan(set, open, goal, config);

  double best = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  for (int idx : result.diagnostics.top_k) {
    const double c = combined_cost(set.paths[idx], open, goal, 1.0);
    if (c < best) {
      best = c;
      best_idx = idx;
    }
  }
  CHECK(result.diagnostics.top_k[result.diagnostics.selected_index] == best_idx);
  CHECK(result.diagnostics.selected_combined == doctest::Approx(best));
  CHECK(result.diagnostics.representatives.representatives.empty());
}

TEST_CASE("plan: kmeans_only equals angular with a zero merge threshold") {
  SamplerSpec sampler;
  sampler.path_count = 96;
  const PathSet set = sample_paths(sampler, 57);
  CostMap map = plan_map(0.0);
  Rng rng(91);
  for (auto& c : map.cells())
    if (rng.uniform() < 0.1) c = 1.0;

  PlannerConfig km;
  km.strategy = Strategy::kmeans_only;
  km.fusion.seed = 21;
  PlannerConfig ang;
  ang.strategy = Strategy::angular;
  ang.fusion.seed = 21;
  ang.fusion.merge_threshold = 0.0;

  const Vec2 goal = direction_from_bearing(-0.2);
  const auto a = plan(set, map, goal, km);
  const auto b = plan(set, map, goal, ang);
  CHECK(a.diagnostics.selected_index == b.diagnostics.selected_index);
  CHECK(path_distance(a.path, b.path) == doctest::Approx(0.0));
}

TEST_CASE("plan is deterministic: identical inputs give identical diagnostics") {
  SamplerSpec sampler;
  sampler.path_count = 64;
  const PathSet set = sample_paths(sampler, 71);
  CostMap map = plan_map(0.0);
  Rng rng(14);
  for (auto& c : map.cells())
    if (rng.uniform() < 0.15) c = rng.uniform();

  PlannerConfig config;
  config.fusion.seed = 33;
  const Vec2 goal = direction_from_bearing(0.4);
  const auto a = plan(set, map, goal, config);
  const auto b = plan(set, map, goal, config);
  CHECK(diagnostics_to_json(a.diagnostics) == diagnostics_to_json(b.diagnostics));
}
