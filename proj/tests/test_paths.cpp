#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "navfuse/paths.hpp"
#include "navfuse/rng.hpp"

using namespace navfuse;

namespace {

CostMap uniform_map(double cost) {
  GridSpec s;
  s.resolution = 0.1;
  s.width = 120;
  s.height = 60;
  s.origin_x = -6.0;
  s.origin_z = 0.0;
  s.unknown_cost = 0.5;
  CostMap map(s);
  for (auto& c : map.cells()) c = cost;
  return map;
}

Path straight_path(double bearing, double length, int n) {
  Path p;
  p.kind = PathKind::linear;
  const Vec2 end = direction_from_bearing(bearing) * length;
  for (int i = 0; i < n; ++i) p.waypoints.push_back(end * (static_cast<double>(i) / (n - 1)));
  return p;
}

}  // namespace

TEST_CASE("degenerate FOV yields a single straight-ahead path") {
  SamplerSpec spec;
  spec.path_count = 1;
  spec.fov_halfangle = 1e-12;
  const PathSet set = sample_paths(spec, 5);
  REQUIRE(set.size() == 1);
  const Path& p = set.paths[0];
  CHECK(p.kind == PathKind::linear);
  CHECK(p.waypoints.front().x == 0.0);
  CHECK(p.waypoints.front().z == 0.0);
  CHECK(p.endpoint().x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p.endpoint().z == doctest::Approx(spec.endpoint_radius));
}

TEST_CASE("sampling is deterministic in (spec, seed)") {
  SamplerSpec spec;
  const PathSet a = sample_paths(spec, 99);
  const PathSet b = sample_paths(spec, 99);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) {
    REQUIRE(a.paths[i].size() == b.paths[i].size());
    for (int j = 0; j < a.paths[i].size(); ++j) {
      CHECK(a.paths[i].waypoints[j].x == b.paths[i].waypoints[j].x);
      CHECK(a.paths[i].waypoints[j].z == b.paths[i].waypoints[j].z);
    }
  }
  const PathSet c = sample_paths(spec, 100);
  bool any_diff = false;
  for (int j = 0; j < a.paths[0].size(); ++j)
    any_diff |= a.paths[0].waypoints[j].x != c.paths[0].waypoints[j].x;
  CHECK(any_diff);
}

TEST_CASE("sampled endpoints satisfy the FOV and radius constraints") {
  SamplerSpec spec;
  spec.path_count = 100;
  spec.waypoints_per_path = 20;
  const PathSet set = sample_paths(spec, 7);
  REQUIRE(set.size() == 100);
  for (const Path& p : set.paths) {
    REQUIRE(p.size() == 20);
    CHECK(p.waypoints.front().x == 0.0);
    CHECK(p.waypoints.front().z == 0.0);
    const Vec2 e = p.endpoint();
    CHECK(std::abs(std::atan2(e.x, e.z)) <= spec.fov_halfangle + 1e-12);
    CHECK(std::abs(e.norm() - spec.endpoint_radius) < 1e-6);

    // near-uniform arc-length spacing
    double total = 0.0;
    std::vector<double> gaps;
    for (int i = 1; i < p.size(); ++i) {
      gaps.push_back((p.waypoints[i] - p.waypoints[i - 1]).norm());
      total += gaps.back();
    }
    const double mean = total / gaps.size();
    for (double g : gaps) CHECK(g <= 1.5 * mean);
  }
  // both kinds get generated
  CHECK(std::any_of(set.paths.begin(), set.paths.end(),
                    [](const Path& p) { return p.kind == PathKind::quadratic; }));
  CHECK(std::any_of(set.paths.begin(), set.paths.end(),
                    [](const Path& p) { return p.kind == PathKind::linear; }));
}

TEST_CASE("sampler validation") {
  SamplerSpec spec;
  spec.path_count = 0;
  CHECK_THROWS_AS(sample_paths(spec, 1), std::invalid_argument);
  spec = SamplerSpec{};
  spec.waypoints_per_path = 1;
  CHECK_THROWS_AS(sample_paths(spec, 1), std::invalid_argument);
  spec = SamplerSpec{};
  spec.fov_halfangle = 2.0;
  CHECK_THROWS_AS(sample_paths(spec, 1), std::invalid_argument);
}

TEST_CASE("traversability cost sums waypoint cell costs") {
  const int n = 20;
  const Path p = straight_path(0.0, 3.5, n);
  CHECK(traversability_cost(p, uniform_map(0.0)) == 0.0);

  // every waypoint outside the map costs 1
  GridSpec tiny;
  tiny.resolution = 0.1;
  tiny.width = 2;
  tiny.height = 2;
  tiny.origin_x = 50.0;
  tiny.origin_z = 50.0;
  CHECK(traversability_cost(p, CostMap(tiny)) == doctest::Approx(n));

  // a lethal band covering exactly waypoints 5..7 adds exactly 3
  CostMap banded = uniform_map(0.0);
  const double step = 3.5 / (n - 1);
  for (int i = 5; i <= 7; ++i) {
    const auto cell = banded.cell_of({0.0, i * step});
    REQUIRE(cell);
    banded.set(cell->ix, cell->iz, 1.0);
  }
  CHECK(traversability_cost(p, banded) == doctest::Approx(3.0));
}

TEST_CASE("goal cost for aligned, opposed, and perpendicular straight paths") {
  const int n = 20;
  const Vec2 goal{0.0, 1.0};
  CHECK(goal_cost(straight_path(0.0, 3.5, n), goal) == doctest::Approx(0.0));
  // straight back: every non-start waypoint contributes 1
  Path back;
  back.kind = PathKind::linear;
  for (int i = 0; i < n; ++i) back.waypoints.push_back({0.0, -3.5 * i / (n - 1)});
  CHECK(goal_cost(back, goal) == doctest::Approx(n - 1));
  // perpendicular: each term is 1/2
  CHECK(goal_cost(straight_path(kPi / 2.0, 3.5, n), goal) == doctest::Approx((n - 1) / 2.0));
  CHECK_THROWS_AS(goal_cost(back, Vec2{0.0, 2.0}), std::invalid_argument);
}

TEST_CASE("goal cost terms lie in [0, 1]") {
  const PathSet set = sample_paths(SamplerSpec{}, 21);
  for (const Path& p : set.paths) {
    const double g = goal_cost(p, {0.6, 0.8});
    CHECK(g >= 0.0);
    CHECK(g <= p.size() - 1.0);
  }
}

TEST_CASE("combined cost arithmetic and linearity in the goal weight") {
  const Path p = straight_path(0.3, 3.5, 20);
  const CostMap zero = uniform_map(0.0);
  const CostMap half = uniform_map(0.5);
  const Vec2 goal{0.0, 1.0};

  CHECK(combined_cost(p, half, goal, 0.0) == traversability_cost(p, half));
  CHECK(combined_cost(p, zero, goal, 1.0) == doctest::Approx(goal_cost(p, goal)));

  // f = 3, g = 2, beta = 10 -> 23
  Path three = straight_path(0.0, 3.5, 3);
  CostMap m = uniform_map(1.0);
  // f-sum = 3 (three waypoints on cost-1 cells); craft g-sum = 2 via a
  // perpendicular goal with 4 non-start waypoints... instead verify plain
  // arithmetic through the API on uniform maps:
  CHECK(combined_cost(three, m, goal, 10.0) ==
        doctest::Approx(3.0 + 10.0 * goal_cost(three, goal)));

  // linearity: C(b1) + C(b2) - C(0) == C(b1 + b2), exactly
  Rng rng(17);
  const PathSet set = sample_paths(SamplerSpec{}, 33);
  for (int trial = 0; trial < 50; ++trial) {
    const Path& q = set.paths[rng.uniform_index(set.size())];
    const double b1 = rng.uniform(0.0, 5.0), b2 = rng.uniform(0.0, 5.0);
    const double lhs = combined_cost(q, half, goal, b1) + combined_cost(q, half, goal, b2) -
                       combined_cost(q, half, goal, 0.0);
    CHECK(lhs == doctest::Approx(combined_cost(q, half, goal, b1 + b2)).epsilon(1e-9));
  }
}

TEST_CASE("top_k ordering, ties, and bounds") {
  SamplerSpec spec;
  spec.path_count = 16;
  const PathSet set = sample_paths(spec, 3);
  const CostMap zero = uniform_map(0.0);

  // uniform zero map: pure tie-break by index
  const auto idx = top_k_indices(set, zero, 5);
  CHECK(idx == std::vector<int>{0, 1, 2, 3, 4});

  // K = M returns everything sorted by cost then index
  const auto all = top_k_indices(set, zero, 16);
  CHECK(static_cast<int>(all.size()) == 16);

  CHECK_THROWS_AS(top_k_indices(set, zero, 17), std::invalid_argument);
  CHECK_THROWS_AS(top_k_indices(set, zero, 0), std::invalid_argument);

  // corridor map: only near-straight paths stay cheap
  CostMap corridor = uniform_map(1.0);
  const auto& s = corridor.spec();
  for (int iz = 0; iz < s.height; ++iz)
    for (int ix = 0; ix < s.width; ++ix)
      if (std::abs(corridor.cell_center({ix, iz}).x) < 0.5) corridor.set(ix, iz, 0.0);
  const auto best = top_k_indices(set, corridor, 3);
  std::vector<double> costs;
  for (int i : best) costs.push_back(traversability_cost(set.paths[i], corridor));
  CHECK(std::is_sorted(costs.begin(), costs.end()));
  for (int i : best) {
    int inside = 0;
    for (const auto& w : set.paths[i].waypoints) inside += std::abs(w.x) < 0.5;
    CHECK(inside > set.paths[i].size() / 2);
  }
}

TEST_CASE("argmin invariance under uniform positive scaling") {
  SamplerSpec spec;
  spec.path_count = 32;
  const PathSet set = sample_paths(spec, 41);
  Rng rng(55);
  CostMap map = uniform_map(0.0);
  const auto& s = map.spec();
  for (int iz = 0; iz < s.height; ++iz)
    for (int ix = 0; ix < s.width; ++ix)
      if (rng.uniform() < 0.2) map.set(ix, iz, rng.uniform());
  const Vec2 goal = direction_from_bearing(0.3);
  const double beta = 1.7;

  auto argmin_combined = [&](const CostMap& m, double scale) {
    int best = -1;
    double best_c = 1e300;
    for (int i = 0; i < set.size(); ++i) {
      const double c = scale * combined_cost(set.paths[i], m, goal, beta);
      if (c < best_c) {
        best_c = c;
        best = i;
      }
    }
    return best;
  };

  // scale f by c through the map, g by c through the total: same argmin
  const double c = 0.37;
  CostMap scaled = map;
  for (auto& cell : scaled.cells()) cell *= c;
  int base_arg = argmin_combined(map, 1.0);

  int scaled_arg = -1;
  {
    double best_c = 1e300;
    for (int i = 0; i < set.size(); ++i) {
      const double cost = traversability_cost(set.paths[i], scaled) +
                          beta * c * goal_cost(set.paths[i], goal);
      if (cost < best_c) {
        best_c = cost;
        scaled_arg = i;
      }
    }
  }
  CHECK(base_arg == scaled_arg);
  CHECK(top_k_indices(set, map, 8) == top_k_indices(set, scaled, 8));
}
