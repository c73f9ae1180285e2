#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "navfuse/costmap.hpp"
#include "navfuse/errors.hpp"
#include "navfuse/rng.hpp"

using namespace navfuse;

namespace {

GridSpec small_grid() {
  GridSpec s;
  s.resolution = 0.5;
  s.width = 4;
  s.height = 3;
  s.origin_x = -1.0;
  s.origin_z = 0.0;
  s.unknown_cost = 0.5;
  return s;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("grid spec validation") {
  GridSpec s = small_grid();
  CHECK_NOTHROW(s.validate());
  s.resolution = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_grid();
  s.width = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = small_grid();
  s.unknown_cost = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("cell_of maps points to cells and rejects out-of-extent points") {
  const CostMap map(small_grid());
  auto c = map.cell_of({-1.0, 0.0});  // origin corner
  REQUIRE(c);
  CHECK(*c == CellIndex{0, 0});
  c = map.cell_of({-0.75, 0.25});  // center of cell (0, 0)
  REQUIRE(c);
  CHECK(*c == CellIndex{0, 0});
  CHECK_FALSE(map.cell_of({1.5, 0.0}));   // one resolution beyond the far x edge
  CHECK_FALSE(map.cell_of({0.0, -0.1}));  // behind the origin
}

TEST_CASE("point_cost: inside, unknown, and out-of-map") {
  CostMap map(small_grid());
  map.set(1, 1, 0.0);
  CHECK(map.point_cost({-0.25, 0.75}) == 0.0);   // traversable cell
  CHECK(map.point_cost({-0.75, 0.25}) == 0.5);   // unknown cell
  CHECK(map.point_cost({10.0, 10.0}) == 1.0);    // out of map is lethal
  CHECK(map.point_cost({-1.2, 0.2}) == 1.0);
}

TEST_CASE("set_cells updates exactly the listed cells") {
  CostMap map(small_grid());
  const CostMap before = map;
  map.set_cells({}, 1.0);
  CHECK(map.cells() == before.cells());

  std::vector<CellIndex> all;
  for (int iz = 0; iz < 3; ++iz)
    for (int ix = 0; ix < 4; ++ix) all.push_back({ix, iz});
  map.set_cells(all, 0.0);
  for (double c : map.cells()) CHECK(c == 0.0);

  const std::vector<CellIndex> one = {{2, 1}};
  map.set_cells(one, 1.0);
  for (int iz = 0; iz < 3; ++iz)
    for (int ix = 0; ix < 4; ++ix)
      CHECK(map.at(ix, iz) == ((ix == 2 && iz == 1) ? 1.0 : 0.0));

  const std::vector<CellIndex> bad = {{4, 0}};
  CHECK_THROWS_AS(map.set_cells(bad, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(map.set_cells(one, 1.5), std::invalid_argument);
}

TEST_CASE("set then read back at the cell center is exact") {
  CostMap map(small_grid());
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const CellIndex c{static_cast<int>(rng.uniform_index(4)),
                      static_cast<int>(rng.uniform_index(3))};
    const double cost = rng.uniform();
    map.set_cells(std::vector<CellIndex>{c}, cost);
    CHECK(map.point_cost(map.cell_center(c)) == cost);
  }
}

TEST_CASE("text serialization round-trips bit-exactly") {
  CostMap map(small_grid());
  Rng rng(11);
  for (int iz = 0; iz < 3; ++iz)
    for (int ix = 0; ix < 4; ++ix) map.set(ix, iz, rng.uniform());

  const std::string path = temp_path("costmap_roundtrip.txt");
  save_costmap_text(map, path);
  const CostMap loaded = load_costmap_text(path);
  CHECK(loaded.spec().resolution == map.spec().resolution);
  CHECK(loaded.spec().origin_x == map.spec().origin_x);
  CHECK(loaded.spec().unknown_cost == map.spec().unknown_cost);
  REQUIRE(loaded.cells().size() == map.cells().size());
  for (std::size_t i = 0; i < map.cells().size(); ++i)
    CHECK(loaded.cells()[i] == map.cells()[i]);  // bit-exact
}

TEST_CASE("p5 serialization quantizes to 1/255") {
  CostMap map(small_grid());
  map.set(0, 0, 0.0);
  map.set(1, 0, 1.0);
  map.set(2, 0, 0.5);
  const std::string path = temp_path("costmap_p5.pgm");
  save_costmap_p5(map, path);
  const CostMap loaded = load_costmap_p5(path);
  CHECK(loaded.spec().resolution == map.spec().resolution);
  CHECK(loaded.at(0, 0) == 0.0);
  CHECK(loaded.at(1, 0) == 1.0);
  CHECK(loaded.at(2, 0) == doctest::Approx(0.5).epsilon(1.0 / 255.0));
}

TEST_CASE("costmap load rejects malformed files") {
  const std::string path = temp_path("costmap_bad.txt");
  {
    std::ofstream out(path);
    out << "4 3 0.5 -1 0 0.5\n0 0 0\n";  // truncated
  }
  CHECK_THROWS_AS(load_costmap_text(path), ParseError);
  CHECK_THROWS_AS(load_costmap_text(temp_path("missing_map.txt")), ParseError);
}
