#include "navfuse/costmap.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "navfuse/errors.hpp"

namespace navfuse {

void GridSpec::validate() const {
  if (resolution <= 0.0) throw std::invalid_argument("grid: resolution must be > 0");
  if (width < 1 || height < 1) throw std::invalid_argument("grid: width/height must be >= 1");
  if (unknown_cost < 0.0 || unknown_cost > 1.0)
    throw std::invalid_argument("grid: unknown_cost must be in [0, 1]");
}

CostMap::CostMap(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  cells_.assign(static_cast<std::size_t>(spec_.width) * spec_.height, spec_.unknown_cost);
}

void CostMap::set(int ix, int iz, double cost) {
  if (ix < 0 || ix >= spec_.width || iz < 0 || iz >= spec_.height)
    throw std::invalid_argument("costmap: cell index out of bounds");
  if (cost < 0.0 || cost > 1.0)
    throw std::invalid_argument("costmap: cost must be in [0, 1]");
  cells_[index(ix, iz)] = cost;
}

std::optional<CellIndex> CostMap::cell_of(const Vec2& point) const {
  const int ix = static_cast<int>(std::floor((point.x - spec_.origin_x) / spec_.resolution));
  const int iz = static_cast<int>(std::floor((point.z - spec_.origin_z) / spec_.resolution));
  if (ix < 0 || ix >= spec_.width || iz < 0 || iz >= spec_.height) return std::nullopt;
  return CellIndex{ix, iz};
}

double CostMap::point_cost(const Vec2& point) const {
  const auto cell = cell_of(point);
  if (!cell) return 1.0;  // out of map is never free
  return cells_[index(cell->ix, cell->iz)];
}

void CostMap::set_cells(std::span<const CellIndex> indices, double cost) {
  if (cost < 0.0 || cost > 1.0)
    throw std::invalid_argument("costmap: cost must be in [0, 1]");
  for (const auto& c : indices) {
    if (c.ix < 0 || c.ix >= spec_.width || c.iz < 0 || c.iz >= spec_.height)
      throw std::invalid_argument("costmap: cell index out of bounds");
  }
  for (const auto& c : indices) cells_[index(c.ix, c.iz)] = cost;
}

void save_costmap_text(const CostMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("costmap: cannot write " + path);
  const auto& s = map.spec();
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g %.17g %.17g\n", s.width, s.height,
                s.resolution, s.origin_x, s.origin_z, s.unknown_cost);
  out << buf;
  for (int iz = 0; iz < s.height; ++iz) {
    for (int ix = 0; ix < s.width; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", map.at(ix, iz));
      out << buf << (ix + 1 == s.width ? '\n' : ' ');
    }
  }
}

CostMap load_costmap_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("costmap: cannot open " + path);
  GridSpec spec;
  if (!(in >> spec.width >> spec.height >> spec.resolution >> spec.origin_x >>
        spec.origin_z >> spec.unknown_cost))
    throw ParseError("costmap: bad header in " + path);
  CostMap map(spec);
  for (int iz = 0; iz < spec.height; ++iz) {
    for (int ix = 0; ix < spec.width; ++ix) {
      double c;
      if (!(in >> c)) throw ParseError("costmap: truncated cell data in " + path);
      if (c < 0.0 || c > 1.0) throw ParseError("costmap: cell cost out of [0, 1] in " + path);
      map.set(ix, iz, c);
    }
  }
  return map;
}

void save_costmap_p5(const CostMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("costmap: cannot write " + path);
  const auto& s = map.spec();
  char meta[128];
  std::snprintf(meta, sizeof(meta), "# %.17g %.17g %.17g %.17g\n", s.resolution,
                s.origin_x, s.origin_z, s.unknown_cost);
  out << "P5\n" << meta << s.width << " " << s.height << "\n255\n";
  std::vector<char> raw(static_cast<std::size_t>(s.width) * s.height);
  for (int iz = 0; iz < s.height; ++iz)
    for (int ix = 0; ix < s.width; ++ix)
      raw[static_cast<std::size_t>(iz) * s.width + ix] =
          static_cast<char>(std::lround(map.at(ix, iz) * 255.0));
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

CostMap load_costmap_p5(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("costmap: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw ParseError("costmap: expected P5 magic in " + path);
  GridSpec spec;
  std::string line;
  std::getline(in, line);
  // metadata comment: resolution origin_x origin_z unknown_cost
  if (in.peek() == '#') {
    in.get();
    in >> spec.resolution >> spec.origin_x >> spec.origin_z >> spec.unknown_cost;
    std::getline(in, line);
  }
  int maxval = 0;
  if (!(in >> spec.width >> spec.height >> maxval) || maxval != 255)
    throw ParseError("costmap: bad P5 header in " + path);
  in.get();
  CostMap map(spec);
  std::vector<char> raw(static_cast<std::size_t>(spec.width) * spec.height);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw ParseError("costmap: truncated P5 data in " + path);
  for (int iz = 0; iz < spec.height; ++iz)
    for (int ix = 0; ix < spec.width; ++ix)
      map.set(ix, iz,
              static_cast<unsigned char>(raw[static_cast<std::size_t>(iz) * spec.width + ix]) /
                  255.0);
  return map;
}

}  // namespace navfuse
