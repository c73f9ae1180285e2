#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "navfuse/geometry.hpp"

namespace navfuse {

// Geometry of a bird's-eye-view grid. origin is the metric position of the
// (0, 0) cell corner; cell (ix, iz) spans
// [origin_x + ix*res, origin_x + (ix+1)*res) x [origin_z + iz*res, ...).
struct GridSpec {
  double resolution{0.05};
  int width{160};
  int height{160};
  double origin_x{-4.0};
  double origin_z{0.0};
  double unknown_cost{0.5};

  void validate() const;  // throws std::invalid_argument
  double extent_x() const { return width * resolution; }
  double extent_z() const { return height * resolution; }
};

struct CellIndex {
  int ix{0};
  int iz{0};
  bool operator==(const CellIndex&) const = default;
};

// 2D traversability cost grid. 0 = traversable, 1 = untraversable,
// unknown cells carry spec.unknown_cost. Queries outside the extent cost 1.
class CostMap {
 public:
  CostMap() { cells_.assign(static_cast<std::size_t>(spec_.width) * spec_.height, spec_.unknown_cost); }
  explicit CostMap(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }

  double at(int ix, int iz) const { return cells_[index(ix, iz)]; }
  void set(int ix, int iz, double cost);

  std::optional<CellIndex> cell_of(const Vec2& point) const;
  double point_cost(const Vec2& point) const;
  void set_cells(std::span<const CellIndex> indices, double cost);

  Vec2 cell_center(const CellIndex& c) const {
    return {spec_.origin_x + (c.ix + 0.5) * spec_.resolution,
            spec_.origin_z + (c.iz + 0.5) * spec_.resolution};
  }

  const std::vector<double>& cells() const { return cells_; }
  std::vector<double>& cells() { return cells_; }

 private:
  std::size_t index(int ix, int iz) const {
    return static_cast<std::size_t>(iz) * spec_.width + ix;
  }

  GridSpec spec_{};
  std::vector<double> cells_ = {};
};

// Text format: header `width height resolution origin_x origin_z
// unknown_cost`, then height rows of width space-separated costs. Doubles
// are written with enough digits that save -> load round-trips bit-exactly.
void save_costmap_text(const CostMap& map, const std::string& path);
CostMap load_costmap_text(const std::string& path);

// P5-style binary variant: PGM with costs quantized to round(cost * 255)
// and grid metadata in a comment line.
void save_costmap_p5(const CostMap& map, const std::string& path);
CostMap load_costmap_p5(const std::string& path);

}  // namespace navfuse
