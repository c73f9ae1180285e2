#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace navfuse {

// Binary traversability mask in image space. data holds 0/1 per pixel,
// row-major (v * width + u). On disk: 8-bit binary PGM (P5), 255 =
// traversable, 0 = not.
struct Mask {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  bool at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u] != 0; }
  void set(int u, int v, bool traversable) {
    data[static_cast<std::size_t>(v) * width + u] = traversable ? 1 : 0;
  }
  std::size_t count_set() const;
};

Mask load_mask_pgm(const std::string& path);
void save_mask_pgm(const Mask& mask, const std::string& path);

}  // namespace navfuse
