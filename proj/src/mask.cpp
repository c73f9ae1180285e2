#include "navfuse/mask.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "navfuse/errors.hpp"

namespace navfuse {

std::size_t Mask::count_set() const {
  std::size_t n = 0;
  for (auto b : data) n += b != 0;
  return n;
}

namespace {

// Reads one whitespace-separated PGM header token, skipping '#' comments.
std::string next_pgm_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return tok;
  }
  throw ParseError("pgm: truncated header");
}

}  // namespace

Mask load_mask_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("pgm: cannot open " + path);
  if (next_pgm_token(in) != "P5") throw ParseError("pgm: expected P5 magic in " + path);
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_pgm_token(in));
    height = std::stoi(next_pgm_token(in));
    maxval = std::stoi(next_pgm_token(in));
  } catch (const std::exception&) {
    throw ParseError("pgm: bad header in " + path);
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw ParseError("pgm: unsupported dimensions/maxval in " + path);
  in.get();  // single whitespace after maxval
  std::vector<char> raw(static_cast<std::size_t>(width) * height);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw ParseError("pgm: truncated pixel data in " + path);

  Mask mask(width, height);
  for (std::size_t i = 0; i < raw.size(); ++i)
    mask.data[i] = static_cast<unsigned char>(raw[i]) >= 128 ? 1 : 0;
  return mask;
}

void save_mask_pgm(const Mask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("pgm: cannot write " + path);
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<char> raw(mask.data.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = mask.data[i] ? static_cast<char>(255) : 0;
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

}  // namespace navfuse
