#include "percomp/cli/ppm.hpp"

#include <fstream>
#include <stdexcept>

namespace percomp::cli {

std::string encode_ppm(std::span<const std::uint8_t> grid, int width, int height) {
  if (width <= 0 || height <= 0 ||
      grid.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("encode_ppm: grid is not " + std::to_string(width) + "x" +
                                std::to_string(height));
  }
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * grid.size());
  char* px = out.data() + header;
  for (std::uint8_t c : grid) {
    if (c >= kPalette.size()) {
      throw std::invalid_argument("encode_ppm: palette index " + std::to_string(c) + " out of range");
    }
    for (std::uint8_t channel : kPalette[c]) *px++ = static_cast<char>(channel);
  }
  return out;
}

void render_ppm(std::span<const std::uint8_t> grid, int width, int height,
                const std::filesystem::path& path) {
  const std::string bytes = encode_ppm(grid, width, height);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace percomp::cli
