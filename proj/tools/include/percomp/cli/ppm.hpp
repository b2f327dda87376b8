#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace percomp::cli {

/// RGB per palette index; indices follow percomp::SiteState.
inline constexpr std::array<std::array<std::uint8_t, 3>, 7> kPalette{{
    {255, 255, 255},  // empty
    {255, 220, 0},    // yellow active
    {0, 120, 255},    // blue active
    {0, 200, 0},      // green active
    {200, 170, 0},    // yellow passive
    {0, 80, 180},     // blue passive
    {0, 140, 0},      // green passive
}};

/// Binary P6 image of a row-major palette grid, one pixel per cell. Throws
/// std::invalid_argument if the grid is not width x height or holds an index
/// outside the palette.
std::string encode_ppm(std::span<const std::uint8_t> grid, int width, int height);

/// Writes encode_ppm(...) to `path`; throws std::runtime_error on I/O failure.
void render_ppm(std::span<const std::uint8_t> grid, int width, int height,
                const std::filesystem::path& path);

}  // namespace percomp::cli
