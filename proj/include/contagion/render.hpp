#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "contagion/epidemic.hpp"

namespace contagion {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kColorBackground{255, 255, 255};
inline constexpr Rgb kColorSusceptible{31, 119, 180};   // blue
inline constexpr Rgb kColorInfected{214, 39, 40};       // red
inline constexpr Rgb kColorRecovered{44, 160, 44};      // green
inline constexpr Rgb kColorDead{127, 127, 127};         // gray
inline constexpr Rgb kColorAgent{255, 127, 14};         // orange
inline constexpr Rgb kColorAgentBorder{40, 40, 40};

Rgb compartment_color(Compartment c);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
};

/// Top-down raster of the grid: one disc per human colored by compartment, the agent
/// drawn last. Row 0 is the top of the grid (largest y).
Image render_frame(const WorldState& world, int pixels_per_unit = 8);

/// Pixel containing grid position `p`.
std::array<int, 2> pixel_of(Position p, double grid_size, int pixels_per_unit);

/// Binary PPM (P6). Throws std::runtime_error if the file cannot be written.
void write_ppm(const std::filesystem::path& path, const Image& image);
Image read_ppm(const std::filesystem::path& path);

}  // namespace contagion
