#include "contagion/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace contagion {

Rgb compartment_color(Compartment c) {
    switch (c) {
        case Compartment::S: return kColorSusceptible;
        case Compartment::I: return kColorInfected;
        case Compartment::R: return kColorRecovered;
        case Compartment::D: return kColorDead;
    }
    return kColorBackground;
}

Rgb Image::at(int x, int y) const {
    const auto k = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
    return {rgb[k], rgb[k + 1], rgb[k + 2]};
}

void Image::set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) {
        return;
    }
    const auto k = 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
    rgb[k] = c[0];
    rgb[k + 1] = c[1];
    rgb[k + 2] = c[2];
}

std::array<int, 2> pixel_of(Position p, double grid_size, int ppu) {
    const int size = static_cast<int>(std::lround(grid_size * ppu));
    const int px = std::min(size - 1, static_cast<int>(std::floor(p.x * ppu)));
    const int py = std::min(size - 1, static_cast<int>(std::floor(p.y * ppu)));
    return {px, size - 1 - py};
}

namespace {

void disc(Image& img, std::array<int, 2> center, double radius_px, Rgb color) {
    const int r = static_cast<int>(std::ceil(radius_px));
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy <= radius_px * radius_px) {
                // Discs wrap across the periodic edges.
                const int x = ((center[0] + dx) % img.width + img.width) % img.width;
                const int y = ((center[1] + dy) % img.height + img.height) % img.height;
                img.set(x, y, color);
            }
        }
    }
}

}  // namespace

Image render_frame(const WorldState& world, int ppu) {
    Image img;
    img.width = img.height = std::max(1, static_cast<int>(std::lround(world.grid_size * ppu)));
    img.rgb.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            img.set(x, y, kColorBackground);
        }
    }
    const double human_r = 0.45 * ppu;
    for (const auto& h : world.humans) {
        disc(img, pixel_of(h.position, world.grid_size, ppu), human_r, compartment_color(h.compartment));
    }
    const auto agent_px = pixel_of(world.agent.position, world.grid_size, ppu);
    disc(img, agent_px, 0.7 * ppu, kColorAgentBorder);
    disc(img, agent_px, 0.55 * ppu, kColorAgent);
    return img;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write frame '" + path.string() + "'");
    }
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
    if (!out) {
        throw std::runtime_error("short write to frame '" + path.string() + "'");
    }
}

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int maxval = 0;
    Image img;
    if (!(in >> magic >> img.width >> img.height >> maxval) || magic != "P6" || maxval != 255) {
        throw std::runtime_error("not a P6 frame: '" + path.string() + "'");
    }
    in.get();
    img.rgb.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3);
    in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (!in) {
        throw std::runtime_error("truncated frame '" + path.string() + "'");
    }
    return img;
}

}  // namespace contagion
