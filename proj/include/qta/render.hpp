#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qta/qca.hpp"

namespace qta {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// Domain coloring, pinned bit-exactly: hue = arg(z) with +1 at 0 degrees
// (red), i at 90 (chartreuse), -1 at 180 (cyan), -i at 270 (violet);
// saturation 1; value = min(|z|, 1); channels = lround(255 * component).
Rgb amplitude_color(Complex z);

void write_ppm(const std::string& path, int width, int height, const std::vector<Rgb>& pixels);

// One pixel per (step, basis state); row t is step t, columns follow the
// big-endian basis order. Binary PPM (P6), 8-bit channels.
void render_amplitude_grid(const Trajectory& traj, const std::string& path);

// The five anchor colors as a horizontal strip of squares, in the order
// i, -i, 0, 1, -1.
void render_color_legend(const std::string& path, int square_size = 16);

} // namespace qta
