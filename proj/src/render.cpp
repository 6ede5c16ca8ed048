#include "qta/render.hpp"

#include <cmath>
#include <fstream>

namespace qta {

namespace {

Rgb hsv_to_rgb(double hue_degrees, double value) {
    // Saturation is always 1 here, so chroma == value and m == 0.
    const double c = value;
    const double h6 = hue_degrees / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(h6, 2.0) - 1.0));

    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h6) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    case 5: r = c; b = x; break;
    }

    auto channel = [](double v) { return static_cast<std::uint8_t>(std::lround(255.0 * v)); };
    return {channel(r), channel(g), channel(b)};
}

} // namespace

Rgb amplitude_color(Complex z) {
    const double magnitude = std::abs(z);
    if (magnitude == 0.0) return {0, 0, 0};

    double angle = std::arg(z);
    if (angle < 0.0) angle += 2.0 * M_PI;
    double hue = angle / (2.0 * M_PI) * 360.0;
    if (hue >= 360.0) hue = 0.0;
    return hsv_to_rgb(hue, std::min(magnitude, 1.0));
}

void write_ppm(const std::string& path, int width, int height, const std::vector<Rgb>& pixels) {
    if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(width) * height)
        throw InputError("write_ppm: pixel buffer does not match dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("write_ppm: cannot open '" + path + "' for writing");
    out << "P6\n" << width << " " << height << "\n255\n";
    for (const Rgb& p : pixels) {
        const char raw[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        out.write(raw, 3);
    }
    if (!out) throw InputError("write_ppm: write to '" + path + "' failed");
}

void render_amplitude_grid(const Trajectory& traj, const std::string& path) {
    if (traj.states.empty()) throw InputError("render_amplitude_grid: empty trajectory");

    const int width = static_cast<int>(traj.states.front().dim());
    const int height = static_cast<int>(traj.states.size());
    std::vector<Rgb> pixels;
    pixels.reserve(static_cast<std::size_t>(width) * height);
    for (const StateVector& state : traj.states)
        for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i)
            pixels.push_back(amplitude_color(state.amplitudes()[i]));
    write_ppm(path, width, height, pixels);
}

void render_color_legend(const std::string& path, int square_size) {
    if (square_size < 1) throw InputError("render_color_legend: square size must be >= 1");

    const Complex anchors[5] = {{0, 1}, {0, -1}, {0, 0}, {1, 0}, {-1, 0}};
    const int width = 5 * square_size;
    std::vector<Rgb> pixels(static_cast<std::size_t>(width) * square_size);
    for (int y = 0; y < square_size; ++y)
        for (int x = 0; x < width; ++x)
            pixels[static_cast<std::size_t>(y) * width + x] = amplitude_color(anchors[x / square_size]);
    write_ppm(path, width, square_size, pixels);
}

} // namespace qta
