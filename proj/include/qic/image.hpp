#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qic {

/// Round to nearest integer, ties to even, clamped to [0, 255].
inline std::uint8_t round_pixel(double value) {
    double r = std::nearbyint(value);  // FE_TONEAREST: half-to-even
    if (r < 0.0) r = 0.0;
    if (r > 255.0) r = 255.0;
    return static_cast<std::uint8_t>(r);
}

/// 2^n x 2^n grayscale image, row-major, pixel values in [0, 255].
struct GrayImage {
    int n = 1;
    std::vector<std::uint8_t> pixels;

    GrayImage() : pixels(4, 0) {}
    GrayImage(int n_, std::vector<std::uint8_t> px) : n(n_), pixels(std::move(px)) {
        if (n < 1) throw std::invalid_argument("GrayImage: n must be >= 1");
        if (pixels.size() != num_pixels())
            throw std::invalid_argument("GrayImage: pixel count must be 4^n");
    }

    std::size_t side() const { return std::size_t{1} << n; }
    std::size_t num_pixels() const { return std::size_t{1} << (2 * n); }
    std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * side() + col]; }
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// 2^n x 2^n RGB image, row-major, channel values in [0, 255].
struct ColorImage {
    int n = 1;
    std::vector<Rgb> pixels;

    ColorImage() : pixels(4) {}
    ColorImage(int n_, std::vector<Rgb> px) : n(n_), pixels(std::move(px)) {
        if (n < 1) throw std::invalid_argument("ColorImage: n must be >= 1");
        if (pixels.size() != num_pixels())
            throw std::invalid_argument("ColorImage: pixel count must be 4^n");
    }

    std::size_t side() const { return std::size_t{1} << n; }
    std::size_t num_pixels() const { return std::size_t{1} << (2 * n); }
};

}  // namespace qic
