#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qic/image.hpp"

namespace qic {

/// Bilinear downscale/upscale of a square uint8 image. Sample positions use
/// the half-pixel (align-corners-false) convention, source coordinates are
/// clamped at the edges, and results round half to even.
inline std::vector<std::uint8_t> bilinear_resize(const std::vector<std::uint8_t>& src,
                                                 std::size_t src_side, std::size_t dst_side) {
    if (src_side == 0 || dst_side == 0)
        throw std::invalid_argument("bilinear_resize: sides must be positive");
    if (src.size() != src_side * src_side)
        throw std::invalid_argument("bilinear_resize: source size mismatch");

    const double scale = static_cast<double>(src_side) / static_cast<double>(dst_side);
    std::vector<std::uint8_t> dst(dst_side * dst_side);
    for (std::size_t dr = 0; dr < dst_side; ++dr) {
        const double sy = std::max(0.0, (dr + 0.5) * scale - 0.5);
        const std::size_t y0 = std::min<std::size_t>(static_cast<std::size_t>(sy), src_side - 1);
        const std::size_t y1 = std::min(y0 + 1, src_side - 1);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t dc = 0; dc < dst_side; ++dc) {
            const double sx = std::max(0.0, (dc + 0.5) * scale - 0.5);
            const std::size_t x0 =
                std::min<std::size_t>(static_cast<std::size_t>(sx), src_side - 1);
            const std::size_t x1 = std::min(x0 + 1, src_side - 1);
            const double fx = sx - static_cast<double>(x0);
            const double top = (1.0 - fx) * src[y0 * src_side + x0] + fx * src[y0 * src_side + x1];
            const double bot = (1.0 - fx) * src[y1 * src_side + x0] + fx * src[y1 * src_side + x1];
            dst[dr * dst_side + dc] = round_pixel((1.0 - fy) * top + fy * bot);
        }
    }
    return dst;
}

/// Area-weighted downscale: each output pixel is the exact box integral of
/// the source over its footprint (src_side/dst_side wide), so the whole
/// image contributes. This is the antialiased convention image libraries
/// apply when downscaling. Results round half to even.
inline std::vector<std::uint8_t> area_resize(const std::vector<std::uint8_t>& src,
                                             std::size_t src_side, std::size_t dst_side) {
    if (src_side == 0 || dst_side == 0)
        throw std::invalid_argument("area_resize: sides must be positive");
    if (src.size() != src_side * src_side)
        throw std::invalid_argument("area_resize: source size mismatch");
    if (dst_side > src_side) return bilinear_resize(src, src_side, dst_side);

    const double f = static_cast<double>(src_side) / static_cast<double>(dst_side);
    std::vector<std::uint8_t> dst(dst_side * dst_side);
    for (std::size_t dr = 0; dr < dst_side; ++dr) {
        const double y0 = dr * f, y1 = (dr + 1) * f;
        for (std::size_t dc = 0; dc < dst_side; ++dc) {
            const double x0 = dc * f, x1 = (dc + 1) * f;
            double acc = 0.0;
            for (auto y = static_cast<std::size_t>(y0); y < static_cast<std::size_t>(std::ceil(y1));
                 ++y) {
                const double wy = std::min(y + 1.0, y1) - std::max(static_cast<double>(y), y0);
                for (auto x = static_cast<std::size_t>(x0);
                     x < static_cast<std::size_t>(std::ceil(x1)); ++x) {
                    const double wx = std::min(x + 1.0, x1) - std::max(static_cast<double>(x), x0);
                    acc += wy * wx * src[y * src_side + x];
                }
            }
            dst[dr * dst_side + dc] = round_pixel(acc / (f * f));
        }
    }
    return dst;
}

inline GrayImage resize_to_gray(const std::uint8_t* src, std::size_t src_side, int n) {
    const std::size_t dst_side = std::size_t{1} << n;
    std::vector<std::uint8_t> copy(src, src + src_side * src_side);
    return GrayImage{n, area_resize(copy, src_side, dst_side)};
}

}  // namespace qic
