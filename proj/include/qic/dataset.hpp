#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qic/image.hpp"
#include "qic/rng.hpp"

namespace qic {

enum class DatasetKind { bas, color22, mnist, mnist_corrupted };

enum class LabelKind { binary, three_class };

inline const char* dataset_kind_name(DatasetKind k) {
    switch (k) {
        case DatasetKind::bas: return "bas";
        case DatasetKind::color22: return "color22";
        case DatasetKind::mnist: return "mnist";
        case DatasetKind::mnist_corrupted: return "mnist_corrupted";
    }
    throw std::logic_error("dataset_kind_name: bad kind");
}

struct DatasetMeta {
    DatasetKind kind = DatasetKind::bas;
    int n = 1;
    std::uint64_t seed = 0;
    int shade = -1;                ///< color22 only
    std::string corruption;        ///< mnist_corrupted only
    std::vector<int> digits;       ///< mnist kinds only
};

/// A labeled batch of images. Exactly one of `gray` / `color` is populated.
/// Binary labels are -1 / +1; three-class labels are 0 / 1 / 2.
struct LabeledImageSet {
    std::vector<GrayImage> gray;
    std::vector<ColorImage> color;
    std::vector<int> labels;
    LabelKind label_kind = LabelKind::binary;
    DatasetMeta meta;

    bool is_color() const { return !color.empty(); }
    std::size_t size() const { return labels.size(); }
};

/// Bars-and-stripes: each image is either vertical bars (per-column coin
/// flips, label +1) or horizontal stripes (per-row coin flips, label -1).
/// Constant images are redrawn so every sample is unambiguous.
inline LabeledImageSet gen_bas(int n, std::size_t count, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_bas: n must be >= 1");
    if (count < 2) throw std::invalid_argument("gen_bas: count must be >= 2");
    const std::size_t side = std::size_t{1} << n;

    Rng rng(seed);
    LabeledImageSet set;
    set.label_kind = LabelKind::binary;
    set.meta = DatasetMeta{DatasetKind::bas, n, seed, -1, {}, {}};
    set.gray.reserve(count);
    set.labels.reserve(count);

    std::vector<bool> line(side);
    for (std::size_t s = 0; s < count; ++s) {
        const bool bars = rand_coin(rng);
        bool mixed = false;
        while (!mixed) {
            for (std::size_t k = 0; k < side; ++k) {
                line[k] = rand_coin(rng);
                if (line[k] != line[0]) mixed = true;
            }
        }
        GrayImage img{n, std::vector<std::uint8_t>(side * side)};
        for (std::size_t r = 0; r < side; ++r)
            for (std::size_t c = 0; c < side; ++c)
                img.pixels[r * side + c] = line[bars ? c : r] ? 255 : 0;
        set.gray.push_back(std::move(img));
        set.labels.push_back(bars ? +1 : -1);
    }
    return set;
}

/// 2x2 RGB toy set. Every channel of every pixel is uniform in [0, 255];
/// positive samples (+1) then darken the last pixel to a shade of its drawn
/// color (channels scaled by shade/255), negatives (-1) keep it random.
/// Shade 0 makes the marker pixel black; shade 255 leaves it untouched, so
/// the classes coincide and no classifier can beat chance.
inline LabeledImageSet gen_color22(int shade, std::size_t count, std::uint64_t seed) {
    if (shade < 0 || shade > 255)
        throw std::invalid_argument("gen_color22: shade must be in [0, 255]");
    if (count < 2) throw std::invalid_argument("gen_color22: count must be >= 2");

    Rng rng(seed);
    LabeledImageSet set;
    set.label_kind = LabelKind::binary;
    set.meta = DatasetMeta{DatasetKind::color22, 1, seed, shade, {}, {}};
    set.color.reserve(count);
    set.labels.reserve(count);

    const double scale = shade / 255.0;
    for (std::size_t s = 0; s < count; ++s) {
        const bool positive = rand_coin(rng);
        ColorImage img{1, std::vector<Rgb>(4)};
        for (auto& px : img.pixels) {
            px.r = rand_byte(rng);
            px.g = rand_byte(rng);
            px.b = rand_byte(rng);
        }
        if (positive) {
            Rgb& px = img.pixels[3];
            px = Rgb{round_pixel(px.r * scale), round_pixel(px.g * scale),
                     round_pixel(px.b * scale)};
        }
        set.color.push_back(std::move(img));
        set.labels.push_back(positive ? +1 : -1);
    }
    return set;
}

}  // namespace qic
