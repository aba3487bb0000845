#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qic/dataset.hpp"
#include "qic/idx.hpp"
#include "qic/resize.hpp"
#include "qic/rng.hpp"

namespace qic {

inline constexpr std::array<const char*, 15> corruption_names = {
    "shot_noise", "impulse_noise", "glass_blur", "motion_blur", "shear",
    "scale",      "rotate",        "brightness", "translate",   "stripe",
    "fog",        "spatter",       "dotted_line", "zigzag",     "canny_edges"};

inline bool is_corruption_name(const std::string& name) {
    return std::find(corruption_names.begin(), corruption_names.end(), name) !=
           corruption_names.end();
}

namespace detail {

inline std::vector<int> check_digits(std::vector<int> digits) {
    if (digits.size() != 2 && digits.size() != 3)
        throw std::invalid_argument("digit list must have 2 or 3 entries");
    std::sort(digits.begin(), digits.end());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] > 9)
            throw std::invalid_argument("digits must be in [0, 9]");
        if (i > 0 && digits[i] == digits[i - 1])
            throw std::invalid_argument("digit list must not repeat");
    }
    return digits;
}

/// Shared tail of both loaders: filter to the requested digits, shuffle the
/// filtered pool, take `count` entries after `skip`, downsize, relabel.
/// Ascending digit order maps to ascending label (-1/+1 or 0/1/2).
inline LabeledImageSet sample_digit_pool(const RawImages& images,
                                         const std::vector<std::uint8_t>& raw_labels,
                                         const std::vector<int>& digits, int n,
                                         std::size_t count, std::uint64_t seed,
                                         std::size_t skip) {
    if (n < 1) throw std::invalid_argument("mnist: n must be >= 1");
    if (count == 0) throw std::invalid_argument("mnist: count must be positive");
    if (images.count != raw_labels.size())
        throw std::runtime_error("mnist: image/label count mismatch");
    if (images.rows != images.cols)
        throw std::runtime_error("mnist: images must be square");

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < raw_labels.size(); ++i)
        if (std::find(digits.begin(), digits.end(), int{raw_labels[i]}) != digits.end())
            pool.push_back(i);
    for (int d : digits)
        if (std::none_of(pool.begin(), pool.end(),
                         [&](std::size_t i) { return raw_labels[i] == d; }))
            throw std::runtime_error("mnist: no samples of digit " + std::to_string(d));
    if (skip + count > pool.size())
        throw std::runtime_error("mnist: requested " + std::to_string(skip + count) +
                                 " samples but only " + std::to_string(pool.size()) +
                                 " match the digit filter");

    Rng rng(seed);
    shuffle_indices(pool, rng);

    const bool binary = digits.size() == 2;
    LabeledImageSet set;
    set.label_kind = binary ? LabelKind::binary : LabelKind::three_class;
    set.gray.reserve(count);
    set.labels.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = pool[skip + k];
        set.gray.push_back(resize_to_gray(images.image(i), images.rows, n));
        const auto pos = std::find(digits.begin(), digits.end(), int{raw_labels[i]}) -
                         digits.begin();
        set.labels.push_back(binary ? (pos == 0 ? -1 : +1) : static_cast<int>(pos));
    }
    return set;
}

}  // namespace detail

/// Clean MNIST from IDX files under <data_root>/mnist/.
inline LabeledImageSet load_mnist(const std::filesystem::path& data_root,
                                  std::vector<int> digits, int n, std::size_t count,
                                  std::uint64_t seed, std::size_t skip = 0) {
    digits = detail::check_digits(std::move(digits));
    const auto dir = data_root / "mnist";
    const auto images = read_idx_images(dir / "train-images-idx3-ubyte");
    const auto labels = read_idx_labels(dir / "train-labels-idx1-ubyte");
    auto set = detail::sample_digit_pool(images, labels, digits, n, count, seed, skip);
    set.meta = DatasetMeta{DatasetKind::mnist, n, seed, -1, {}, digits};
    return set;
}

/// Corrupted MNIST from QTD files under <data_root>/mnist_c/<corruption>/.
inline LabeledImageSet load_corrupted_mnist(const std::filesystem::path& data_root,
                                            const std::string& corruption,
                                            std::vector<int> digits, int n, std::size_t count,
                                            std::uint64_t seed, std::size_t skip = 0) {
    if (!is_corruption_name(corruption)) {
        std::string msg = "unknown corruption '" + corruption + "', expected one of:";
        for (const char* name : corruption_names) msg += std::string(" ") + name;
        throw std::invalid_argument(msg);
    }
    digits = detail::check_digits(std::move(digits));
    const auto dir = data_root / "mnist_c" / corruption;
    const auto images = read_qtd_images(dir / "train_images.qtd");
    const auto labels = read_qtd_labels(dir / "train_labels.qtd");
    auto set = detail::sample_digit_pool(images, labels, digits, n, count, seed, skip);
    set.meta = DatasetMeta{DatasetKind::mnist_corrupted, n, seed, -1, corruption, digits};
    return set;
}

}  // namespace qic
