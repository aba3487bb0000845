#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qic {

/// Raw uint8 image stack as stored on disk, row-major per image.
struct RawImages {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> data;

    const std::uint8_t* image(std::size_t i) const { return data.data() + i * rows * cols; }
};

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t off,
                               const std::filesystem::path& path) {
    if (off + 4 > b.size()) throw std::runtime_error("truncated file: " + path.string());
    return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
           (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

}  // namespace detail

/// IDX image file (magic 0x00000803): big-endian header, uint8 pixels.
inline RawImages read_idx_images(const std::filesystem::path& path) {
    const auto bytes = detail::read_file_bytes(path);
    if (detail::read_be32(bytes, 0, path) != 0x00000803u)
        throw std::runtime_error("bad IDX image magic in " + path.string());
    RawImages out;
    out.count = detail::read_be32(bytes, 4, path);
    out.rows = detail::read_be32(bytes, 8, path);
    out.cols = detail::read_be32(bytes, 12, path);
    const std::size_t need = out.count * out.rows * out.cols;
    if (bytes.size() != 16 + need)
        throw std::runtime_error("IDX image payload size mismatch in " + path.string());
    out.data.assign(bytes.begin() + 16, bytes.end());
    return out;
}

/// IDX label file (magic 0x00000801): big-endian count, uint8 labels.
inline std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
    const auto bytes = detail::read_file_bytes(path);
    if (detail::read_be32(bytes, 0, path) != 0x00000801u)
        throw std::runtime_error("bad IDX label magic in " + path.string());
    const std::size_t count = detail::read_be32(bytes, 4, path);
    if (bytes.size() != 8 + count)
        throw std::runtime_error("IDX label payload size mismatch in " + path.string());
    return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.end());
}

/// QTD tensor dump: ASCII magic "QTD1", big-endian uint32 rank, then one
/// big-endian uint32 per dimension, then the uint8 payload in C order.
inline std::vector<std::size_t> read_qtd_dims(const std::vector<std::uint8_t>& bytes,
                                              const std::filesystem::path& path) {
    if (bytes.size() < 4 || bytes[0] != 'Q' || bytes[1] != 'T' || bytes[2] != 'D' ||
        bytes[3] != '1')
        throw std::runtime_error("bad QTD magic in " + path.string());
    const std::size_t rank = detail::read_be32(bytes, 4, path);
    if (rank == 0 || rank > 8) throw std::runtime_error("bad QTD rank in " + path.string());
    std::vector<std::size_t> dims(rank);
    std::size_t need = 1;
    for (std::size_t d = 0; d < rank; ++d) {
        dims[d] = detail::read_be32(bytes, 8 + 4 * d, path);
        need *= dims[d];
    }
    if (bytes.size() != 8 + 4 * rank + need)
        throw std::runtime_error("QTD payload size mismatch in " + path.string());
    return dims;
}

/// Rank-3 QTD file as an image stack.
inline RawImages read_qtd_images(const std::filesystem::path& path) {
    const auto bytes = detail::read_file_bytes(path);
    const auto dims = read_qtd_dims(bytes, path);
    if (dims.size() != 3)
        throw std::runtime_error("expected rank-3 QTD image file: " + path.string());
    RawImages out;
    out.count = dims[0];
    out.rows = dims[1];
    out.cols = dims[2];
    out.data.assign(bytes.begin() + 20, bytes.end());
    return out;
}

/// Rank-1 QTD file as a label vector.
inline std::vector<std::uint8_t> read_qtd_labels(const std::filesystem::path& path) {
    const auto bytes = detail::read_file_bytes(path);
    const auto dims = read_qtd_dims(bytes, path);
    if (dims.size() != 1)
        throw std::runtime_error("expected rank-1 QTD label file: " + path.string());
    return std::vector<std::uint8_t>(bytes.begin() + 12, bytes.end());
}

namespace detail {

inline void write_be32(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(bytes, 4);
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    return out;
}

}  // namespace detail

inline void write_idx_images(const std::filesystem::path& path, const RawImages& images) {
    if (images.data.size() != images.count * images.rows * images.cols)
        throw std::invalid_argument("write_idx_images: payload size mismatch");
    auto out = detail::open_for_write(path);
    detail::write_be32(out, 0x00000803u);
    detail::write_be32(out, static_cast<std::uint32_t>(images.count));
    detail::write_be32(out, static_cast<std::uint32_t>(images.rows));
    detail::write_be32(out, static_cast<std::uint32_t>(images.cols));
    out.write(reinterpret_cast<const char*>(images.data.data()),
              static_cast<std::streamsize>(images.data.size()));
}

inline void write_idx_labels(const std::filesystem::path& path,
                             const std::vector<std::uint8_t>& labels) {
    auto out = detail::open_for_write(path);
    detail::write_be32(out, 0x00000801u);
    detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size()));
}

inline void write_qtd(const std::filesystem::path& path, const std::vector<std::size_t>& dims,
                      const std::vector<std::uint8_t>& payload) {
    if (dims.empty() || dims.size() > 8) throw std::invalid_argument("write_qtd: bad rank");
    std::size_t need = 1;
    for (std::size_t d : dims) need *= d;
    if (payload.size() != need) throw std::invalid_argument("write_qtd: payload size mismatch");
    auto out = detail::open_for_write(path);
    out.write("QTD1", 4);
    detail::write_be32(out, static_cast<std::uint32_t>(dims.size()));
    for (std::size_t d : dims) detail::write_be32(out, static_cast<std::uint32_t>(d));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
}

}  // namespace qic
