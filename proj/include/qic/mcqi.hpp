#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qic/circuit.hpp"
#include "qic/frqi.hpp"
#include "qic/image.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// Per-pixel, per-channel angles theta = arccos(pixel/255), each in [0, pi/2].
struct McqiAngles {
    int n = 1;
    std::vector<double> theta_r, theta_g, theta_b;
};

inline McqiAngles mcqi_angles(const ColorImage& img) {
    McqiAngles a;
    a.n = img.n;
    const std::size_t num_px = img.num_pixels();
    a.theta_r.reserve(num_px);
    a.theta_g.reserve(num_px);
    a.theta_b.reserve(num_px);
    for (const Rgb& p : img.pixels) {
        a.theta_r.push_back(std::acos(p.r / 255.0));
        a.theta_g.push_back(std::acos(p.g / 255.0));
        a.theta_b.push_back(std::acos(p.b / 255.0));
    }
    return a;
}

namespace detail {

inline void check_mcqi_angles(const McqiAngles& a) {
    const std::size_t num_px = std::size_t{1} << (2 * a.n);
    if (a.theta_r.size() != num_px || a.theta_g.size() != num_px || a.theta_b.size() != num_px)
        throw std::invalid_argument("mcqi: each channel needs 4^n angles");
}

}  // namespace detail

/// Direct MCQI state on 2n+3 qubits.
///
/// Layout: qubits 0..2n-1 hold the pixel index |i>, qubits 2n and 2n+1 are
/// the channel-select pair (value 0=R, 1=G, 2=B, 3=pad; qubit 2n is its low
/// bit), and qubit 2n+2 is the value qubit. Per pixel, with scale 1/2^(n+1):
/// cos(theta_ch) at (value=0, ch, i) and sin(theta_ch) at (value=1, ch, i)
/// for ch in {R,G,B}; the pad slot holds scale at value=0 and 0 at value=1.
inline Statevector mcqi_encode(const McqiAngles& angles) {
    detail::check_mcqi_angles(angles);
    const int n = angles.n;
    const std::size_t num_px = std::size_t{1} << (2 * n);
    Statevector st(2 * n + 3);
    const double scale = std::ldexp(1.0, -(n + 1));  // 1/2^(n+1)
    const std::size_t value_bit = std::size_t{1} << (2 * n + 2);
    auto idx = [&](std::size_t channel, std::size_t i) { return (channel << (2 * n)) | i; };
    for (std::size_t i = 0; i < num_px; ++i) {
        const double th[3] = {angles.theta_r[i], angles.theta_g[i], angles.theta_b[i]};
        for (std::size_t ch = 0; ch < 3; ++ch) {
            st.amps[idx(ch, i)] = std::cos(th[ch]) * scale;
            st.amps[value_bit | idx(ch, i)] = std::sin(th[ch]) * scale;
        }
        st.amps[idx(3, i)] = scale;  // pad slot: cos(0), sin(0)
    }
    return st;
}

/// Preparation circuit: H on position and channel-select qubits, then per
/// pixel three multi-controlled RY(2 theta) gates on the value qubit, the
/// controls selecting the pixel's position pattern and the R/G/B
/// channel-select pattern (0-bits X-conjugated). Matches mcqi_encode when run
/// on |0...0>.
inline CircuitProgram mcqi_circuit(const McqiAngles& angles) {
    detail::check_mcqi_angles(angles);
    const int n = angles.n;
    const std::size_t num_px = std::size_t{1} << (2 * n);
    CircuitProgram prog;
    prog.num_qubits = 2 * n + 3;
    const int value = 2 * n + 2;
    const int num_controls = 2 * n + 2;  // position + channel-select
    std::vector<int> all_controls(num_controls);
    for (int q = 0; q < num_controls; ++q) {
        all_controls[q] = q;
        prog.ops.push_back(make_h(q));
    }
    for (std::size_t i = 0; i < num_px; ++i) {
        const double th[3] = {angles.theta_r[i], angles.theta_g[i], angles.theta_b[i]};
        for (std::size_t ch = 0; ch < 3; ++ch) {
            const std::size_t pattern = (ch << (2 * n)) | i;
            std::vector<int> flips;
            for (int q = 0; q < num_controls; ++q)
                if (((pattern >> q) & 1) == 0) flips.push_back(q);
            for (int q : flips) prog.ops.push_back(make_x(q));
            prog.ops.push_back(make_ry(value, 2.0 * th[ch], all_controls));
            for (int q : flips) prog.ops.push_back(make_x(q));
        }
    }
    return prog;
}

/// Analytic retrieval: per pixel and channel, p = cos(atan2(|sin branch|,
/// |cos branch|)), pixel = round(255 p). Exact round trip on encoder output.
inline ColorImage mcqi_decode(const Statevector& state, int n) {
    if (state.num_qubits != 2 * n + 3)
        throw std::invalid_argument("mcqi_decode: state must have 2n+3 qubits");
    const std::size_t num_px = std::size_t{1} << (2 * n);
    const std::size_t value_bit = std::size_t{1} << (2 * n + 2);
    auto idx = [&](std::size_t channel, std::size_t i) { return (channel << (2 * n)) | i; };
    std::vector<Rgb> pixels(num_px);
    for (std::size_t i = 0; i < num_px; ++i) {
        std::uint8_t ch_val[3];
        for (std::size_t ch = 0; ch < 3; ++ch) {
            const double a0 = std::abs(state.amps[idx(ch, i)]);
            const double a1 = std::abs(state.amps[value_bit | idx(ch, i)]);
            if (a0 == 0.0 && a1 == 0.0)
                throw std::runtime_error("mcqi_decode: zero probability block at pixel " +
                                         std::to_string(i));
            ch_val[ch] = round_pixel(255.0 * std::cos(std::atan2(a1, a0)));
        }
        pixels[i] = {ch_val[0], ch_val[1], ch_val[2]};
    }
    return ColorImage(n, std::move(pixels));
}

}  // namespace qic
