#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qic/circuit.hpp"
#include "qic/image.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// Per-pixel rotation angles theta_i in [0, pi/2] for a 2^n x 2^n image.
struct FrqiAngles {
    int n = 1;
    std::vector<double> theta;
};

/// theta_i = (pixel_i / 255) * (pi/2)
inline FrqiAngles frqi_angles(const GrayImage& img) {
    FrqiAngles a;
    a.n = img.n;
    a.theta.reserve(img.pixels.size());
    constexpr double scale = std::numbers::pi / 2.0 / 255.0;
    for (std::uint8_t p : img.pixels) a.theta.push_back(p * scale);
    return a;
}

/// Direct FRQI state on 2n+1 qubits: qubits 0..2n-1 hold the pixel index |i>,
/// qubit 2n is the color qubit. Amplitude at (color=0, i) is cos(theta_i)/2^n
/// and at (color=1, i) is sin(theta_i)/2^n.
inline Statevector frqi_encode(const FrqiAngles& angles) {
    const int n = angles.n;
    const std::size_t num_px = std::size_t{1} << (2 * n);
    if (angles.theta.size() != num_px)
        throw std::invalid_argument("frqi_encode: angle count must be 4^n");
    Statevector st(2 * n + 1);
    const double scale = std::ldexp(1.0, -n);  // 1/2^n
    const std::size_t color_bit = num_px;      // 1 << 2n
    for (std::size_t i = 0; i < num_px; ++i) {
        st.amps[i] = std::cos(angles.theta[i]) * scale;
        st.amps[color_bit | i] = std::sin(angles.theta[i]) * scale;
    }
    return st;
}

/// Preparation circuit: H on every position qubit, then per pixel one
/// 2n-controlled RY(2 theta_i) on the color qubit. Position patterns with
/// 0-bits are selected by X-conjugating those controls. Running the program
/// on |0...0> reproduces frqi_encode.
inline CircuitProgram frqi_circuit(const FrqiAngles& angles) {
    const int n = angles.n;
    const std::size_t num_px = std::size_t{1} << (2 * n);
    if (angles.theta.size() != num_px)
        throw std::invalid_argument("frqi_circuit: angle count must be 4^n");
    CircuitProgram prog;
    prog.num_qubits = 2 * n + 1;
    const int color = 2 * n;
    std::vector<int> all_pos(2 * n);
    for (int q = 0; q < 2 * n; ++q) {
        all_pos[q] = q;
        prog.ops.push_back(make_h(q));
    }
    for (std::size_t i = 0; i < num_px; ++i) {
        std::vector<int> flips;
        for (int q = 0; q < 2 * n; ++q)
            if (((i >> q) & 1) == 0) flips.push_back(q);
        for (int q : flips) prog.ops.push_back(make_x(q));
        prog.ops.push_back(make_ry(color, 2.0 * angles.theta[i], all_pos));
        for (int q : flips) prog.ops.push_back(make_x(q));
    }
    return prog;
}

/// Analytic retrieval: theta_i from the two branch probabilities at each
/// position, then back to an integer pixel. Exact round trip on encoder
/// output. Throws if some position carries zero probability (not an FRQI
/// state).
inline GrayImage frqi_decode(const Statevector& state, int n) {
    if (state.num_qubits != 2 * n + 1)
        throw std::invalid_argument("frqi_decode: state must have 2n+1 qubits");
    const std::size_t num_px = std::size_t{1} << (2 * n);
    const std::size_t color_bit = num_px;
    std::vector<std::uint8_t> pixels(num_px);
    constexpr double to_pixel = 255.0 / (std::numbers::pi / 2.0);
    for (std::size_t i = 0; i < num_px; ++i) {
        const double p0 = std::norm(state.amps[i]);
        const double p1 = std::norm(state.amps[color_bit | i]);
        if (p0 + p1 == 0.0)
            throw std::runtime_error("frqi_decode: zero probability at position " +
                                     std::to_string(i));
        const double theta = std::atan2(std::sqrt(p1), std::sqrt(p0));
        pixels[i] = round_pixel(theta * to_pixel);
    }
    return GrayImage(n, std::move(pixels));
}

}  // namespace qic
