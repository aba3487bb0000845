#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qic/statevector.hpp"

namespace qic {

enum class GateKind { H, RY, U3, CNOT, X };

inline int gate_param_count(GateKind kind) {
    switch (kind) {
        case GateKind::RY: return 1;
        case GateKind::U3: return 3;
        default: return 0;
    }
}

inline const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::RY: return "RY";
        case GateKind::U3: return "U3";
        case GateKind::CNOT: return "CNOT";
        case GateKind::X: return "X";
    }
    return "?";
}

/// One gate: a single target qubit, optional control qubits (all-ones
/// semantics: the action fires only on basis states where every control bit
/// is 1), and the angles the kind requires.
///
/// U3(theta, phi, lambda) is the matrix product RZ(phi) * RY(theta) * RZ(lambda);
/// each of the three angles is independently parameter-shiftable.
struct GateOp {
    GateKind kind;
    std::vector<int> targets;
    std::vector<int> controls;
    std::vector<double> params;
};

inline GateOp make_h(int target) { return {GateKind::H, {target}, {}, {}}; }
inline GateOp make_x(int target) { return {GateKind::X, {target}, {}, {}}; }
inline GateOp make_cnot(int control, int target) {
    return {GateKind::CNOT, {target}, {control}, {}};
}
inline GateOp make_ry(int target, double theta, std::vector<int> controls = {}) {
    return {GateKind::RY, {target}, std::move(controls), {theta}};
}
inline GateOp make_u3(int target, double theta, double phi, double lambda) {
    return {GateKind::U3, {target}, {}, {theta, phi, lambda}};
}

inline void validate_gate(const GateOp& op, int num_qubits) {
    if (op.targets.size() != 1)
        throw std::invalid_argument(std::string(gate_name(op.kind)) + ": expected exactly one target");
    if (op.kind == GateKind::CNOT && op.controls.size() != 1)
        throw std::invalid_argument("CNOT: expected exactly one control");
    if (static_cast<int>(op.params.size()) != gate_param_count(op.kind))
        throw std::invalid_argument(std::string(gate_name(op.kind)) + ": wrong angle count");
    const int t = op.targets[0];
    if (t < 0 || t >= num_qubits)
        throw std::invalid_argument("gate target out of range");
    for (int c : op.controls) {
        if (c < 0 || c >= num_qubits)
            throw std::invalid_argument("gate control out of range");
        if (c == t)
            throw std::invalid_argument("gate control overlaps target");
    }
    for (std::size_t i = 0; i < op.controls.size(); ++i)
        for (std::size_t j = i + 1; j < op.controls.size(); ++j)
            if (op.controls[i] == op.controls[j])
                throw std::invalid_argument("duplicate control qubit");
}

namespace detail {

inline std::uint64_t control_mask(const std::vector<int>& controls) {
    std::uint64_t m = 0;
    for (int c : controls) m |= std::uint64_t{1} << c;
    return m;
}

// Visit each (i, i|tbit) amplitude pair with all control bits set and apply
// the kind's 2x2 action in place.
inline void apply_two_level(Statevector& st, GateKind kind, int target, std::uint64_t cmask,
                            std::span<const double> angles) {
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const std::size_t dim = st.amps.size();
    cplx* amps = st.amps.data();

    switch (kind) {
        case GateKind::H: {
            constexpr double inv_sqrt2 = 0.70710678118654752440;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & tbit) || ((i & cmask) != cmask)) continue;
                const std::size_t j = i | tbit;
                const cplx a = amps[i], b = amps[j];
                amps[i] = (a + b) * inv_sqrt2;
                amps[j] = (a - b) * inv_sqrt2;
            }
            break;
        }
        case GateKind::X:
        case GateKind::CNOT: {
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & tbit) || ((i & cmask) != cmask)) continue;
                std::swap(amps[i], amps[i | tbit]);
            }
            break;
        }
        case GateKind::RY: {
            const double c = std::cos(angles[0] * 0.5);
            const double s = std::sin(angles[0] * 0.5);
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & tbit) || ((i & cmask) != cmask)) continue;
                const std::size_t j = i | tbit;
                const cplx a = amps[i], b = amps[j];
                amps[i] = c * a - s * b;
                amps[j] = s * a + c * b;
            }
            break;
        }
        case GateKind::U3: {
            // RZ(phi) * RY(theta) * RZ(lambda)
            const double ct = std::cos(angles[0] * 0.5);
            const double st_ = std::sin(angles[0] * 0.5);
            const double sum = 0.5 * (angles[1] + angles[2]);
            const double dif = 0.5 * (angles[1] - angles[2]);
            const cplx m00 = std::polar(ct, -sum);
            const cplx m01 = -std::polar(st_, -dif);
            const cplx m10 = std::polar(st_, dif);
            const cplx m11 = std::polar(ct, sum);
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & tbit) || ((i & cmask) != cmask)) continue;
                const std::size_t j = i | tbit;
                const cplx a = amps[i], b = amps[j];
                amps[i] = m00 * a + m01 * b;
                amps[j] = m10 * a + m11 * b;
            }
            break;
        }
    }
}

}  // namespace detail

/// In-place gate application on a statevector.
inline void apply_gate_inplace(Statevector& state, const GateOp& op) {
    validate_gate(op, state.num_qubits);
    detail::apply_two_level(state, op.kind, op.targets[0], detail::control_mask(op.controls),
                            op.params);
}

/// Value-returning form of apply_gate_inplace.
inline Statevector apply_gate(const Statevector& state, const GateOp& op) {
    Statevector out = state;
    apply_gate_inplace(out, op);
    return out;
}

}  // namespace qic
