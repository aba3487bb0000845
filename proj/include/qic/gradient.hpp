#pragma once

#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qic/circuit.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// Measurable quantity: either <Z> of one qubit or the all-zero projector
/// probability over a qubit subset.
struct Observable {
    enum class Kind { PauliZ, ZeroProjector };
    Kind kind = Kind::PauliZ;
    std::vector<int> qubits;

    static Observable pauli_z(int qubit) { return {Kind::PauliZ, {qubit}}; }
    static Observable zero_projector(std::vector<int> subset) {
        return {Kind::ZeroProjector, std::move(subset)};
    }
};

inline double expectation(const Statevector& state, const Observable& obs) {
    if (obs.kind == Observable::Kind::PauliZ) {
        if (obs.qubits.size() != 1)
            throw std::invalid_argument("PauliZ observable takes exactly one qubit");
        return expectation_z(state, obs.qubits[0]);
    }
    return zero_projector_fidelity(state, obs.qubits);
}

namespace detail {

// Apply ops [first, last) with base params substituted into their slots.
inline void run_op_range(Statevector& st, const CircuitProgram& prog,
                         std::span<const double> params, std::size_t first, std::size_t last) {
    double angles[3];
    const std::size_t num_slots = prog.param_slots.size();
    std::size_t s = 0;
    while (s < num_slots && prog.param_slots[s].op_index < static_cast<int>(first)) ++s;
    for (std::size_t k = first; k < last; ++k) {
        const GateOp& op = prog.ops[k];
        const std::size_t na = op.params.size();
        if (s < num_slots && prog.param_slots[s].op_index == static_cast<int>(k)) {
            for (std::size_t a = 0; a < na; ++a) angles[a] = op.params[a];
            while (s < num_slots && prog.param_slots[s].op_index == static_cast<int>(k)) {
                angles[prog.param_slots[s].angle_index] = params[s];
                ++s;
            }
            apply_two_level(st, op.kind, op.targets[0], control_mask(op.controls), {angles, na});
        } else {
            apply_two_level(st, op.kind, op.targets[0], control_mask(op.controls), op.params);
        }
    }
}

}  // namespace detail

/// Exact gradient of f(params) = <obs> after running prog on `input`, via the
/// two-term parameter-shift rule f'(t) = [f(t + pi/2) - f(t - pi/2)] / 2,
/// applied per angle. Valid for RY and U3 angles (rotation generators with
/// eigenvalues +-1/2).
///
/// The forward pass snapshots the state before each parameterized op, so each
/// shifted evaluation replays only the circuit suffix. The returned values
/// are exactly the rule's two-term differences.
inline std::vector<double> parameter_shift_gradient(const CircuitProgram& prog,
                                                    std::span<const double> params,
                                                    const Statevector& input,
                                                    const Observable& obs) {
    if (params.size() != prog.param_slots.size())
        throw std::invalid_argument("parameter_shift_gradient: params length mismatch");
    if (prog.num_qubits != input.num_qubits)
        throw std::invalid_argument("parameter_shift_gradient: qubit count mismatch");
    validate_program(prog);
    if (!detail::slots_sorted(prog.param_slots))
        throw std::invalid_argument("parameter_shift_gradient: param_slots must be sorted");
    for (const ParamSlot& s : prog.param_slots) {
        const GateKind k = prog.ops[s.op_index].kind;
        if (k != GateKind::RY && k != GateKind::U3)
            throw std::invalid_argument(
                "parameter_shift_gradient: slot attached to non-rotation gate");
    }

    const std::size_t num_slots = prog.param_slots.size();
    std::vector<double> grad(num_slots, 0.0);
    if (num_slots == 0) return grad;

    // State just before each distinct slotted op; slots sharing an op share a
    // checkpoint.
    std::vector<Statevector> checkpoints;
    std::vector<std::size_t> checkpoint_of_slot(num_slots);
    {
        Statevector st = input;
        std::size_t applied = 0;  // ops [0, applied) are in st
        for (std::size_t s = 0; s < num_slots;) {
            const auto op_k = static_cast<std::size_t>(prog.param_slots[s].op_index);
            detail::run_op_range(st, prog, params, applied, op_k);
            applied = op_k;
            checkpoints.push_back(st);
            while (s < num_slots &&
                   static_cast<std::size_t>(prog.param_slots[s].op_index) == op_k)
                checkpoint_of_slot[s++] = checkpoints.size() - 1;
        }
    }

    constexpr double half_pi = std::numbers::pi / 2.0;
    Statevector scratch;
    for (std::size_t s = 0; s < num_slots; ++s) {
        const auto op_k = static_cast<std::size_t>(prog.param_slots[s].op_index);
        const Statevector& base = checkpoints[checkpoint_of_slot[s]];

        scratch = base;
        detail::run_ops(scratch, prog, params, op_k, static_cast<int>(s), params[s] + half_pi);
        const double f_plus = expectation(scratch, obs);

        scratch = base;
        detail::run_ops(scratch, prog, params, op_k, static_cast<int>(s), params[s] - half_pi);
        const double f_minus = expectation(scratch, obs);

        grad[s] = 0.5 * (f_plus - f_minus);
    }
    return grad;
}

}  // namespace qic
