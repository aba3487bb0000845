#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "qic/gates.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// Trainable-parameter slot: parameter j of a program feeds
/// ops[op_index].params[angle_index] at execution time.
struct ParamSlot {
    int op_index = 0;
    int angle_index = 0;
};

/// A symbolic gate sequence. Angles stored on the ops are the baked defaults;
/// param_slots name the angle positions that run_circuit overrides from its
/// params vector. Builders keep param_slots sorted by (op_index, angle_index).
struct CircuitProgram {
    int num_qubits = 0;
    std::vector<GateOp> ops;
    std::vector<ParamSlot> param_slots;

    std::size_t num_params() const { return param_slots.size(); }
};

inline void validate_program(const CircuitProgram& prog) {
    for (const GateOp& op : prog.ops) validate_gate(op, prog.num_qubits);
    for (const ParamSlot& s : prog.param_slots) {
        if (s.op_index < 0 || s.op_index >= static_cast<int>(prog.ops.size()))
            throw std::invalid_argument("param slot references missing op");
        const GateOp& op = prog.ops[s.op_index];
        if (s.angle_index < 0 || s.angle_index >= static_cast<int>(op.params.size()))
            throw std::invalid_argument("param slot references missing angle position");
    }
}

namespace detail {

inline bool slots_sorted(const std::vector<ParamSlot>& slots) {
    return std::is_sorted(slots.begin(), slots.end(), [](const ParamSlot& a, const ParamSlot& b) {
        return a.op_index != b.op_index ? a.op_index < b.op_index : a.angle_index < b.angle_index;
    });
}

// Core executor. Substitutes params into their slots without copying ops.
// `override_slot` >= 0 replaces that one slot's value with `override_value`
// (used by the parameter-shift rule); `first_op` skips a prefix.
inline void run_ops(Statevector& st, const CircuitProgram& prog, std::span<const double> params,
                    std::size_t first_op = 0, int override_slot = -1, double override_value = 0.0) {
    double angles[3];
    std::size_t s = 0;
    const std::size_t num_slots = prog.param_slots.size();
    while (s < num_slots && prog.param_slots[s].op_index < static_cast<int>(first_op)) ++s;
    for (std::size_t k = first_op; k < prog.ops.size(); ++k) {
        const GateOp& op = prog.ops[k];
        const std::size_t na = op.params.size();
        if (s < num_slots && prog.param_slots[s].op_index == static_cast<int>(k)) {
            for (std::size_t a = 0; a < na; ++a) angles[a] = op.params[a];
            while (s < num_slots && prog.param_slots[s].op_index == static_cast<int>(k)) {
                angles[prog.param_slots[s].angle_index] =
                    static_cast<int>(s) == override_slot ? override_value : params[s];
                ++s;
            }
            detail::apply_two_level(st, op.kind, op.targets[0],
                                    detail::control_mask(op.controls), {angles, na});
        } else {
            detail::apply_two_level(st, op.kind, op.targets[0],
                                    detail::control_mask(op.controls), op.params);
        }
    }
}

}  // namespace detail

/// Run a program in place, substituting params into their slots.
inline void run_circuit_inplace(Statevector& state, const CircuitProgram& prog,
                                std::span<const double> params) {
    if (params.size() != prog.param_slots.size())
        throw std::invalid_argument("run_circuit: params length does not match param slots");
    if (prog.num_qubits != state.num_qubits)
        throw std::invalid_argument("run_circuit: qubit count mismatch");
    validate_program(prog);
    if (!detail::slots_sorted(prog.param_slots))
        throw std::invalid_argument("run_circuit: param_slots must be sorted by op index");
    detail::run_ops(state, prog, params);
}

inline Statevector run_circuit(const Statevector& state, const CircuitProgram& prog,
                               std::span<const double> params = {}) {
    Statevector out = state;
    run_circuit_inplace(out, prog, params);
    return out;
}

}  // namespace qic
