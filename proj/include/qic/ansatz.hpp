#pragma once

#include <stdexcept>
#include <vector>

#include "qic/circuit.hpp"

namespace qic {

/// Variational ansatz template: per layer a U3 on every qubit followed by a
/// CNOT chain k -> k+1. Parameter count is 3 * num_qubits * layers.
struct AnsatzSpec {
    int num_qubits = 1;
    int layers = 1;

    std::size_t num_params() const {
        return static_cast<std::size_t>(3) * num_qubits * layers;
    }
};

/// Autoencoder wiring: the same layered ansatz, one latent qubit kept, the
/// other num_qubits-1 qubits are trash to be driven to |0>.
struct AcSpec {
    int num_qubits = 1;
    int layers = 1;
    int latent = 0;
    std::vector<int> trash;

    static AcSpec with_latent(int num_qubits, int layers, int latent) {
        if (latent < 0 || latent >= num_qubits)
            throw std::invalid_argument("AcSpec: latent qubit out of range");
        AcSpec spec{num_qubits, layers, latent, {}};
        for (int q = 0; q < num_qubits; ++q)
            if (q != latent) spec.trash.push_back(q);
        return spec;
    }

    AnsatzSpec ansatz() const { return {num_qubits, layers}; }
};

/// Build the layered U3 + CNOT-chain program. Slot order is layer-major,
/// then qubit, then angle (theta, phi, lambda). A single qubit has no chain.
inline CircuitProgram build_ansatz(const AnsatzSpec& spec) {
    if (spec.num_qubits < 1 || spec.layers < 1)
        throw std::invalid_argument("build_ansatz: need num_qubits >= 1 and layers >= 1");
    CircuitProgram prog;
    prog.num_qubits = spec.num_qubits;
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int q = 0; q < spec.num_qubits; ++q) {
            const int op_index = static_cast<int>(prog.ops.size());
            prog.ops.push_back(make_u3(q, 0.0, 0.0, 0.0));
            for (int a = 0; a < 3; ++a) prog.param_slots.push_back({op_index, a});
        }
        for (int q = 0; q + 1 < spec.num_qubits; ++q)
            prog.ops.push_back(make_cnot(q, q + 1));
    }
    return prog;
}

}  // namespace qic
