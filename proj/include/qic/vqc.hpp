#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qic/ansatz.hpp"
#include "qic/gradient.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// ez: <Z> of the readout qubit after running the ansatz on the encoded
/// state. FRQI readout is the color qubit (2n), MCQI readout the value qubit
/// (2n+2).
inline double vqc_ez(const Statevector& encoded, const CircuitProgram& ansatz,
                     std::span<const double> params, int readout) {
    Statevector st = encoded;
    run_circuit_inplace(st, ansatz, params);
    return expectation_z(st, readout);
}

inline double vqc_ez(const Statevector& encoded, const AnsatzSpec& spec,
                     std::span<const double> params, int readout) {
    return vqc_ez(encoded, build_ansatz(spec), params, readout);
}

/// Binary split rule: -1 if ez <= s, +1 if ez > s.
inline int vqc_classify(double ez, double split) { return ez <= split ? -1 : +1; }

/// Three-way split of the ez range: 0 if ez <= b1, 1 if b1 < ez <= b2, else 2.
inline int vqc_classify_multi(double ez, double b1, double b2) {
    if (!(b1 < b2)) throw std::invalid_argument("vqc_classify_multi: bounds must ascend");
    if (ez <= b1) return 0;
    if (ez <= b2) return 1;
    return 2;
}

/// Mean squared error between ez and the +-1 (or multi-target) label values.
inline double vqc_loss(std::span<const Statevector> batch, std::span<const double> targets,
                       const CircuitProgram& ansatz, std::span<const double> params,
                       int readout) {
    if (batch.empty()) throw std::invalid_argument("vqc_loss: empty batch");
    if (batch.size() != targets.size())
        throw std::invalid_argument("vqc_loss: batch/target size mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double d = vqc_ez(batch[i], ansatz, params, readout) - targets[i];
        loss += d * d;
    }
    return loss / static_cast<double>(batch.size());
}

/// Loss plus its gradient for one sample; the chain rule turns the
/// parameter-shift gradient of ez into the MSE gradient.
inline std::pair<double, std::vector<double>> vqc_sample_loss_gradient(
    const Statevector& encoded, double target, const CircuitProgram& ansatz,
    std::span<const double> params, int readout) {
    const Observable obs = Observable::pauli_z(readout);
    const double ez = vqc_ez(encoded, ansatz, params, readout);
    std::vector<double> grad = parameter_shift_gradient(ansatz, params, encoded, obs);
    const double d = ez - target;
    for (double& g : grad) g *= 2.0 * d;
    return {d * d, std::move(grad)};
}

}  // namespace qic
