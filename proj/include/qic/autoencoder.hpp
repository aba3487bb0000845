#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qic/ansatz.hpp"
#include "qic/gradient.hpp"
#include "qic/statevector.hpp"

namespace qic {

/// Fidelity of the trash qubits with |0...0> after running the ansatz.
inline double ac_fidelity(const Statevector& encoded, const CircuitProgram& ansatz,
                          std::span<const double> params, const std::vector<int>& trash) {
    Statevector st = encoded;
    run_circuit_inplace(st, ansatz, params);
    return zero_projector_fidelity(st, trash);
}

inline double ac_fidelity(const Statevector& encoded, const AcSpec& spec,
                          std::span<const double> params) {
    return ac_fidelity(encoded, build_ansatz(spec.ansatz()), params, spec.trash);
}

/// 1 - mean trash fidelity over a positive-class batch.
inline double ac_loss(std::span<const Statevector> positives, const CircuitProgram& ansatz,
                      std::span<const double> params, const std::vector<int>& trash) {
    if (positives.empty()) throw std::invalid_argument("ac_loss: empty batch");
    double mean_fid = 0.0;
    for (const Statevector& st : positives) mean_fid += ac_fidelity(st, ansatz, params, trash);
    return 1.0 - mean_fid / static_cast<double>(positives.size());
}

/// Per-sample loss contribution (1 - F) and its parameter-shift gradient.
inline std::pair<double, std::vector<double>> ac_sample_loss_gradient(
    const Statevector& encoded, const CircuitProgram& ansatz, std::span<const double> params,
    const std::vector<int>& trash) {
    const Observable obs = Observable::zero_projector(trash);
    const double fid = ac_fidelity(encoded, ansatz, params, trash);
    std::vector<double> grad = parameter_shift_gradient(ansatz, params, encoded, obs);
    for (double& g : grad) g = -g;
    return {1.0 - fid, std::move(grad)};
}

/// Positive class iff the fidelity exceeds the threshold.
inline int ac_classify(double fidelity, double threshold) {
    return fidelity > threshold ? +1 : -1;
}

}  // namespace qic
