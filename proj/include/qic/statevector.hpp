#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qic {

using cplx = std::complex<double>;

/// Dense statevector over num_qubits qubits. Basis-index bit k is qubit k,
/// qubit 0 is the least significant bit. Every module in this library shares
/// that convention.
struct Statevector {
    int num_qubits = 0;
    std::vector<cplx> amps;

    Statevector() = default;

    explicit Statevector(int n) : num_qubits(n) {
        if (n < 1 || n > 30)
            throw std::invalid_argument("Statevector: num_qubits must be in [1, 30]");
        amps.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    }

    std::size_t dim() const { return amps.size(); }

    /// |0...0>
    static Statevector zero(int n) {
        Statevector st(n);
        st.amps[0] = 1.0;
        return st;
    }

    /// Computational basis state |index>.
    static Statevector basis(int n, std::uint64_t index) {
        Statevector st(n);
        if (index >= st.dim())
            throw std::invalid_argument("Statevector::basis: index out of range");
        st.amps[index] = 1.0;
        return st;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& a : amps) s += std::norm(a);
        return s;
    }

    bool is_normalized(double tol = 1e-10) const {
        return std::abs(norm_sq() - 1.0) <= 2.0 * tol;  // |norm-1| ~ |norm_sq-1|/2
    }
};

/// <Z_qubit>: sum of |amp|^2 signed by the qubit's bit (+1 for 0, -1 for 1).
inline double expectation_z(const Statevector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits)
        throw std::invalid_argument("expectation_z: qubit index out of range");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double ez = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        const double p = std::norm(state.amps[i]);
        ez += (i & bit) ? -p : p;
    }
    return ez;
}

/// <0...0| rho_trash |0...0>: total probability of all trash bits being 0.
inline double zero_projector_fidelity(const Statevector& state, const std::vector<int>& trash) {
    if (trash.empty())
        throw std::invalid_argument("zero_projector_fidelity: empty trash set");
    std::uint64_t mask = 0;
    for (int q : trash) {
        if (q < 0 || q >= state.num_qubits)
            throw std::invalid_argument("zero_projector_fidelity: qubit index out of range");
        mask |= std::uint64_t{1} << q;
    }
    double fid = 0.0;
    for (std::size_t i = 0; i < state.amps.size(); ++i)
        if ((i & mask) == 0) fid += std::norm(state.amps[i]);
    return fid;
}

}  // namespace qic
