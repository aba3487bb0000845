#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace qic {

struct AdamHyper {
    double step_size = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    bool operator==(const AdamHyper&) const = default;
};

/// First/second moment estimates and step counter for Adam.
struct AdamState {
    std::vector<double> m, v;
    long t = 0;
    AdamHyper hyper;

    explicit AdamState(std::size_t dim, AdamHyper h = {})
        : m(dim, 0.0), v(dim, 0.0), hyper(h) {}
};

/// One bias-corrected Adam update: params <- params - step * m_hat / (sqrt(v_hat) + eps).
/// A non-finite gradient component is a hard error.
inline void adam_step(std::vector<double>& params, std::span<const double> grads,
                      AdamState& st) {
    if (params.size() != grads.size() || params.size() != st.m.size())
        throw std::invalid_argument("adam_step: length mismatch");
    for (double g : grads)
        if (!std::isfinite(g)) throw std::runtime_error("adam_step: non-finite gradient component");
    st.t += 1;
    const double b1 = st.hyper.beta1, b2 = st.hyper.beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(st.t));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        st.m[i] = b1 * st.m[i] + (1.0 - b1) * grads[i];
        st.v[i] = b2 * st.v[i] + (1.0 - b2) * grads[i] * grads[i];
        const double m_hat = st.m[i] / corr1;
        const double v_hat = st.v[i] / corr2;
        params[i] -= st.hyper.step_size * m_hat / (std::sqrt(v_hat) + st.hyper.epsilon);
    }
}

}  // namespace qic
