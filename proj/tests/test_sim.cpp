#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qic/adam.hpp"
#include "qic/ansatz.hpp"
#include "qic/circuit.hpp"
#include "qic/gates.hpp"
#include "qic/gradient.hpp"
#include "qic/rng.hpp"
#include "qic/statevector.hpp"

#include "dense_oracle.hpp"

using namespace qic;

namespace {

Statevector random_state(int n, Rng& rng) {
    Statevector st(n);
    double norm_sq = 0.0;
    for (cplx& a : st.amps) {
        a = {2.0 * rand_unit(rng) - 1.0, 2.0 * rand_unit(rng) - 1.0};
        norm_sq += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (cplx& a : st.amps) a *= inv;
    return st;
}

double rand_angle(Rng& rng) { return (2.0 * rand_unit(rng) - 1.0) * 2.0 * std::numbers::pi; }

GateOp random_gate(int n, Rng& rng) {
    const int kind = static_cast<int>(rand_below(rng, 6));
    const int target = static_cast<int>(rand_below(rng, n));
    auto pick_controls = [&](std::size_t max_count) {
        std::vector<int> controls;
        if (n < 2) return controls;
        const std::size_t want = rand_below(rng, max_count + 1);
        for (int q = 0; q < n && controls.size() < want; ++q)
            if (q != target && rand_coin(rng)) controls.push_back(q);
        return controls;
    };
    switch (kind) {
        case 0: return make_h(target);
        case 1: return make_x(target);
        case 2: return make_ry(target, rand_angle(rng), pick_controls(3));
        case 3: return make_u3(target, rand_angle(rng), rand_angle(rng), rand_angle(rng));
        case 4: {
            GateOp op = make_u3(target, rand_angle(rng), rand_angle(rng), rand_angle(rng));
            op.controls = pick_controls(2);
            return op;
        }
        default: {
            if (n < 2) return make_h(target);
            int control = static_cast<int>(rand_below(rng, n));
            while (control == target) control = static_cast<int>(rand_below(rng, n));
            return make_cnot(control, target);
        }
    }
}

double max_amp_diff(const Statevector& st, const std::vector<oracle::cd>& ref) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        worst = std::max(worst, std::abs(st.amps[i] - ref[i]));
    return worst;
}

double circuit_expectation(const CircuitProgram& prog, std::span<const double> params,
                           const Statevector& input, const Observable& obs) {
    return expectation(run_circuit(input, prog, params), obs);
}

std::vector<double> finite_difference_gradient(const CircuitProgram& prog,
                                               std::vector<double> params,
                                               const Statevector& input, const Observable& obs,
                                               double h) {
    std::vector<double> grad(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double saved = params[k];
        params[k] = saved + h;
        const double f_plus = circuit_expectation(prog, params, input, obs);
        params[k] = saved - h;
        const double f_minus = circuit_expectation(prog, params, input, obs);
        params[k] = saved;
        grad[k] = (f_plus - f_minus) / (2.0 * h);
    }
    return grad;
}

}  // namespace

TEST_CASE("statevector construction and norms") {
    const Statevector zero = Statevector::zero(3);
    REQUIRE(zero.dim() == 8);
    REQUIRE(zero.amps[0] == cplx{1.0, 0.0});
    REQUIRE(zero.norm_sq() == 1.0);
    REQUIRE(zero.is_normalized());

    const Statevector basis = Statevector::basis(2, 3);
    REQUIRE(basis.amps[3] == cplx{1.0, 0.0});
    REQUIRE(basis.amps[0] == cplx{0.0, 0.0});

    REQUIRE_THROWS_AS(Statevector(0), std::invalid_argument);
    REQUIRE_THROWS_AS(Statevector(31), std::invalid_argument);
    REQUIRE_THROWS_AS(Statevector::basis(2, 4), std::invalid_argument);
}

TEST_CASE("expectation_z on known states") {
    REQUIRE(expectation_z(Statevector::basis(1, 0), 0) == 1.0);
    REQUIRE(expectation_z(Statevector::basis(1, 1), 0) == -1.0);
    REQUIRE(expectation_z(Statevector::basis(3, 0b101), 0) == -1.0);
    REQUIRE(expectation_z(Statevector::basis(3, 0b101), 1) == 1.0);
    REQUIRE(expectation_z(Statevector::basis(3, 0b101), 2) == -1.0);

    Statevector plus(1);
    plus.amps = {cplx{std::sqrt(0.5)}, cplx{std::sqrt(0.5)}};
    REQUIRE_THAT(expectation_z(plus, 0), Catch::Matchers::WithinAbs(0.0, 1e-15));

    Rng rng(11);
    const Statevector st = random_state(4, rng);
    for (int q = 0; q < 4; ++q) {
        double direct = 0.0;
        for (std::size_t i = 0; i < st.dim(); ++i)
            direct += ((i >> q) & 1 ? -1.0 : 1.0) * std::norm(st.amps[i]);
        REQUIRE_THAT(expectation_z(st, q), Catch::Matchers::WithinAbs(direct, 1e-14));
    }
    REQUIRE_THROWS_AS(expectation_z(st, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(expectation_z(st, -1), std::invalid_argument);
}

TEST_CASE("zero projector fidelity") {
    REQUIRE(zero_projector_fidelity(Statevector::basis(3, 0), {0, 1, 2}) == 1.0);
    REQUIRE(zero_projector_fidelity(Statevector::basis(3, 0b010), {1}) == 0.0);
    REQUIRE(zero_projector_fidelity(Statevector::basis(3, 0b010), {0, 2}) == 1.0);

    Rng rng(12);
    const Statevector st = random_state(5, rng);
    const std::vector<int> trash{1, 3};
    double direct = 0.0;
    for (std::size_t i = 0; i < st.dim(); ++i)
        if (((i >> 1) & 1) == 0 && ((i >> 3) & 1) == 0) direct += std::norm(st.amps[i]);
    REQUIRE_THAT(zero_projector_fidelity(st, trash), Catch::Matchers::WithinAbs(direct, 1e-14));

    REQUIRE_THROWS_AS(zero_projector_fidelity(st, {}), std::invalid_argument);
    REQUIRE_THROWS_AS(zero_projector_fidelity(st, {5}), std::invalid_argument);
}

TEST_CASE("gate validation rejects malformed ops") {
    Statevector st = Statevector::zero(3);
    REQUIRE_THROWS_AS(apply_gate(st, make_cnot(1, 1)), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, make_h(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, make_ry(0, 0.1, {3})), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, GateOp{GateKind::RY, {0}, {1, 1}, {0.1}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, GateOp{GateKind::RY, {0}, {}, {}}), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, GateOp{GateKind::H, {0}, {}, {0.1}}), std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, GateOp{GateKind::CNOT, {1}, {0, 2}, {}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(apply_gate(st, GateOp{GateKind::U3, {0}, {}, {0.1, 0.2}}),
                      std::invalid_argument);
}

TEST_CASE("single gates match the dense oracle") {
    Rng rng(21);
    for (int n = 1; n <= 5; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            const Statevector input = random_state(n, rng);
            const GateOp op = random_gate(n, rng);
            std::vector<oracle::cd> ref(input.amps.begin(), input.amps.end());
            ref = oracle::dense_apply(ref, n, op, op.params);
            const Statevector out = apply_gate(input, op);
            INFO("n=" << n << " gate=" << gate_name(op.kind));
            REQUIRE(max_amp_diff(out, ref) < 1e-12);
        }
    }
}

TEST_CASE("random circuits preserve norm and match the dense oracle") {
    Rng rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rand_below(rng, 6));
        const std::size_t depth = 1 + rand_below(rng, 25);
        const Statevector input = random_state(n, rng);

        CircuitProgram prog;
        prog.num_qubits = n;
        for (std::size_t k = 0; k < depth; ++k) prog.ops.push_back(random_gate(n, rng));

        const Statevector out = run_circuit(input, prog);
        std::vector<oracle::cd> ref(input.amps.begin(), input.amps.end());
        ref = oracle::dense_run(prog, {}, ref);

        INFO("trial=" << trial << " n=" << n << " depth=" << depth);
        REQUIRE(std::abs(out.norm_sq() - 1.0) < 1e-12);
        REQUIRE(max_amp_diff(out, ref) < 1e-10);
    }
}

TEST_CASE("every gate composed with its inverse is the identity") {
    Rng rng(23);
    const int n = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const Statevector input = random_state(n, rng);
        const double theta = rand_angle(rng), phi = rand_angle(rng), lambda = rand_angle(rng);

        struct Pair {
            GateOp forward, backward;
        };
        const Pair pairs[] = {
            {make_h(1), make_h(1)},
            {make_x(2), make_x(2)},
            {make_cnot(0, 3), make_cnot(0, 3)},
            {make_ry(2, theta), make_ry(2, -theta)},
            {make_ry(1, theta, {0, 3}), make_ry(1, -theta, {0, 3})},
            {make_u3(0, theta, phi, lambda), make_u3(0, -theta, -lambda, -phi)},
        };
        for (const Pair& p : pairs) {
            Statevector st = apply_gate(apply_gate(input, p.forward), p.backward);
            double worst = 0.0;
            for (std::size_t i = 0; i < st.dim(); ++i)
                worst = std::max(worst, std::abs(st.amps[i] - input.amps[i]));
            INFO("gate=" << gate_name(p.forward.kind));
            REQUIRE(worst < 1e-12);
        }
    }
}

TEST_CASE("controls gate the rotation exactly") {
    const double theta = 0.7;
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const GateOp op = make_ry(0, theta, {1, 3});
    for (std::uint64_t b = 0; b < 16; ++b) {
        const Statevector out = apply_gate(Statevector::basis(4, b), op);
        const bool active = ((b >> 1) & 1) && ((b >> 3) & 1);
        if (!active) {
            REQUIRE(std::abs(out.amps[b] - cplx{1.0}) < 1e-15);
            continue;
        }
        const std::uint64_t lo = b & ~std::uint64_t{1}, hi = b | std::uint64_t{1};
        if (b & 1) {
            REQUIRE_THAT(out.amps[lo].real(), Catch::Matchers::WithinAbs(-s, 1e-15));
            REQUIRE_THAT(out.amps[hi].real(), Catch::Matchers::WithinAbs(c, 1e-15));
        } else {
            REQUIRE_THAT(out.amps[lo].real(), Catch::Matchers::WithinAbs(c, 1e-15));
            REQUIRE_THAT(out.amps[hi].real(), Catch::Matchers::WithinAbs(s, 1e-15));
        }
    }
}

TEST_CASE("exhaustive control subsets agree with the dense oracle") {
    Rng rng(24);
    const int n = 3;
    const Statevector input = random_state(n, rng);
    for (int target = 0; target < n; ++target) {
        std::vector<int> others;
        for (int q = 0; q < n; ++q)
            if (q != target) others.push_back(q);
        for (int mask = 0; mask < 4; ++mask) {
            std::vector<int> controls;
            for (int k = 0; k < 2; ++k)
                if (mask & (1 << k)) controls.push_back(others[k]);
            const GateOp op = make_ry(target, 1.234, controls);
            std::vector<oracle::cd> ref(input.amps.begin(), input.amps.end());
            ref = oracle::dense_apply(ref, n, op, op.params);
            INFO("target=" << target << " mask=" << mask);
            REQUIRE(max_amp_diff(apply_gate(input, op), ref) < 1e-13);
        }
    }
}

TEST_CASE("pattern-selected rotation via X conjugation") {
    // The codec circuits select arbitrary control patterns by X-conjugating
    // the zero bits around an all-ones controlled rotation.
    const int n = 5;
    const std::uint64_t pattern = 0b1011;  // on control qubits 0..3, target 4
    const double theta = 0.9;
    CircuitProgram prog;
    prog.num_qubits = n;
    std::vector<int> flips;
    for (int q = 0; q < 4; ++q)
        if (((pattern >> q) & 1) == 0) flips.push_back(q);
    for (int q : flips) prog.ops.push_back(make_x(q));
    prog.ops.push_back(make_ry(4, theta, {0, 1, 2, 3}));
    for (int q : flips) prog.ops.push_back(make_x(q));

    Rng rng(25);
    const Statevector input = random_state(n, rng);
    const Statevector out = run_circuit(input, prog);

    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    for (std::uint64_t i = 0; i < input.dim(); ++i) {
        const std::uint64_t tbit = std::uint64_t{1} << 4;
        if ((i & 0b1111) != pattern) {
            REQUIRE(std::abs(out.amps[i] - input.amps[i]) < 1e-13);
        } else if ((i & tbit) == 0) {
            const cplx expect = c * input.amps[i] - s * input.amps[i | tbit];
            REQUIRE(std::abs(out.amps[i] - expect) < 1e-13);
        }
    }
}

TEST_CASE("run_circuit rejects inconsistent programs") {
    CircuitProgram prog;
    prog.num_qubits = 2;
    prog.ops.push_back(make_ry(0, 0.0));
    prog.ops.push_back(make_ry(1, 0.0));
    prog.param_slots = {{0, 0}, {1, 0}};

    const Statevector st = Statevector::zero(2);
    const std::vector<double> params{0.1, 0.2};
    REQUIRE_NOTHROW(run_circuit(st, prog, params));

    const std::vector<double> short_params{0.1};
    REQUIRE_THROWS_AS(run_circuit(st, prog, short_params), std::invalid_argument);
    REQUIRE_THROWS_AS(run_circuit(Statevector::zero(3), prog, params), std::invalid_argument);

    CircuitProgram unsorted = prog;
    unsorted.param_slots = {{1, 0}, {0, 0}};
    REQUIRE_THROWS_AS(run_circuit(st, unsorted, params), std::invalid_argument);

    CircuitProgram dangling = prog;
    dangling.param_slots = {{0, 0}, {2, 0}};
    REQUIRE_THROWS_AS(run_circuit(st, dangling, params), std::invalid_argument);
}

TEST_CASE("parameter shift reproduces the analytic RY derivative") {
    CircuitProgram prog;
    prog.num_qubits = 1;
    prog.ops.push_back(make_ry(0, 0.0));
    prog.param_slots = {{0, 0}};
    const Observable obs = Observable::pauli_z(0);
    const Statevector input = Statevector::zero(1);
    for (double theta : {0.0, 0.3, 1.2, std::numbers::pi / 2.0, 2.5, -1.7}) {
        const std::vector<double> params{theta};
        const auto grad = parameter_shift_gradient(prog, params, input, obs);
        REQUIRE(grad.size() == 1);
        // <Z> = cos(theta), so the derivative is -sin(theta).
        REQUIRE_THAT(grad[0], Catch::Matchers::WithinAbs(-std::sin(theta), 1e-12));
    }
}

TEST_CASE("parameter shift equals the naive shifted-circuit evaluation") {
    Rng rng(26);
    constexpr double half_pi = std::numbers::pi / 2.0;
    for (int trial = 0; trial < 10; ++trial) {
        const AnsatzSpec spec{2 + static_cast<int>(rand_below(rng, 3)),
                              1 + static_cast<int>(rand_below(rng, 3))};
        const CircuitProgram prog = build_ansatz(spec);
        std::vector<double> params(prog.num_params());
        for (double& p : params) p = rand_angle(rng);
        const Statevector input = random_state(spec.num_qubits, rng);
        const Observable obs = Observable::pauli_z(
            static_cast<int>(rand_below(rng, spec.num_qubits)));

        const auto grad = parameter_shift_gradient(prog, params, input, obs);
        for (std::size_t k = 0; k < params.size(); k += 5) {
            std::vector<double> shifted = params;
            shifted[k] = params[k] + half_pi;
            const double f_plus = circuit_expectation(prog, shifted, input, obs);
            shifted[k] = params[k] - half_pi;
            const double f_minus = circuit_expectation(prog, shifted, input, obs);
            REQUIRE_THAT(grad[k],
                         Catch::Matchers::WithinAbs((f_plus - f_minus) / 2.0, 1e-12));
        }
    }
}

TEST_CASE("parameter shift matches central finite differences") {
    Rng rng(27);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const AnsatzSpec spec{2 + static_cast<int>(rand_below(rng, 3)),
                              1 + static_cast<int>(rand_below(rng, 2))};
        const CircuitProgram prog = build_ansatz(spec);
        std::vector<double> params(prog.num_params());
        for (double& p : params) p = rand_angle(rng);
        const Statevector input = random_state(spec.num_qubits, rng);

        Observable obs = Observable::pauli_z(static_cast<int>(rand_below(rng, spec.num_qubits)));
        if (trial % 2 == 1) {
            std::vector<int> subset;
            for (int q = 0; q < spec.num_qubits - 1; ++q) subset.push_back(q);
            obs = Observable::zero_projector(subset);
        }

        const auto shift = parameter_shift_gradient(prog, params, input, obs);
        const auto fd = finite_difference_gradient(prog, params, input, obs, 1e-5);
        for (std::size_t k = 0; k < shift.size(); ++k)
            worst = std::max(worst, std::abs(shift[k] - fd[k]));
    }
    REQUIRE(worst < 1e-5);
}

TEST_CASE("parameter shift validates its inputs") {
    const CircuitProgram prog = build_ansatz(AnsatzSpec{2, 1});
    const Statevector input = Statevector::zero(2);
    const std::vector<double> short_params{0.1};
    REQUIRE_THROWS_AS(parameter_shift_gradient(prog, short_params, input,
                                               Observable::pauli_z(0)),
                      std::invalid_argument);
}

TEST_CASE("adam with zero gradient leaves parameters untouched") {
    std::vector<double> params{0.5, -0.25, 3.0};
    AdamState st(params.size());
    const std::vector<double> zeros(params.size(), 0.0);
    adam_step(params, zeros, st);
    adam_step(params, zeros, st);
    REQUIRE(params == std::vector<double>{0.5, -0.25, 3.0});
}

TEST_CASE("adam constant-gradient trajectory is frozen") {
    // With a constant unit gradient the bias corrections cancel exactly, so
    // every step moves by -step_size / (1 + epsilon).
    std::vector<double> params{0.0};
    AdamState st(1);
    const std::vector<double> grad{1.0};
    const double per_step = 0.1 / (1.0 + 1e-8);
    for (int k = 1; k <= 5; ++k) {
        adam_step(params, grad, st);
        REQUIRE_THAT(params[0], Catch::Matchers::WithinAbs(-per_step * k, 1e-9));
    }
    REQUIRE(st.t == 5);
}

TEST_CASE("adam scales steps against the gradient sign") {
    std::vector<double> params{1.0, 1.0};
    AdamState st(2);
    const std::vector<double> grad{2.5, -2.5};
    adam_step(params, grad, st);
    REQUIRE_THAT(params[0], Catch::Matchers::WithinAbs(1.0 - 0.1, 1e-6));
    REQUIRE_THAT(params[1], Catch::Matchers::WithinAbs(1.0 + 0.1, 1e-6));
}

TEST_CASE("adam rejects malformed updates") {
    std::vector<double> params{0.0};
    AdamState st(1);
    const std::vector<double> nan_grad{std::nan("")};
    REQUIRE_THROWS_AS(adam_step(params, nan_grad, st), std::runtime_error);
    const std::vector<double> inf_grad{std::numeric_limits<double>::infinity()};
    REQUIRE_THROWS_AS(adam_step(params, inf_grad, st), std::runtime_error);
    const std::vector<double> wrong_size{1.0, 2.0};
    REQUIRE_THROWS_AS(adam_step(params, wrong_size, st), std::invalid_argument);
}

TEST_CASE("adam runs are deterministic") {
    auto run = [] {
        std::vector<double> params{0.3, -0.7, 1.1};
        AdamState st(3);
        for (int k = 0; k < 25; ++k) {
            const std::vector<double> grad{std::sin(0.1 * k), std::cos(0.2 * k), -0.5};
            adam_step(params, grad, st);
        }
        return params;
    };
    REQUIRE(run() == run());
}
