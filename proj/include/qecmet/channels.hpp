#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qecmet/matrix.hpp"
#include "qecmet/pauli.hpp"

namespace qecmet {

/// Single-qubit noise generator: gamma/2 (-rho + mu_x X rho X + mu_y Y rho Y + mu_z Z rho Z).
struct LindbladSpec {
    double gamma = 0;
    double mu_x = 0, mu_y = 0, mu_z = 1;

    static LindbladSpec dephasing(double gamma) { return {gamma, 0, 0, 1}; }
    static LindbladSpec transversal(double gamma) { return {gamma, 1, 0, 0}; }
    static LindbladSpec depolarizing(double gamma) {
        return {gamma, 1.0 / 3, 1.0 / 3, 1.0 / 3};
    }

    void validate() const {
        if (gamma < 0) throw std::invalid_argument("LindbladSpec: gamma must be >= 0");
        if (mu_x < 0 || mu_y < 0 || mu_z < 0)
            throw std::invalid_argument("LindbladSpec: weights must be >= 0");
        if (std::abs(mu_x + mu_y + mu_z - 1.0) > 1e-12)
            throw std::invalid_argument("LindbladSpec: weights must sum to 1");
    }
};

/// Probabilistic single-qubit Pauli map: rho -> sum_s p_s s rho s.
struct PauliChannel {
    double p_i = 1, p_x = 0, p_y = 0, p_z = 0;

    void validate() const {
        const double vals[4] = {p_i, p_x, p_y, p_z};
        double sum = 0;
        for (double v : vals) {
            if (v < -1e-14) throw std::invalid_argument("PauliChannel: negative probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("PauliChannel: probabilities must sum to 1");
    }

    static PauliChannel identity() { return {}; }

    /// E_z(p): keeps the state with probability p, applies Z otherwise.
    static PauliChannel dephasing(double p) { return {p, 0, 0, 1 - p}; }

    /// Same structure along an arbitrary Pauli axis ('X','Y','Z').
    static PauliChannel along_axis(double p, char axis) {
        switch (axis) {
            case 'X': return {p, 1 - p, 0, 0};
            case 'Y': return {p, 0, 1 - p, 0};
            case 'Z': return {p, 0, 0, 1 - p};
            default: throw std::invalid_argument("PauliChannel: unknown axis");
        }
    }

    /// D(p): rho -> p rho + (1-p)/4 sum_i s_i rho s_i.
    static PauliChannel depolarizing(double p) {
        const double q = (1 - p) / 4;
        return {p + q, q, q, q};
    }

    /// Exact channel of the Lindblad generator integrated over duration dt.
    /// The Bloch component along axis a damps by exp(-gamma (1 - mu_a) dt);
    /// inverting the Pauli transfer matrix gives the probabilities, which are
    /// nonnegative for every valid spec and dt >= 0.
    static PauliChannel from_lindblad(const LindbladSpec& spec, double dt) {
        spec.validate();
        if (dt < 0) throw std::invalid_argument("PauliChannel: dt must be >= 0");
        const double lx = std::exp(-spec.gamma * (1 - spec.mu_x) * dt);
        const double ly = std::exp(-spec.gamma * (1 - spec.mu_y) * dt);
        const double lz = std::exp(-spec.gamma * (1 - spec.mu_z) * dt);
        PauliChannel ch;
        ch.p_i = (1 + lx + ly + lz) / 4;
        ch.p_x = (1 + lx - ly - lz) / 4;
        ch.p_y = (1 - lx + ly - lz) / 4;
        ch.p_z = (1 - lx - ly + lz) / 4;
        ch.validate();
        return ch;
    }
};

/// p = (1 + e^{-gamma t}) / 2, the retention probability of dephasing noise.
inline double dephasing_flip_probability(double gamma, double t) {
    if (gamma < 0 || t < 0)
        throw std::invalid_argument("dephasing_flip_probability: negative input");
    return 0.5 * (1.0 + std::exp(-gamma * t));
}

/// p = e^{-2 gamma t / 3}, the depolarizing channel parameter after time t.
inline double depolarizing_parameter(double gamma, double t) {
    if (gamma < 0 || t < 0)
        throw std::invalid_argument("depolarizing_parameter: negative input");
    return std::exp(-2.0 * gamma * t / 3.0);
}

/// Applies a single-qubit Pauli channel to one qubit of a register state.
inline ComplexMatrix apply_pauli_channel(const ComplexMatrix& rho, const PauliChannel& ch,
                                         int qubit) {
    ch.validate();
    const int n = qubit_count_for_dim(rho.dim);
    if (qubit < 0 || qubit >= n)
        throw std::invalid_argument("apply_pauli_channel: qubit index out of range");

    ComplexMatrix out = rho;
    out *= ch.p_i;
    const struct { double w; char axis; } parts[3] = {
        {ch.p_x, 'X'}, {ch.p_y, 'Y'}, {ch.p_z, 'Z'}};
    for (const auto& part : parts) {
        if (part.w == 0) continue;
        ComplexMatrix term = pauli_sandwich(PauliString::single(n, qubit, part.axis), rho);
        term *= part.w;
        out += term;
    }
    return out;
}

inline ComplexMatrix apply_channel_all_qubits(ComplexMatrix rho, const PauliChannel& ch) {
    const int n = qubit_count_for_dim(rho.dim);
    for (int q = 0; q < n; ++q) rho = apply_pauli_channel(rho, ch, q);
    return rho;
}

/// Master equation: d rho/dt = -i lambda [H, rho] + sum_j L_j(rho), with
/// H = 1/2 sum_k (block term k) and the same single-qubit noise on every qubit.
struct MasterEquationSpec {
    int n_qubits = 0;
    double lambda = 0;
    std::vector<PauliString> block_terms;
    LindbladSpec noise;
    std::vector<int> noisy_qubits;  // empty means noise on every qubit

    void validate() const {
        if (n_qubits < 1 || n_qubits > 12)
            throw std::invalid_argument("MasterEquationSpec: n_qubits must be in [1, 12]");
        noise.validate();
        for (const auto& term : block_terms) {
            if (term.width() != n_qubits)
                throw std::invalid_argument("MasterEquationSpec: term width mismatch");
            if (!term.is_hermitian())
                throw std::invalid_argument("MasterEquationSpec: Hamiltonian term not Hermitian");
        }
        for (int q : noisy_qubits)
            if (q < 0 || q >= n_qubits)
                throw std::invalid_argument("MasterEquationSpec: noisy qubit index out of range");
    }

    ComplexMatrix dense_hamiltonian() const {
        validate();
        ComplexMatrix h(1 << n_qubits);
        for (const auto& term : block_terms) h += dense(term);
        h *= 0.5;
        return h;
    }
};

struct TrotterResult {
    ComplexMatrix state;
    int steps = 0;
    double dt = 0;
    /// False when gamma^2 t^2 N exceeds 0.01 and the short-time factorized
    /// picture is no longer trustworthy.
    bool short_time_ok = true;
};

/// First-order (Lie) splitting of the master equation: per step of length
/// t/steps, the exact unitary substep runs first, then the exact per-qubit
/// Pauli channel of the noise generator over the same duration. Block terms act
/// on disjoint qubits, so the unitary substep is a product of exact Pauli
/// rotations.
inline TrotterResult trotter_solve(const MasterEquationSpec& spec, const ComplexMatrix& rho0,
                                   double t, int steps) {
    spec.validate();
    if (steps < 1) throw std::invalid_argument("trotter_solve: steps must be >= 1");
    if (t < 0) throw std::invalid_argument("trotter_solve: t must be >= 0");
    if (rho0.dim != (1 << spec.n_qubits))
        throw std::invalid_argument("trotter_solve: state dimension mismatch");

    const double dt = t / steps;
    const double angle = 0.5 * spec.lambda * dt;  // e^{-i lambda dt H}, H = 1/2 sum P_k
    const bool noisy = spec.noise.gamma > 0;
    const PauliChannel step_channel =
        noisy ? PauliChannel::from_lindblad(spec.noise, dt) : PauliChannel::identity();

    std::vector<int> targets = spec.noisy_qubits;
    if (targets.empty())
        for (int q = 0; q < spec.n_qubits; ++q) targets.push_back(q);

    ComplexMatrix rho = rho0;
    for (int s = 0; s < steps; ++s) {
        for (const auto& term : spec.block_terms) rho = evolve_unitary(rho, term, angle);
        if (noisy)
            for (int q : targets) rho = apply_pauli_channel(rho, step_channel, q);
    }

    TrotterResult result;
    result.state = std::move(rho);
    result.steps = steps;
    result.dt = dt;
    const double n_blocks = static_cast<double>(spec.block_terms.size());
    result.short_time_ok =
        spec.noise.gamma * spec.noise.gamma * t * t * std::max(1.0, n_blocks) <= 0.01;
    return result;
}

}  // namespace qecmet
