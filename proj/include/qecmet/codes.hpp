#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qecmet/channels.hpp"
#include "qecmet/matrix.hpp"
#include "qecmet/pauli.hpp"

namespace qecmet {

enum class CodeKind { RepetitionPhase, FiveQubitGraph, Concatenated, TwoQubitDemo };

/// An error-correcting code together with its derived block size.
struct CodeSpec {
    CodeKind kind = CodeKind::RepetitionPhase;
    int m = 1;       // RepetitionPhase block size (odd)
    int levels = 1;  // Concatenated levels

    static CodeSpec repetition_phase(int m) {
        CodeSpec c{CodeKind::RepetitionPhase, m, 0};
        c.validate();
        return c;
    }
    static CodeSpec five_qubit_graph() { return {CodeKind::FiveQubitGraph, 5, 1}; }
    static CodeSpec concatenated(int levels) {
        CodeSpec c{CodeKind::Concatenated, 5, levels};
        c.validate();
        return c;
    }
    static CodeSpec two_qubit_demo() { return {CodeKind::TwoQubitDemo, 2, 0}; }

    void validate() const {
        switch (kind) {
            case CodeKind::RepetitionPhase:
                if (m < 1 || m % 2 == 0)
                    throw std::invalid_argument("CodeSpec: repetition block size must be odd and >= 1");
                break;
            case CodeKind::Concatenated:
                if (levels < 0) throw std::invalid_argument("CodeSpec: levels must be >= 0");
                break;
            default:
                break;
        }
    }

    int block_size() const {
        switch (kind) {
            case CodeKind::RepetitionPhase: return m;
            case CodeKind::FiveQubitGraph: return 5;
            case CodeKind::Concatenated: {
                int b = 1;
                for (int l = 0; l < levels; ++l) b *= 5;
                return b;
            }
            case CodeKind::TwoQubitDemo: return 2;
        }
        throw std::logic_error("CodeSpec: unreachable");
    }

    std::string name() const {
        switch (kind) {
            case CodeKind::RepetitionPhase: return "repetition-phase(m=" + std::to_string(m) + ")";
            case CodeKind::FiveQubitGraph: return "five-qubit-graph";
            case CodeKind::Concatenated: return "concatenated(levels=" + std::to_string(levels) + ")";
            case CodeKind::TwoQubitDemo: return "two-qubit-demo";
        }
        return "?";
    }
};

/// One projective-correction branch of the repetition-phase decoder.
struct SyndromeOutcome {
    std::vector<int> k_vector;  // length m, which qubits the correction flips
    PauliString correction;     // sigma_z on the set bits
};

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

/// 1 - p_L summed over the uncorrectable tail, stable for p near 1.
inline double logical_flip_tail(double p, int m) {
    if (p < 0 || p > 1) throw std::invalid_argument("logical_flip_tail: p must be in [0,1]");
    if (m < 1 || m % 2 == 0) throw std::invalid_argument("logical_flip_tail: m must be odd");
    const double q = 1 - p;
    double tail = 0;
    for (int k = m; k >= (m + 1) / 2; --k)
        tail += binomial(m, k) * std::pow(p, m - k) * std::pow(q, k);
    return tail;
}

/// p_L of the repetition-phase code: sum_{k=0}^{(m-1)/2} C(m,k) p^{m-k} (1-p)^k.
/// For p > 0.9 the complementary tail is summed instead to avoid cancellation.
inline double logical_flip_retention(double p, int m) {
    if (p < 0 || p > 1) throw std::invalid_argument("logical_flip_retention: p must be in [0,1]");
    if (m < 1 || m % 2 == 0)
        throw std::invalid_argument("logical_flip_retention: m must be odd and >= 1");
    if (p > 0.9) return 1.0 - logical_flip_tail(p, m);
    const double q = 1 - p;
    double sum = 0;
    for (int k = 0; k <= (m - 1) / 2; ++k)
        sum += binomial(m, k) * std::pow(p, m - k) * std::pow(q, k);
    return sum;
}

/// Leading-order Taylor value 1 - C(m,(m+1)/2) (1-p)^{(m+1)/2}; only valid in
/// the small-error regime, hence the hard 1-p <= 0.1 gate.
inline double logical_retention_leading_order(double p, int m) {
    if (m < 1 || m % 2 == 0)
        throw std::invalid_argument("logical_retention_leading_order: m must be odd");
    if (1 - p > 0.1)
        throw std::invalid_argument("logical_retention_leading_order: requires 1-p <= 0.1");
    return 1.0 - binomial(m, (m + 1) / 2) * std::pow(1 - p, (m + 1) / 2.0);
}

/// Effective logical dephasing rate, defined through 2 p_L(t) - 1 = e^{-gamma_L t}.
inline double logical_noise_rate(double gamma, int m, double t) {
    if (gamma < 0) throw std::invalid_argument("logical_noise_rate: gamma must be >= 0");
    if (t <= 0) throw std::invalid_argument("logical_noise_rate: t must be > 0");
    const double p = dephasing_flip_probability(gamma, t);
    const double pl = logical_flip_retention(p, m);
    const double coherence = 2 * pl - 1;
    if (coherence <= 0)
        throw std::invalid_argument("logical_noise_rate: logical retention at or below 1/2");
    // log1p on the tail keeps precision when p_L is within 1e-15 of 1.
    const double tail = 2 * logical_flip_tail(p, m);
    return -std::log1p(-tail) / t;
}

/// q_L = q^5 + 5 q^4 (1-q): no logical error iff at most one qubit of the
/// five-qubit block was hit.
inline double five_qubit_logical_q(double q) {
    if (q < 0 || q > 1) throw std::invalid_argument("five_qubit_logical_q: q must be in [0,1]");
    return std::pow(q, 5) + 5 * std::pow(q, 4) * (1 - q);
}

inline double concatenated_q(double q, int levels) {
    if (levels < 0) throw std::invalid_argument("concatenated_q: levels must be >= 0");
    double out = q;
    for (int l = 0; l < levels; ++l) out = five_qubit_logical_q(out);
    return out;
}

/// Depolarizing-channel conversion between the channel parameter p and the
/// per-qubit no-error probability q = (1+3p)/4.
inline double depol_no_error_probability(double p) { return (1 + 3 * p) / 4; }
inline double depol_parameter_from_no_error(double q) { return (4 * q - 1) / 3; }

/// The unique fixed point of q_L(q) = q in (0.5, 1); concatenation improves
/// the block above it and degrades below it.
inline double five_qubit_threshold() {
    double lo = 0.5, hi = 1.0 - 1e-12;
    // f(q) - q changes sign once in (0.5, 1): negative at 0.5, positive near 1.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (five_qubit_logical_q(mid) - mid < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

inline StateVector repetition_codeword(int m, bool one) {
    // (|0x>^m + |1x>^m)/sqrt2 is uniform over even-parity strings; the minus
    // combination is uniform over odd-parity strings.
    StateVector s(1 << m);
    const double amp = std::pow(2.0, -(m - 1) / 2.0);
    for (int c = 0; c < s.dim; ++c) {
        const int parity = std::popcount(static_cast<unsigned>(c)) & 1;
        if (parity == (one ? 1 : 0)) s.amp[c] = amp;
    }
    return s;
}

inline StateVector ring_graph_state() {
    // |G> = prod_{edges} CP |+>^5 on the 5-cycle; amplitude sign counts edges
    // inside the support of the basis string.
    const int m = 5;
    StateVector s(1 << m);
    const double amp = std::pow(2.0, -m / 2.0);
    for (int c = 0; c < s.dim; ++c) {
        int edges = 0;
        for (int j = 0; j < m; ++j) {
            const int k = (j + 1) % m;
            const int bj = (c >> (m - 1 - j)) & 1;
            const int bk = (c >> (m - 1 - k)) & 1;
            edges += bj & bk;
        }
        s.amp[c] = (edges & 1) ? -amp : amp;
    }
    return s;
}

inline StateVector graph_codeword(bool one) {
    const StateVector g = ring_graph_state();
    StateVector s(g.dim);
    const double r = 1.0 / std::sqrt(2.0);
    for (int c = 0; c < g.dim; ++c) {
        const int parity = std::popcount(static_cast<unsigned>(c)) & 1;
        const double zsign = parity ? -1.0 : 1.0;  // sigma_z^{x5} phase
        s.amp[c] = r * (g.amp[c] + (one ? -1.0 : 1.0) * zsign * g.amp[c]);
    }
    return s;
}

}  // namespace detail

/// Codeword pair (|0_L>, |1_L>) as dense state vectors.
inline std::pair<StateVector, StateVector> encode_codewords(const CodeSpec& code) {
    code.validate();
    if (code.block_size() > 12)
        throw std::invalid_argument("encode_codewords: block too large for dense representation");
    switch (code.kind) {
        case CodeKind::RepetitionPhase:
            return {detail::repetition_codeword(code.m, false),
                    detail::repetition_codeword(code.m, true)};
        case CodeKind::FiveQubitGraph:
            return {detail::graph_codeword(false), detail::graph_codeword(true)};
        case CodeKind::Concatenated: {
            if (code.levels == 0)
                return {StateVector::basis(2, 0), StateVector::basis(2, 1)};
            if (code.levels == 1)
                return {detail::graph_codeword(false), detail::graph_codeword(true)};
            throw std::invalid_argument("encode_codewords: block too large for dense representation");
        }
        case CodeKind::TwoQubitDemo: {
            StateVector zero(4), one(4);
            const double r = 1.0 / std::sqrt(2.0);
            zero.amp[0b00] = r;  // |0>|0x> = (|00> + |01>)/sqrt2
            zero.amp[0b01] = r;
            one.amp[0b00] = r;   // |0>|1x> = (|00> - |01>)/sqrt2
            one.amp[0b01] = -r;
            return {zero, one};
        }
    }
    throw std::logic_error("encode_codewords: unreachable");
}

/// Block operator acting as the logical phase flip: +1 on |0_L>, -1 on |1_L>.
inline PauliString logical_z_operator(const CodeSpec& code) {
    const int b = code.block_size();
    switch (code.kind) {
        case CodeKind::RepetitionPhase:
        case CodeKind::FiveQubitGraph:
        case CodeKind::Concatenated: {
            auto p = PauliString::single(b, 0, 'Z');
            for (int q = 1; q < b; ++q) p *= PauliString::single(b, q, 'Z');
            return p;
        }
        case CodeKind::TwoQubitDemo:
            return PauliString::from_string("ZX");
    }
    throw std::logic_error("logical_z_operator: unreachable");
}

/// The correctable error set: applying any member maps the codespace to a
/// distinct orthogonal subspace, and the decoder undoes exactly these.
inline std::vector<PauliString> correction_set(const CodeSpec& code) {
    code.validate();
    const int b = code.block_size();
    std::vector<PauliString> set;
    switch (code.kind) {
        case CodeKind::RepetitionPhase: {
            for (std::uint32_t mask = 0; mask < (1u << b); ++mask) {
                if (std::popcount(mask) > (b - 1) / 2) continue;
                auto p = PauliString::identity(b);
                for (int q = 0; q < b; ++q)
                    if ((mask >> q) & 1) p *= PauliString::single(b, q, 'Z');
                set.push_back(p);
            }
            break;
        }
        case CodeKind::Concatenated:
            if (code.levels > 1)
                throw std::invalid_argument("correction_set: dense decoder only at level <= 1");
            if (code.levels == 0) {
                set.push_back(PauliString::identity(1));
                break;
            }
            [[fallthrough]];
        case CodeKind::FiveQubitGraph: {
            set.push_back(PauliString::identity(b));
            for (int q = 0; q < b; ++q)
                for (char axis : {'X', 'Y', 'Z'})
                    set.push_back(PauliString::single(b, q, axis));
            break;
        }
        case CodeKind::TwoQubitDemo:
            set.push_back(PauliString::identity(2));
            set.push_back(PauliString::from_string("XI"));
            break;
    }
    return set;
}

/// Repetition-phase decoder branches as explicit syndrome outcomes.
inline std::vector<SyndromeOutcome> repetition_syndromes(int m) {
    const auto set = correction_set(CodeSpec::repetition_phase(m));
    std::vector<SyndromeOutcome> out;
    out.reserve(set.size());
    for (const auto& corr : set) {
        std::vector<int> kv(m);
        for (int q = 0; q < m; ++q) kv[q] = corr.z_bit(q) ? 1 : 0;
        out.push_back(SyndromeOutcome{std::move(kv), corr});
    }
    return out;
}

inline ComplexMatrix codespace_projector(const CodeSpec& code) {
    const auto [zero, one] = encode_codewords(code);
    return outer(zero) + outer(one);
}

/// Projective syndrome correction as a channel on one block:
/// rho -> sum_c (P E_c) rho (E_c P), with P the codespace projector and E_c
/// running over the correctable set. The branches tile the block space, so
/// the map is trace preserving and its output lives in the codespace.
inline ComplexMatrix syndrome_correct(const ComplexMatrix& rho_block, const CodeSpec& code) {
    const int b = code.block_size();
    if (rho_block.dim != (1 << b))
        throw std::invalid_argument("syndrome_correct: dimension does not match block size");
    const ComplexMatrix proj = codespace_projector(code);
    ComplexMatrix out(rho_block.dim);
    for (const auto& corr : correction_set(code)) {
        // (P E) rho (E P), with E rho E computed by fast index arithmetic.
        const ComplexMatrix sandwiched = pauli_sandwich(corr, rho_block);
        out += matmul(matmul(proj, sandwiched), proj);
    }
    return out;
}

/// Applies syndrome correction independently on each of n contiguous blocks.
inline ComplexMatrix syndrome_correct_blocks(const ComplexMatrix& rho, const CodeSpec& code,
                                             int n_blocks) {
    const int b = code.block_size();
    const int n_qubits = qubit_count_for_dim(rho.dim);
    if (n_qubits != b * n_blocks)
        throw std::invalid_argument("syndrome_correct_blocks: register size mismatch");

    const ComplexMatrix proj = codespace_projector(code);
    ComplexMatrix state = rho;
    for (int blk = 0; blk < n_blocks; ++blk) {
        std::vector<int> targets(b);
        for (int q = 0; q < b; ++q) targets[q] = blk * b + q;
        const ComplexMatrix proj_full = embed_operator(proj, targets, n_qubits);
        ComplexMatrix next(rho.dim);
        for (const auto& corr : correction_set(code)) {
            auto corr_full = PauliString::identity(n_qubits);
            for (int q = 0; q < b; ++q) {
                const char l = corr.letter(q);
                if (l != 'I') corr_full *= PauliString::single(n_qubits, blk * b + q, l);
            }
            const ComplexMatrix sandwiched = pauli_sandwich(corr_full, state);
            next += matmul(matmul(proj_full, sandwiched), proj_full);
        }
        state = std::move(next);
    }
    return state;
}

/// Logical GHZ state (|0_L>^N + |1_L>^N)/sqrt2 over N code blocks.
inline StateVector encode_logical_ghz(const CodeSpec& code, int n_blocks) {
    if (n_blocks < 1) throw std::invalid_argument("encode_logical_ghz: need at least one block");
    const auto [zero, one] = encode_codewords(code);
    StateVector z = zero, o = one;
    for (int k = 1; k < n_blocks; ++k) {
        z = kron(z, zero);
        o = kron(o, one);
    }
    StateVector ghz(z.dim);
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < z.dim; ++i) ghz.amp[i] = r * (z.amp[i] + o.amp[i]);
    return ghz;
}

enum class NoiseRegime { Exact, LeadingOrder };

/// Derived logical channel parameters of a code under given physical noise.
struct LogicalNoiseReport {
    double p_logical = 1;
    std::optional<double> gamma_logical;
    NoiseRegime regime = NoiseRegime::Exact;
};

inline LogicalNoiseReport repetition_logical_noise(double p, int m,
                                                   std::optional<double> gamma = std::nullopt,
                                                   std::optional<double> t = std::nullopt) {
    LogicalNoiseReport r;
    r.p_logical = logical_flip_retention(p, m);
    r.regime = NoiseRegime::Exact;
    if (gamma && t) r.gamma_logical = logical_noise_rate(*gamma, m, *t);
    return r;
}

}  // namespace qecmet
