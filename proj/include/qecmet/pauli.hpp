#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qecmet {

/// Phase-tracked tensor product of single-qubit Pauli operators.
///
/// Internally stored in symplectic form: the operator value is
/// i^phase * prod_j X_j^{x_j} Z_j^{z_j}, with one x/z bit per qubit and a
/// phase exponent mod 4. The letter Y corresponds to x=z=1 together with one
/// factor of i folded into the phase (Y = i X Z). All operations are exact.
class PauliString {
public:
    explicit PauliString(int width) : width_(width) {
        if (width < 1 || width > 63)
            throw std::invalid_argument("PauliString: width must be in [1, 63]");
    }

    static PauliString identity(int width) { return PauliString(width); }

    static PauliString phased_identity(int width, int i_exponent) {
        PauliString p(width);
        p.phase_ = ((i_exponent % 4) + 4) & 3;
        return p;
    }

    /// Single Pauli letter ('I','X','Y','Z') acting on one qubit.
    static PauliString single(int width, int qubit, char letter) {
        PauliString p(width);
        p.check_qubit(qubit);
        switch (letter) {
            case 'I': break;
            case 'X': p.x_ |= bit(qubit); break;
            case 'Z': p.z_ |= bit(qubit); break;
            case 'Y':
                p.x_ |= bit(qubit);
                p.z_ |= bit(qubit);
                p.phase_ = 1;  // Y = i X Z
                break;
            default: throw std::invalid_argument("PauliString: unknown letter");
        }
        return p;
    }

    /// Parse textual notation such as "+ZXX", "-iYI" or "XZ" (implicit +).
    static PauliString from_string(std::string_view text) {
        int disp = 0;
        size_t i = 0;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') disp = 2;
            ++i;
        }
        if (i < text.size() && text[i] == 'i') {
            disp = (disp + 1) & 3;
            ++i;
        }
        std::string_view letters = text.substr(i);
        if (letters.empty()) throw std::invalid_argument("PauliString: no letters");
        PauliString p(static_cast<int>(letters.size()));
        int ys = 0;
        for (int q = 0; q < p.width_; ++q) {
            switch (letters[q]) {
                case 'I': break;
                case 'X': p.x_ |= bit(q); break;
                case 'Z': p.z_ |= bit(q); break;
                case 'Y': p.x_ |= bit(q); p.z_ |= bit(q); ++ys; break;
                default: throw std::invalid_argument("PauliString: unknown letter");
            }
        }
        p.phase_ = (disp + ys) & 3;
        return p;
    }

    int width() const { return width_; }
    bool x_bit(int qubit) const { check_qubit(qubit); return (x_ >> qubit) & 1u; }
    bool z_bit(int qubit) const { check_qubit(qubit); return (z_ >> qubit) & 1u; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }

    /// Exponent of i in the X-Z normal form (not the displayed coefficient).
    int xz_phase_exponent() const { return phase_; }

    char letter(int qubit) const {
        const bool x = x_bit(qubit), z = z_bit(qubit);
        return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }

    /// Exponent e of the displayed coefficient i^e relative to the letters,
    /// i.e. the operator equals i^e * (letter_0 x letter_1 x ...).
    int display_exponent() const {
        return (phase_ + 4 - (std::popcount(x_ & z_) & 3)) & 3;
    }

    std::complex<double> coefficient() const {
        static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[display_exponent()];
    }

    bool is_hermitian() const { return (display_exponent() & 1) == 0; }
    bool is_identity_letters() const { return x_ == 0 && z_ == 0; }
    int weight() const { return std::popcount(x_ | z_); }

    PauliString& operator*=(const PauliString& rhs) {
        if (rhs.width_ != width_)
            throw std::invalid_argument("PauliString: width mismatch in product");
        phase_ = (phase_ + rhs.phase_ + 2 * (std::popcount(z_ & rhs.x_) & 1)) & 3;
        x_ ^= rhs.x_;
        z_ ^= rhs.z_;
        return *this;
    }

    friend PauliString operator*(PauliString lhs, const PauliString& rhs) {
        lhs *= rhs;
        return lhs;
    }

    PauliString adjoint() const {
        PauliString p(*this);
        p.phase_ = (4 - phase_ + 2 * (std::popcount(x_ & z_) & 1)) & 3;
        return p;
    }

    bool operator==(const PauliString& rhs) const {
        return width_ == rhs.width_ && x_ == rhs.x_ && z_ == rhs.z_ && phase_ == rhs.phase_;
    }
    bool operator!=(const PauliString& rhs) const { return !(*this == rhs); }

    std::string str() const {
        static const char* prefix[4] = {"+", "+i", "-", "-i"};
        std::string s = prefix[display_exponent()];
        for (int q = 0; q < width_; ++q) s.push_back(letter(q));
        return s;
    }

private:
    static std::uint64_t bit(int q) { return std::uint64_t{1} << q; }
    void check_qubit(int q) const {
        if (q < 0 || q >= width_) throw std::out_of_range("PauliString: qubit index");
    }

    int width_;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int phase_ = 0;  // exponent of i in the X-Z normal form
};

inline PauliString pauli_multiply(const PauliString& a, const PauliString& b) { return a * b; }

struct CliffordGate {
    enum class Kind { Hadamard, ControlledPhase, ControlledX };

    Kind kind;
    int a;       // single target for Hadamard, first target otherwise
    int b = -1;  // second target for two-qubit gates

    static CliffordGate hadamard(int t) { return {Kind::Hadamard, t, -1}; }
    static CliffordGate controlled_phase(int t1, int t2) { return {Kind::ControlledPhase, t1, t2}; }
    static CliffordGate controlled_x(int t1, int t2) { return {Kind::ControlledX, t1, t2}; }

    bool two_qubit() const { return kind != Kind::Hadamard; }

    void validate(int width) const {
        if (a < 0 || a >= width) throw std::invalid_argument("CliffordGate: target out of range");
        if (two_qubit()) {
            if (b < 0 || b >= width) throw std::invalid_argument("CliffordGate: target out of range");
            if (a == b) throw std::invalid_argument("CliffordGate: targets must be distinct");
        } else if (b != -1) {
            throw std::invalid_argument("CliffordGate: Hadamard takes one target");
        }
    }
};

struct CliffordCircuit {
    int width;
    std::vector<CliffordGate> gates;

    explicit CliffordCircuit(int w) : width(w) {
        if (w < 1) throw std::invalid_argument("CliffordCircuit: width must be >= 1");
    }

    CliffordCircuit& add(const CliffordGate& g) {
        g.validate(width);
        gates.push_back(g);
        return *this;
    }

    /// All gates in the set are involutions, so the inverse is the reversal.
    CliffordCircuit inverse() const {
        CliffordCircuit inv(width);
        inv.gates.assign(gates.rbegin(), gates.rend());
        return inv;
    }

    CliffordCircuit then(const CliffordCircuit& next) const {
        if (next.width != width) throw std::invalid_argument("CliffordCircuit: width mismatch");
        CliffordCircuit out(*this);
        out.gates.insert(out.gates.end(), next.gates.begin(), next.gates.end());
        return out;
    }
};

namespace detail {

// Conjugation images of the X/Z generators under one gate. Every image has
// trivial phase, so sign bookkeeping is left entirely to the group product.
inline PauliString image_of_x(int width, int q, const CliffordGate& g) {
    using Kind = CliffordGate::Kind;
    switch (g.kind) {
        case Kind::Hadamard:
            if (q == g.a) return PauliString::single(width, q, 'Z');
            break;
        case Kind::ControlledPhase:
            if (q == g.a)
                return PauliString::single(width, g.a, 'X') * PauliString::single(width, g.b, 'Z');
            if (q == g.b)
                return PauliString::single(width, g.b, 'X') * PauliString::single(width, g.a, 'Z');
            break;
        case Kind::ControlledX:
            break;  // X operators commute with CX
    }
    return PauliString::single(width, q, 'X');
}

inline PauliString image_of_z(int width, int q, const CliffordGate& g) {
    using Kind = CliffordGate::Kind;
    switch (g.kind) {
        case Kind::Hadamard:
            if (q == g.a) return PauliString::single(width, q, 'X');
            break;
        case Kind::ControlledPhase:
            break;  // Z operators commute with CP
        case Kind::ControlledX:
            if (q == g.a)
                return PauliString::single(width, g.a, 'Z') * PauliString::single(width, g.b, 'X');
            if (q == g.b)
                return PauliString::single(width, g.b, 'Z') * PauliString::single(width, g.a, 'X');
            break;
    }
    return PauliString::single(width, q, 'Z');
}

}  // namespace detail

/// g p g^dagger for a single gate, computed through the generator images.
inline PauliString conjugate_by_gate(const PauliString& p, const CliffordGate& g) {
    g.validate(p.width());
    PauliString acc = PauliString::phased_identity(p.width(), p.xz_phase_exponent());
    for (int q = 0; q < p.width(); ++q) {
        if (p.x_bit(q)) acc *= detail::image_of_x(p.width(), q, g);
        if (p.z_bit(q)) acc *= detail::image_of_z(p.width(), q, g);
    }
    return acc;
}

/// Conjugation by a circuit, first gate innermost: (gL...g1) p (gL...g1)^dagger.
inline PauliString conjugate_by_circuit(const PauliString& p, const CliffordCircuit& c) {
    if (c.width != p.width())
        throw std::invalid_argument("conjugate_by_circuit: width mismatch");
    PauliString out = p;
    for (const auto& g : c.gates) out = conjugate_by_gate(out, g);
    return out;
}

/// Block-mapping circuit V = prod_{j=2..m} CX(1, j) on m qubits (empty for m=1).
inline CliffordCircuit build_block_mapper(int m) {
    if (m < 1) throw std::invalid_argument("build_block_mapper: m must be >= 1");
    CliffordCircuit v(m);
    for (int j = 1; j < m; ++j) v.add(CliffordGate::controlled_x(0, j));
    return v;
}

struct MappingReport {
    int m;
    bool hamiltonian_identity_ok;
    std::vector<bool> x_identity_ok;
    std::string mapped_hamiltonian;

    bool all_ok() const {
        if (!hamiltonian_identity_ok) return false;
        for (bool ok : x_identity_ok)
            if (!ok) return false;
        return true;
    }
};

/// Checks the two conjugation identities of the block mapper: Z on qubit 1
/// maps to Z x X^{m-1} with phase +1, and every single-qubit X is fixed.
inline MappingReport verify_scenario2_mapping(int m) {
    if (m < 1) throw std::invalid_argument("verify_scenario2_mapping: m must be >= 1");
    const CliffordCircuit v = build_block_mapper(m);

    PauliString expected = PauliString::single(m, 0, 'Z');
    for (int j = 1; j < m; ++j) expected *= PauliString::single(m, j, 'X');

    MappingReport report;
    report.m = m;
    const PauliString mapped = conjugate_by_circuit(PauliString::single(m, 0, 'Z'), v);
    report.mapped_hamiltonian = mapped.str();
    report.hamiltonian_identity_ok = (mapped == expected);
    report.x_identity_ok.resize(m);
    for (int j = 0; j < m; ++j) {
        const PauliString xj = PauliString::single(m, j, 'X');
        report.x_identity_ok[j] = (conjugate_by_circuit(xj, v) == xj);
    }
    return report;
}

/// Circuit text form, one gate per line, qubits 1-indexed: "H 1", "CX 1 2".
inline std::string circuit_to_text(const CliffordCircuit& c) {
    std::ostringstream out;
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case CliffordGate::Kind::Hadamard: out << "H " << g.a + 1 << '\n'; break;
            case CliffordGate::Kind::ControlledPhase:
                out << "CP " << g.a + 1 << ' ' << g.b + 1 << '\n';
                break;
            case CliffordGate::Kind::ControlledX:
                out << "CX " << g.a + 1 << ' ' << g.b + 1 << '\n';
                break;
        }
    }
    return out.str();
}

inline CliffordCircuit circuit_from_text(std::string_view text, int width) {
    CliffordCircuit c(width);
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string op;
        ls >> op;
        if (op == "H") {
            int t;
            if (!(ls >> t)) throw std::invalid_argument("circuit_from_text: bad H line");
            c.add(CliffordGate::hadamard(t - 1));
        } else if (op == "CP" || op == "CX") {
            int t1, t2;
            if (!(ls >> t1 >> t2)) throw std::invalid_argument("circuit_from_text: bad gate line");
            c.add(op == "CP" ? CliffordGate::controlled_phase(t1 - 1, t2 - 1)
                             : CliffordGate::controlled_x(t1 - 1, t2 - 1));
        } else {
            throw std::invalid_argument("circuit_from_text: unknown gate '" + op + "'");
        }
    }
    return c;
}

}  // namespace qecmet
