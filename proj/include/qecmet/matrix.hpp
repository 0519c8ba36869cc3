#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qecmet/pauli.hpp"

namespace qecmet {

using cdouble = std::complex<double>;

/// Dense square complex matrix, row-major. Small dimensions only (<= 2^12);
/// density matrices and Hamiltonians in the brute-force oracle live here.
struct ComplexMatrix {
    int dim = 0;
    std::vector<cdouble> a;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int d) : dim(d), a(static_cast<size_t>(d) * d) {
        if (d < 1) throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
    }

    static ComplexMatrix identity(int d) {
        ComplexMatrix m(d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    cdouble& operator()(int r, int c) { return a[static_cast<size_t>(r) * dim + c]; }
    const cdouble& operator()(int r, int c) const { return a[static_cast<size_t>(r) * dim + c]; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
        check_same(rhs);
        for (size_t i = 0; i < a.size(); ++i) a[i] += rhs.a[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
        check_same(rhs);
        for (size_t i = 0; i < a.size(); ++i) a[i] -= rhs.a[i];
        return *this;
    }
    ComplexMatrix& operator*=(cdouble s) {
        for (auto& v : a) v *= s;
        return *this;
    }
    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, cdouble s) { return lhs *= s; }
    friend ComplexMatrix operator*(cdouble s, ComplexMatrix rhs) { return rhs *= s; }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    cdouble trace() const {
        cdouble t = 0;
        for (int i = 0; i < dim; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& v : a) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_hermitian(double tol) const {
        for (int r = 0; r < dim; ++r)
            for (int c = r; c < dim; ++c)
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
        return true;
    }

private:
    void check_same(const ComplexMatrix& rhs) const {
        if (rhs.dim != dim) throw std::invalid_argument("ComplexMatrix: dimension mismatch");
    }
};

inline ComplexMatrix matmul(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("matmul: dimension mismatch");
    const int n = x.dim;
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cdouble xik = x(i, k);
            if (xik == cdouble{0, 0}) continue;
            const cdouble* yrow = &y.a[static_cast<size_t>(k) * n];
            cdouble* orow = &out.a[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) orow[j] += xik * yrow[j];
        }
    }
    return out;
}

inline double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.dim != y.dim) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0;
    for (size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix out(x.dim * y.dim);
    for (int rx = 0; rx < x.dim; ++rx)
        for (int cx = 0; cx < x.dim; ++cx) {
            const cdouble v = x(rx, cx);
            if (v == cdouble{0, 0}) continue;
            for (int ry = 0; ry < y.dim; ++ry)
                for (int cy = 0; cy < y.dim; ++cy)
                    out(rx * y.dim + ry, cx * y.dim + cy) = v * y(ry, cy);
        }
    return out;
}

/// Unit-norm complex amplitude vector. Qubit 0 is the leftmost ket factor,
/// i.e. the most significant bit of the basis index.
struct StateVector {
    int dim = 0;
    std::vector<cdouble> amp;

    StateVector() = default;
    explicit StateVector(int d) : dim(d), amp(d) {}

    static StateVector basis(int d, int index) {
        StateVector s(d);
        s.amp[index] = 1.0;
        return s;
    }

    double norm() const {
        double n2 = 0;
        for (const auto& v : amp) n2 += std::norm(v);
        return std::sqrt(n2);
    }

    StateVector& normalize() {
        const double n = norm();
        if (n == 0) throw std::invalid_argument("StateVector: zero norm");
        for (auto& v : amp) v /= n;
        return *this;
    }

    cdouble inner(const StateVector& rhs) const {
        if (rhs.dim != dim) throw std::invalid_argument("StateVector: dimension mismatch");
        cdouble s = 0;
        for (int i = 0; i < dim; ++i) s += std::conj(amp[i]) * rhs.amp[i];
        return s;
    }
};

inline StateVector kron(const StateVector& x, const StateVector& y) {
    StateVector out(x.dim * y.dim);
    for (int i = 0; i < x.dim; ++i)
        for (int j = 0; j < y.dim; ++j) out.amp[i * y.dim + j] = x.amp[i] * y.amp[j];
    return out;
}

inline ComplexMatrix outer(const StateVector& psi) {
    ComplexMatrix m(psi.dim);
    for (int r = 0; r < psi.dim; ++r)
        for (int c = 0; c < psi.dim; ++c) m(r, c) = psi.amp[r] * std::conj(psi.amp[c]);
    return m;
}

inline int qubit_count_for_dim(int dim) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw std::invalid_argument("dimension is not a power of two");
    return n;
}

namespace detail {

// Index-space action of a Pauli string on n qubits: P|i> = u(i) |i ^ xm>,
// with u(i) = i^e * (-1)^{popcount(zm & i)}. Qubit q sits at bit (n-1-q).
struct PauliAction {
    std::uint64_t xm = 0, zm = 0;
    cdouble u0;  // i^e

    PauliAction(const PauliString& p, int n_qubits) {
        if (p.width() != n_qubits)
            throw std::invalid_argument("PauliAction: width mismatch");
        for (int q = 0; q < n_qubits; ++q) {
            const std::uint64_t b = std::uint64_t{1} << (n_qubits - 1 - q);
            if (p.x_bit(q)) xm |= b;
            if (p.z_bit(q)) zm |= b;
        }
        static const cdouble table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        u0 = table[p.xz_phase_exponent() & 3];
    }

    cdouble phase(std::uint64_t i) const {
        return (std::popcount(zm & i) & 1) ? -u0 : u0;
    }
};

}  // namespace detail

inline ComplexMatrix dense(const PauliString& p) {
    const int n = p.width();
    const int d = 1 << n;
    detail::PauliAction act(p, n);
    ComplexMatrix m(d);
    for (int c = 0; c < d; ++c) m(static_cast<int>(c ^ act.xm), c) = act.phase(c);
    return m;
}

/// P rho (left multiplication by a Pauli string).
inline ComplexMatrix pauli_left(const PauliString& p, const ComplexMatrix& rho) {
    const int n = qubit_count_for_dim(rho.dim);
    detail::PauliAction act(p, n);
    ComplexMatrix out(rho.dim);
    for (int r = 0; r < rho.dim; ++r) {
        const std::uint64_t rs = static_cast<std::uint64_t>(r) ^ act.xm;
        const cdouble f = act.phase(rs);
        for (int c = 0; c < rho.dim; ++c) out(r, c) = f * rho(static_cast<int>(rs), c);
    }
    return out;
}

/// rho P (right multiplication by a Pauli string).
inline ComplexMatrix pauli_right(const ComplexMatrix& rho, const PauliString& p) {
    const int n = qubit_count_for_dim(rho.dim);
    detail::PauliAction act(p, n);
    ComplexMatrix out(rho.dim);
    for (int c = 0; c < rho.dim; ++c) {
        const cdouble f = act.phase(c);
        const int cs = static_cast<int>(static_cast<std::uint64_t>(c) ^ act.xm);
        for (int r = 0; r < rho.dim; ++r) out(r, c) = rho(r, cs) * f;
    }
    return out;
}

/// P rho P for Hermitian P (sandwich used by Pauli channels).
inline ComplexMatrix pauli_sandwich(const PauliString& p, const ComplexMatrix& rho) {
    if (!p.is_hermitian()) throw std::invalid_argument("pauli_sandwich: non-Hermitian Pauli");
    const int n = qubit_count_for_dim(rho.dim);
    detail::PauliAction act(p, n);
    ComplexMatrix out(rho.dim);
    for (int r = 0; r < rho.dim; ++r) {
        const std::uint64_t rs = static_cast<std::uint64_t>(r) ^ act.xm;
        const cdouble fr = act.phase(rs);
        for (int c = 0; c < rho.dim; ++c) {
            const cdouble fc = act.phase(c);
            out(r, c) = fr * rho(static_cast<int>(rs), static_cast<int>(static_cast<std::uint64_t>(c) ^ act.xm)) * fc;
        }
    }
    return out;
}

/// Embeds a k-qubit operator acting on the given qubits into the n-qubit space.
inline ComplexMatrix embed_operator(const ComplexMatrix& g, const std::vector<int>& targets,
                                    int n_qubits) {
    const int k = static_cast<int>(targets.size());
    if (g.dim != (1 << k)) throw std::invalid_argument("embed_operator: size mismatch");
    for (int t : targets)
        if (t < 0 || t >= n_qubits) throw std::invalid_argument("embed_operator: target out of range");
    const int d = 1 << n_qubits;
    ComplexMatrix out(d);
    std::uint64_t tmask = 0;
    for (int t : targets) tmask |= std::uint64_t{1} << (n_qubits - 1 - t);
    auto sub_index = [&](std::uint64_t full) {
        int s = 0;
        for (int j = 0; j < k; ++j)
            s = (s << 1) | static_cast<int>((full >> (n_qubits - 1 - targets[j])) & 1u);
        return s;
    };
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            if ((static_cast<std::uint64_t>(r) & ~tmask) != (static_cast<std::uint64_t>(c) & ~tmask))
                continue;
            out(r, c) = g(sub_index(r), sub_index(c));
        }
    }
    return out;
}

inline ComplexMatrix dense_gate(const CliffordGate& g, int n_qubits) {
    g.validate(n_qubits);
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix had(2);
    had(0, 0) = r; had(0, 1) = r; had(1, 0) = r; had(1, 1) = -r;
    ComplexMatrix cp(4);
    cp(0, 0) = 1; cp(1, 1) = 1; cp(2, 2) = 1; cp(3, 3) = -1;
    switch (g.kind) {
        case CliffordGate::Kind::Hadamard:
            return embed_operator(had, {g.a}, n_qubits);
        case CliffordGate::Kind::ControlledPhase:
            return embed_operator(cp, {g.a, g.b}, n_qubits);
        case CliffordGate::Kind::ControlledX: {
            const ComplexMatrix hh = kron(had, had);
            const ComplexMatrix cx = matmul(matmul(hh, cp), hh);
            return embed_operator(cx, {g.a, g.b}, n_qubits);
        }
    }
    throw std::logic_error("dense_gate: unreachable");
}

/// Full unitary of a circuit; first gate applied first (rightmost factor).
inline ComplexMatrix dense_unitary(const CliffordCircuit& c) {
    ComplexMatrix u = ComplexMatrix::identity(1 << c.width);
    for (const auto& g : c.gates) u = matmul(dense_gate(g, c.width), u);
    return u;
}

struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // orthonormal columns, same order

    StateVector eigenvector(int k) const {
        StateVector v(eigenvectors.dim);
        for (int r = 0; r < eigenvectors.dim; ++r) v.amp[r] = eigenvectors(r, k);
        return v;
    }
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws if the input is not Hermitian within 1e-10 (relative to its scale)
/// or if the sweep budget is exhausted before convergence.
inline HermitianSpectrum hermitian_eig(const ComplexMatrix& m_in, int max_sweeps = 100) {
    const int n = m_in.dim;
    const double scale = std::max(1.0, m_in.max_abs());
    if (!m_in.is_hermitian(1e-10 * scale))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

    // Work on the symmetrized copy to suppress representation noise.
    ComplexMatrix a(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a(r, c) = 0.5 * (m_in(r, c) + std::conj(m_in(c, r)));

    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&]() {
        double s = 0;
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) s += std::norm(a(r, c));
        return std::sqrt(2.0 * s);
    };

    const double tol = 1e-14 * scale * n;
    bool converged = (n == 1) || off_norm() <= tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cdouble apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) { a(p, q) = a(q, p) = 0; continue; }

                // Factor the phase, then a real Jacobi rotation on [[app,|apq|],[|apq|,aqq]].
                const cdouble eiphi = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (app - aqq) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Column rotation J: col_p' = c*col_p + s*conj(eiphi)*col_q,
                //                    col_q' = -s*eiphi*col_p + c*col_q   (then rows by J^dagger).
                const cdouble sp = s * std::conj(eiphi);
                const cdouble sq = s * eiphi;
                for (int r = 0; r < n; ++r) {
                    const cdouble arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp + sp * arq;
                    a(r, q) = -sq * arp + c * arq;
                }
                for (int col = 0; col < n; ++col) {
                    const cdouble apc = a(p, col), aqc = a(q, col);
                    a(p, col) = c * apc + std::conj(sp) * aqc;
                    a(q, col) = -std::conj(sq) * apc + c * aqc;
                }
                for (int r = 0; r < n; ++r) {
                    const cdouble vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp + sp * vrq;
                    v(r, q) = -sq * vrp + c * vrq;
                }
                a(p, q) = a(q, p) = 0;
                a(p, p) = cdouble{app + t * mag, 0};
                a(q, q) = cdouble{aqq - t * mag, 0};
            }
        }
        converged = off_norm() <= tol;
    }
    if (!converged)
        throw std::runtime_error("hermitian_eig: Jacobi sweeps did not converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// exp(-i theta H) rho exp(+i theta H) for a dense Hermitian H, through the
/// spectral decomposition of H.
inline ComplexMatrix evolve_unitary(const ComplexMatrix& rho, const ComplexMatrix& h, double theta) {
    if (rho.dim != h.dim) throw std::invalid_argument("evolve_unitary: dimension mismatch");
    if (theta == 0.0) return rho;
    const HermitianSpectrum sp = hermitian_eig(h);
    const int n = rho.dim;
    ComplexMatrix u(n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k < n; ++k) {
            const cdouble ph = std::exp(cdouble{0, -theta * sp.eigenvalues[k]});
            u(r, k) = sp.eigenvectors(r, k) * ph;
        }
    // u = V e^{-i theta L}; full unitary is u V^dagger.
    const ComplexMatrix uv = matmul(u, sp.eigenvectors.adjoint());
    return matmul(matmul(uv, rho), uv.adjoint());
}

/// Same evolution generated by a single Hermitian Pauli string, using
/// exp(-i theta P) = cos(theta) I - i sin(theta) P (exact, no decomposition).
inline ComplexMatrix evolve_unitary(const ComplexMatrix& rho, const PauliString& p, double theta) {
    if (!p.is_hermitian())
        throw std::invalid_argument("evolve_unitary: Pauli generator must be Hermitian");
    const double sign = (p.display_exponent() == 2) ? -1.0 : 1.0;
    const double c = std::cos(theta);
    const double s = sign * std::sin(theta);
    // Strip the sign so the action helper sees the +1 representative.
    PauliString q = p;
    if (sign < 0) q = PauliString::phased_identity(p.width(), 2) * p;

    const ComplexMatrix qr = pauli_left(q, rho);
    const ComplexMatrix rq = pauli_right(rho, q);
    ComplexMatrix out = rho;
    out *= c * c;
    ComplexMatrix cross = qr - rq;
    cross *= cdouble{0, -1} * cdouble{c * s, 0};
    out += cross;
    ComplexMatrix qrq = pauli_sandwich(q, rho);
    qrq *= s * s;
    out += qrq;
    return out;
}

/// exp(-i theta P)|psi> for a Hermitian Pauli string.
inline StateVector evolve_unitary(const StateVector& psi, const PauliString& p, double theta) {
    if (!p.is_hermitian())
        throw std::invalid_argument("evolve_unitary: Pauli generator must be Hermitian");
    const double sign = (p.display_exponent() == 2) ? -1.0 : 1.0;
    PauliString q = p;
    if (sign < 0) q = PauliString::phased_identity(p.width(), 2) * p;
    const int n = qubit_count_for_dim(psi.dim);
    detail::PauliAction act(q, n);
    const double c = std::cos(theta);
    const double s = sign * std::sin(theta);
    StateVector out(psi.dim);
    for (int i = 0; i < psi.dim; ++i) {
        const std::uint64_t j = static_cast<std::uint64_t>(i) ^ act.xm;
        out.amp[i] = c * psi.amp[i] + cdouble{0, -1} * s * act.phase(static_cast<std::uint64_t>(i) ^ act.xm) * psi.amp[static_cast<int>(j)];
    }
    return out;
}

inline cdouble expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    return matmul(rho, op).trace();
}

/// <psi| rho |psi>; real part returned (imaginary part is representation noise).
inline double fidelity_with_pure(const ComplexMatrix& rho, const StateVector& psi) {
    cdouble s = 0;
    for (int r = 0; r < rho.dim; ++r)
        for (int c = 0; c < rho.dim; ++c) s += std::conj(psi.amp[r]) * rho(r, c) * psi.amp[c];
    return s.real();
}

/// Density-matrix sanity check: Hermitian, unit trace, spectrum >= -1e-10.
inline void check_density_matrix(const ComplexMatrix& rho, bool with_spectrum = false) {
    if (!rho.is_hermitian(1e-12 * std::max(1.0, rho.max_abs())))
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - cdouble{1, 0}) > 1e-10)
        throw std::invalid_argument("density matrix trace is not 1");
    if (with_spectrum) {
        const auto sp = hermitian_eig(rho);
        if (sp.eigenvalues.front() < -1e-10)
            throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

}  // namespace qecmet
