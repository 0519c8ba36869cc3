#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "qecmet/matrix.hpp"
#include "qecmet/pauli.hpp"

namespace qecmet {

enum class QfiMethod { Spectral, ClosedFormRank2, ClosedFormDepolarizing };

struct QfiResult {
    double value = 0;
    QfiMethod method = QfiMethod::Spectral;
    std::optional<double> t;  // interrogation time in frequency mode
    int terms_kept = 0;       // spectral pairs with p_j + p_k above cutoff
};

namespace detail {

// Pairs with p_j + p_k at or below this are treated as the kernel.
inline constexpr double kQfiEigenvalueCutoff = 1e-12;

struct KahanSum {
    double sum = 0, comp = 0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Quantum Fisher information from the spectral decomposition of rho:
/// F = (dtheta/dlambda)^2 * 2 sum_{j,k} (p_j - p_k)^2 / (p_j + p_k) |<j|H|k>|^2,
/// the sum restricted to pairs with p_j + p_k above the cutoff.
inline QfiResult qfi_spectral(const ComplexMatrix& rho, const ComplexMatrix& h,
                              double dtheta_dlambda = 1.0) {
    if (rho.dim != h.dim) throw std::invalid_argument("qfi_spectral: dimension mismatch");
    check_density_matrix(rho);
    if (!h.is_hermitian(1e-10 * std::max(1.0, h.max_abs())))
        throw std::invalid_argument("qfi_spectral: H must be Hermitian");

    const HermitianSpectrum sp = hermitian_eig(rho);
    const int n = rho.dim;

    std::vector<double> probs(sp.eigenvalues);
    for (double& p : probs) {
        if (p < -1e-10) throw std::invalid_argument("qfi_spectral: negative eigenvalue");
        if (p < 0) p = 0;
    }

    // M = V^dagger H V
    const ComplexMatrix hv = matmul(h, sp.eigenvectors);
    const ComplexMatrix m = matmul(sp.eigenvectors.adjoint(), hv);

    detail::KahanSum acc;
    int kept = 0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double denom = probs[j] + probs[k];
            if (denom <= detail::kQfiEigenvalueCutoff) continue;
            ++kept;
            const double num = probs[j] - probs[k];
            if (num == 0) continue;
            acc.add(num * num / denom * std::norm(m(j, k)));
        }
    }

    QfiResult out;
    out.value = 2.0 * acc.sum * dtheta_dlambda * dtheta_dlambda;
    out.method = QfiMethod::Spectral;
    out.terms_kept = kept;
    return out;
}

inline QfiResult qfi_spectral(const ComplexMatrix& rho, const PauliString& h,
                              double dtheta_dlambda = 1.0) {
    return qfi_spectral(rho, dense(h), dtheta_dlambda);
}

/// Rank-2 closed form for a dephased GHZ probe: F = (2p - 1)^{2N} N^2.
/// Callers pass either the physical retention p or the logical p_L.
inline QfiResult qfi_dephased_ghz_phase(double p, int n_probes) {
    if (p < 0.5 || p > 1.0)
        throw std::invalid_argument("qfi_dephased_ghz_phase: p must be in [1/2, 1]");
    if (n_probes < 1) throw std::invalid_argument("qfi_dephased_ghz_phase: N must be >= 1");
    QfiResult out;
    out.value = std::pow(2 * p - 1, 2 * n_probes) * n_probes * static_cast<double>(n_probes);
    out.method = QfiMethod::ClosedFormRank2;
    return out;
}

/// Frequency-mode rank-2 closed form: F = t^2 (2 p_L(t) - 1)^{2N} N^2.
inline QfiResult qfi_dephased_ghz_frequency(const std::function<double(double)>& retention_at,
                                            int n_probes, double t) {
    if (t < 0) throw std::invalid_argument("qfi_dephased_ghz_frequency: t must be >= 0");
    if (n_probes < 1) throw std::invalid_argument("qfi_dephased_ghz_frequency: N must be >= 1");
    QfiResult out;
    if (t > 0) {
        const double p = retention_at(t);
        out = qfi_dephased_ghz_phase(p, n_probes);
        out.value *= t * t;
    }
    out.method = QfiMethod::ClosedFormRank2;
    out.t = t;
    return out;
}

/// Same quantity expressed through a logical rate, 2 p_L(t) - 1 = e^{-gamma_L t}.
inline QfiResult qfi_dephased_ghz_frequency_rate(double gamma_l, int n_probes, double t) {
    if (t < 0 || gamma_l < 0)
        throw std::invalid_argument("qfi_dephased_ghz_frequency_rate: negative input");
    QfiResult out;
    out.value = t * t * std::exp(-2.0 * n_probes * gamma_l * t) * n_probes *
                static_cast<double>(n_probes);
    out.method = QfiMethod::ClosedFormRank2;
    out.t = t;
    return out;
}

/// Depolarized GHZ closed form: F = p^{2N} N^2 / [((1+p)/2)^N + ((1-p)/2)^N].
inline QfiResult qfi_depolarized_ghz(double p, int n_probes) {
    if (p < 0 || p > 1) throw std::invalid_argument("qfi_depolarized_ghz: p must be in [0, 1]");
    if (n_probes < 1) throw std::invalid_argument("qfi_depolarized_ghz: N must be >= 1");
    const double denom =
        std::pow((1 + p) / 2, n_probes) + std::pow((1 - p) / 2, n_probes);
    QfiResult out;
    out.value = std::pow(p, 2 * n_probes) * n_probes * static_cast<double>(n_probes) / denom;
    out.method = QfiMethod::ClosedFormDepolarizing;
    return out;
}

struct DepolApproximation {
    double value = 0;
    bool valid = false;  // requires p close to 1
};

/// Near-clean approximation F ~ p^{3N/2} N^2, flagged valid for p >= 0.9.
inline DepolApproximation qfi_depolarized_ghz_approx(double p, int n_probes) {
    DepolApproximation out;
    out.value = std::pow(p, 1.5 * n_probes) * n_probes * static_cast<double>(n_probes);
    out.valid = p >= 0.9;
    return out;
}

/// Explicitly constructed dephased-GHZ density matrix (oracle input):
/// E_z(p) applied to every qubit of U_theta |GHZ><GHZ| U_theta^dagger.
inline ComplexMatrix dephased_ghz_state(double p, int n_probes, double theta = 0.1) {
    const int dim = 1 << n_probes;
    StateVector ghz(dim);
    ghz.amp.front() = ghz.amp.back() = 1.0 / std::sqrt(2.0);
    ComplexMatrix rho = outer(ghz);
    ComplexMatrix h(dim);
    for (int q = 0; q < n_probes; ++q) h += dense(PauliString::single(n_probes, q, 'Z'));
    h *= 0.5;
    rho = evolve_unitary(rho, h, theta);
    const double damp = 2 * p - 1;
    // per-qubit dephasing scales rho_{rc} by damp^{hamming(r,c)}
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            const int flips = std::popcount(static_cast<unsigned>(r ^ c));
            rho(r, c) *= std::pow(damp, flips);
        }
    return rho;
}

/// Half-sum-of-sigma_z Hamiltonian on N qubits (the standard probe generator).
inline ComplexMatrix half_collective_z(int n_probes) {
    ComplexMatrix h(1 << n_probes);
    for (int q = 0; q < n_probes; ++q) h += dense(PauliString::single(n_probes, q, 'Z'));
    h *= 0.5;
    return h;
}

}  // namespace qecmet
