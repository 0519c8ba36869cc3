#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qecmet/matrix.hpp"

using namespace qecmet;

namespace {

ComplexMatrix random_hermitian(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n);
    for (int r = 0; r < n; ++r) {
        m(r, r) = g(rng);
        for (int c = r + 1; c < n; ++c) {
            m(r, c) = cdouble{g(rng), g(rng)};
            m(c, r) = std::conj(m(r, c));
        }
    }
    return m;
}

ComplexMatrix random_density(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix b(n);
    for (auto& v : b.a) v = cdouble{g(rng), g(rng)};
    ComplexMatrix rho = matmul(b, b.adjoint());
    const double tr = rho.trace().real();
    rho *= 1.0 / tr;
    return rho;
}

StateVector ghz_state(int n_qubits) {
    StateVector s(1 << n_qubits);
    s.amp.front() = 1.0 / std::sqrt(2.0);
    s.amp.back() = 1.0 / std::sqrt(2.0);
    return s;
}

}  // namespace

TEST_CASE("eigendecomposition of a diagonal matrix") {
    ComplexMatrix m(2);
    m(0, 0) = 0.25;
    m(1, 1) = 0.75;
    const auto sp = hermitian_eig(m);
    CHECK(sp.eigenvalues[0] == Catch::Approx(0.25));
    CHECK(sp.eigenvalues[1] == Catch::Approx(0.75));
    CHECK(std::abs(sp.eigenvectors(0, 0)) == Catch::Approx(1.0));
    CHECK(std::abs(sp.eigenvectors(1, 1)) == Catch::Approx(1.0));
}

TEST_CASE("eigendecomposition of sigma_x") {
    const auto sp = hermitian_eig(dense(PauliString::from_string("X")));
    CHECK(sp.eigenvalues[0] == Catch::Approx(-1.0));
    CHECK(sp.eigenvalues[1] == Catch::Approx(1.0));
    // eigenvector of +1 is (|0> + |1>)/sqrt(2) up to a global phase
    const auto v = sp.eigenvector(1);
    CHECK(std::abs(std::abs(v.amp[0]) - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(v.amp[0] - v.amp[1]) < 1e-12);
}

TEST_CASE("dephased GHZ eigenvalues follow the rank-2 form") {
    // E_z(p) per qubit on an N-qubit GHZ: the coherence picks up (2p-1)^N and
    // the two nonzero eigenvalues are (1 +- (2p-1)^N)/2.
    const int n = 2;
    const double p = 0.85;
    ComplexMatrix rho = outer(ghz_state(n));
    const double damp = 2 * p - 1;
    rho(0, rho.dim - 1) *= damp * damp;
    rho(rho.dim - 1, 0) *= damp * damp;

    const auto sp = hermitian_eig(rho);
    std::vector<double> nonzero;
    for (double ev : sp.eigenvalues)
        if (ev > 1e-12) nonzero.push_back(ev);
    REQUIRE(nonzero.size() == 2);
    CHECK(nonzero[0] == Catch::Approx(0.5 * (1 - std::pow(damp, n))).epsilon(1e-12));
    CHECK(nonzero[1] == Catch::Approx(0.5 * (1 + std::pow(damp, n))).epsilon(1e-12));
}

TEST_CASE("eigendecomposition reconstruction and orthonormality") {
    std::mt19937 rng(3);
    for (int n : {2, 5, 8, 16, 32}) {
        const ComplexMatrix m = random_hermitian(rng, n);
        const auto sp = hermitian_eig(m);

        ComplexMatrix rebuilt(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                cdouble s = 0;
                for (int k = 0; k < n; ++k)
                    s += sp.eigenvectors(r, k) * sp.eigenvalues[k] * std::conj(sp.eigenvectors(c, k));
                rebuilt(r, c) = s;
            }
        CHECK(max_abs_diff(rebuilt, m) < 1e-10 * std::max(1.0, m.max_abs()));

        const ComplexMatrix vtv = matmul(sp.eigenvectors.adjoint(), sp.eigenvectors);
        CHECK(max_abs_diff(vtv, ComplexMatrix::identity(n)) < 1e-10);

        for (int k = 0; k + 1 < n; ++k) CHECK(sp.eigenvalues[k] <= sp.eigenvalues[k + 1]);
    }
}

TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("unitary evolution basics") {
    std::mt19937 rng(5);
    const ComplexMatrix rho = random_density(rng, 4);
    const ComplexMatrix h = random_hermitian(rng, 4);

    SECTION("theta = 0 leaves the state unchanged") {
        CHECK(max_abs_diff(evolve_unitary(rho, h, 0.0), rho) < 1e-15);
    }

    SECTION("trace, Hermiticity and spectrum are preserved") {
        const ComplexMatrix out = evolve_unitary(rho, h, 0.7);
        CHECK(std::abs(out.trace() - rho.trace()) < 1e-12);
        CHECK(out.is_hermitian(1e-12));
        const auto s0 = hermitian_eig(rho).eigenvalues;
        const auto s1 = hermitian_eig(out).eigenvalues;
        for (size_t k = 0; k < s0.size(); ++k)
            CHECK(std::abs(s0[k] - s1[k]) < 1e-10);
    }
}

TEST_CASE("half-period z rotation maps |+> to |->") {
    StateVector plus(2);
    plus.amp[0] = plus.amp[1] = 1 / std::sqrt(2.0);
    ComplexMatrix rho = outer(plus);

    ComplexMatrix h = dense(PauliString::from_string("Z"));
    h *= 0.5;
    const ComplexMatrix out = evolve_unitary(rho, h, M_PI);

    StateVector minus(2);
    minus.amp[0] = 1 / std::sqrt(2.0);
    minus.amp[1] = -1 / std::sqrt(2.0);
    CHECK(max_abs_diff(out, outer(minus)) < 1e-12);
}

TEST_CASE("GHZ coherence picks up phase exp(-i N theta) under H = sum sigma_z / 2") {
    const int n = 3;
    const double theta = 0.31;
    ComplexMatrix h(1 << n);
    for (int q = 0; q < n; ++q) h += dense(PauliString::single(n, q, 'Z'));
    h *= 0.5;

    const ComplexMatrix out = evolve_unitary(outer(ghz_state(n)), h, theta);
    const cdouble expected = 0.5 * std::exp(cdouble{0, -static_cast<double>(n) * theta});
    CHECK(std::abs(out(0, (1 << n) - 1) - expected) < 1e-12);
}

TEST_CASE("pauli-generated evolution matches dense-generated evolution") {
    std::mt19937 rng(9);
    const int n = 3;
    const ComplexMatrix rho = random_density(rng, 1 << n);
    for (const auto* s : {"+ZZZ", "+ZXX", "-XII", "+YZY"}) {
        const auto p = PauliString::from_string(s);
        const double theta = 0.37;
        const ComplexMatrix fast = evolve_unitary(rho, p, theta);
        const ComplexMatrix slow = evolve_unitary(rho, dense(p), theta);
        CHECK(max_abs_diff(fast, slow) < 1e-12);
    }
}

TEST_CASE("diagonal hamiltonians act by elementwise phases") {
    std::mt19937 rng(13);
    const int n = 2;
    const ComplexMatrix rho = random_density(rng, 1 << n);
    const auto p = PauliString::from_string("ZZ");
    const double theta = 0.59;
    const ComplexMatrix out = evolve_unitary(rho, p, theta);

    // eigenvalue of ZZ on |b>: (-1)^{parity(b)}
    ComplexMatrix expected(rho.dim);
    for (int r = 0; r < rho.dim; ++r)
        for (int c = 0; c < rho.dim; ++c) {
            const int er = (std::popcount(static_cast<unsigned>(r)) % 2) ? -1 : 1;
            const int ec = (std::popcount(static_cast<unsigned>(c)) % 2) ? -1 : 1;
            expected(r, c) = rho(r, c) * std::exp(cdouble{0, -theta * (er - ec)});
        }
    CHECK(max_abs_diff(out, expected) < 1e-12);
}

TEST_CASE("pauli left/right/sandwich agree with dense products") {
    std::mt19937 rng(17);
    const ComplexMatrix rho = random_density(rng, 8);
    for (const auto* s : {"XIZ", "YYI", "ZZZ"}) {
        const auto p = PauliString::from_string(s);
        const ComplexMatrix d = dense(p);
        CHECK(max_abs_diff(pauli_left(p, rho), matmul(d, rho)) < 1e-13);
        CHECK(max_abs_diff(pauli_right(rho, p), matmul(rho, d)) < 1e-13);
        CHECK(max_abs_diff(pauli_sandwich(p, rho), matmul(matmul(d, rho), d)) < 1e-13);
    }
}

TEST_CASE("embed_operator places gates on the requested qubits") {
    ComplexMatrix x(2);
    x(0, 1) = 1;
    x(1, 0) = 1;
    const ComplexMatrix full = embed_operator(x, {1}, 3);
    CHECK(max_abs_diff(full, dense(PauliString::single(3, 1, 'X'))) < 1e-15);

    // two-qubit embedding on non-adjacent, reordered targets
    ComplexMatrix zx = kron(dense(PauliString::from_string("Z")), dense(PauliString::from_string("X")));
    const ComplexMatrix e = embed_operator(zx, {2, 0}, 3);
    const auto expected = PauliString::single(3, 2, 'Z') * PauliString::single(3, 0, 'X');
    CHECK(max_abs_diff(e, dense(expected)) < 1e-15);
}

TEST_CASE("statevector pauli evolution matches density evolution") {
    StateVector psi = ghz_state(3);
    const auto p = PauliString::from_string("ZXX");
    const double theta = 0.41;
    const StateVector out = evolve_unitary(psi, p, theta);
    CHECK(max_abs_diff(outer(out), evolve_unitary(outer(psi), p, theta)) < 1e-12);
    CHECK(out.norm() == Catch::Approx(1.0).epsilon(1e-12));
}
