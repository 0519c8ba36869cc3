// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.
//
// Usage: acceptance <path-to-cli> <work-dir>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qecmet/channels.hpp"
#include "qecmet/codes.hpp"
#include "qecmet/estimation.hpp"
#include "qecmet/format.hpp"
#include "qecmet/qfi.hpp"
#include "qecmet/scenario.hpp"

namespace fs = std::filesystem;
using namespace qecmet;

namespace {

struct Criterion {
    int id;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Criterion> g_results;

template <typename Fn>
void run_criterion(int id, double time_limit_s, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        detail = fn(pass);
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        pass = false;
        detail += " [runtime " + std::to_string(secs) + "s exceeds " +
                  std::to_string(time_limit_s) + "s]";
    }
    g_results.push_back({id, pass, detail, secs});
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(),
                secs);
    std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool rel_close(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "qecmet_acc";
    fs::create_directories(work);

    // 1. Logical suppression numbers at p = 1 - 1e-3 against the quoted
    //    one-significant-figure values, 10% relative.
    run_criterion(1, 1.0, [](bool& pass) {
        const double p = 1.0 - 1e-3;
        const double eps3 = 2 * logical_flip_tail(p, 3);
        const double eps5 = 2 * logical_flip_tail(p, 5);
        const double eps11 = 2 * logical_flip_tail(p, 11);
        const bool ok3 = rel_close(eps3, 6e-6, 0.10);
        const bool ok5 = rel_close(eps5, 2e-8, 0.10);
        const bool ok11 = rel_close(eps11, 1.3e-15, 0.10);
        pass = ok3 && ok5 && ok11;
        std::ostringstream d;
        d << "logical suppression eps_L: m=3 " << format_sig12(eps3) << " vs 6e-6 "
          << (ok3 ? "ok" : "MISMATCH") << ", m=5 " << format_sig12(eps5) << " vs 2e-8 "
          << (ok5 ? "ok" : "MISMATCH") << ", m=11 " << format_sig12(eps11) << " vs 1.3e-15 "
          << (ok11 ? "ok" : "MISMATCH (exact Eq.-3 value is 9.2e-16; the quoted 1.3e-15 is not "
                            "reproducible from the stated formula)");
        return d.str();
    });

    // 2. Oracle equivalence, dephasing pipeline vs rank-2 closed form.
    run_criterion(2, 10.0, [](bool& pass) {
        pass = true;
        double worst = 0;
        for (int m : {1, 3}) {
            for (double p : {0.9, 0.99}) {
                ScenarioSpec spec;
                spec.n_blocks = 2;
                spec.code = CodeSpec::repetition_phase(m);
                spec.channel_p = p;
                spec.theta = 0.21;
                const auto res = run_scenario1_dephasing(spec);
                worst = std::max(worst, res.discrepancy);
                if (res.discrepancy > 1e-8) pass = false;
            }
        }
        return "dephasing pipeline vs (2p_L-1)^{2N}N^2, N=2, m in {1,3}, p in {0.9,0.99}: "
               "max rel dev " +
               format_sig12(worst) + " (tol 1e-8)";
    });

    // 3. Oracle equivalence, depolarized GHZ vs the closed form.
    run_criterion(3, 10.0, [](bool& pass) {
        pass = true;
        double worst = 0;
        for (int n : {1, 2, 3}) {
            for (double p : {0.8, 0.95}) {
                ComplexMatrix state = dephased_ghz_state(1.0, n, 0.13);
                state = apply_channel_all_qubits(std::move(state), PauliChannel::depolarizing(p));
                const auto oracle = qfi_spectral(state, half_collective_z(n));
                const auto closed = qfi_depolarized_ghz(p, n);
                const double rel = std::abs(oracle.value - closed.value) / closed.value;
                worst = std::max(worst, rel);
                if (rel > 1e-9) pass = false;
            }
        }
        return "spectral QFI of depolarized GHZ vs closed form, N in {1,2,3}, p in {0.8,0.95}: "
               "max rel dev " +
               format_sig12(worst) + " (tol 1e-9)";
    });

    // 4. Exhaustive dephasing-pattern enumeration reproduces E_z(p_L).
    run_criterion(4, 30.0, [](bool& pass) {
        pass = true;
        double worst = 0;
        for (int m : {3, 5}) {
            for (double p : {0.9, 0.99}) {
                const auto code = CodeSpec::repetition_phase(m);
                const double pl = logical_flip_retention(p, m);
                const auto [zero, one] = encode_codewords(code);
                const auto lz = logical_z_operator(code);
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        const StateVector& a = i == 0 ? zero : one;
                        const StateVector& b = j == 0 ? zero : one;
                        ComplexMatrix op(a.dim);
                        for (int r = 0; r < a.dim; ++r)
                            for (int c = 0; c < a.dim; ++c)
                                op(r, c) = a.amp[r] * std::conj(b.amp[c]);
                        ComplexMatrix through(op.dim);
                        for (std::uint32_t pattern = 0; pattern < (1u << m); ++pattern) {
                            auto err = PauliString::identity(m);
                            for (int q = 0; q < m; ++q)
                                if ((pattern >> q) & 1) err *= PauliString::single(m, q, 'Z');
                            const int w = std::popcount(pattern);
                            ComplexMatrix branch = pauli_sandwich(err, op);
                            branch *= std::pow(p, m - w) * std::pow(1 - p, w);
                            through += branch;
                        }
                        through = syndrome_correct(through, code);
                        ComplexMatrix logical = op;
                        logical *= pl;
                        ComplexMatrix flipped = pauli_sandwich(lz, op);
                        flipped *= (1 - pl);
                        logical += flipped;
                        worst = std::max(worst, max_abs_diff(through, logical));
                    }
                }
            }
        }
        pass = worst <= 1e-10;
        return "all 2^m dephasing patterns + correction vs E_z(p_L), m in {3,5}: max entry dev " +
               format_sig12(worst) + " (tol 1e-10)";
    });

    // 5. Scenario II mapping identities, symbolic and dense, phases included.
    run_criterion(5, 5.0, [](bool& pass) {
        pass = true;
        double dense_worst = 0;
        for (int m : {1, 3, 5}) {
            const auto report = verify_scenario2_mapping(m);
            if (!report.all_ok()) pass = false;
            const auto v = build_block_mapper(m);
            const ComplexMatrix u = dense_unitary(v);
            const ComplexMatrix udag = u.adjoint();
            std::vector<PauliString> probes{PauliString::single(m, 0, 'Z')};
            for (int j = 0; j < m; ++j) probes.push_back(PauliString::single(m, j, 'X'));
            for (const auto& probe : probes) {
                const auto sym = conjugate_by_circuit(probe, v);
                dense_worst = std::max(dense_worst,
                                       max_abs_diff(dense(sym),
                                                    matmul(matmul(u, dense(probe)), udag)));
            }
        }
        if (dense_worst > 1e-12) pass = false;
        return "U H_k U+ = Z x X^{m-1} and U X_j U+ = X_j, m in {1,3,5}: symbolic exact, dense "
               "dev " +
               format_sig12(dense_worst) + " (tol 1e-12)";
    });

    // 6. Optimal-time recovery, numeric and closed-form asymptote.
    run_criterion(6, 5.0, [](bool& pass) {
        pass = true;
        double worst = 0;
        for (double gamma : {0.1, 1.0}) {
            for (int n : {1, 10, 100}) {
                const auto res = optimize_interrogation_time(
                    [&](double t) { return t * std::exp(-2.0 * n * gamma * t) * n * n; },
                    10.0 / gamma);
                const double target = 1.0 / (2.0 * n * gamma);
                const double rel = std::abs(res.t_opt - target) / target;
                worst = std::max(worst, rel);
                if (rel > 1e-6) pass = false;
            }
        }
        const double gamma = 0.01;
        const int m = ceil_log_block_size(1e6);
        const double cf = t_opt_closed_form(m, gamma, 1e6);
        const double asym = t_opt_asymptote(gamma);
        const double rel_asym = std::abs(cf - asym) / asym;
        if (rel_asym > 0.20) pass = false;
        return "numeric t_opt vs 1/(2Ngamma): max rel dev " + format_sig12(worst) +
               " (tol 1e-6); closed form at N=1e6, m=" + std::to_string(m) + ": dev from "
               "1/(2 gamma e^2) " +
               format_sig12(rel_asym) + " (tol 0.20)";
    });

    // 7. Five-qubit code: q_L by enumeration, threshold, double-exponential
    //    suppression.
    run_criterion(7, 30.0, [](bool& pass) {
        pass = true;
        // weight-<=1 enumeration on the ring graph code
        const auto code = CodeSpec::five_qubit_graph();
        const auto [zero, one] = encode_codewords(code);
        StateVector psi(zero.dim);
        for (int i = 0; i < psi.dim; ++i)
            psi.amp[i] = 0.6 * zero.amp[i] + cdouble{0, 0.8} * one.amp[i];
        const ComplexMatrix rho = outer(psi);

        const double p = 0.9;
        const double q = depol_no_error_probability(p);
        const double per_pauli = (1 - p) / 4;
        const double keep = p + per_pauli;
        static const char axes[3] = {'X', 'Y', 'Z'};
        double correctable_mass = 0;
        double worst_fid = 1.0;
        for (int pattern = 0; pattern < 1024; ++pattern) {
            auto err = PauliString::identity(5);
            int weight_count = 0;
            double prob = 1;
            int rest = pattern;
            for (int qb = 0; qb < 5; ++qb) {
                const int letter = rest % 4;
                rest /= 4;
                if (letter == 0) {
                    prob *= keep;
                } else {
                    err *= PauliString::single(5, qb, axes[letter - 1]);
                    prob *= per_pauli;
                    ++weight_count;
                }
            }
            if (weight_count <= 1) {
                correctable_mass += prob;
                const ComplexMatrix fixed = syndrome_correct(pauli_sandwich(err, rho), code);
                worst_fid = std::min(worst_fid, fidelity_with_pure(fixed, psi));
            }
        }
        const bool mass_ok = rel_close(correctable_mass, five_qubit_logical_q(q), 1e-12);
        const bool fid_ok = worst_fid > 1.0 - 1e-10;
        const double qs = five_qubit_threshold();
        const bool thr_ok = qs > 0.5 && qs < 1.0;
        const double e1 = 1 - concatenated_q(0.99, 1);
        const double e2 = 1 - concatenated_q(0.99, 2);
        const double c_measured = e2 / (e1 * e1);
        const bool supp_ok = e2 <= c_measured * e1 * e1 * (1 + 1e-12) && c_measured < 10.5;
        pass = mass_ok && fid_ok && thr_ok && supp_ok;
        std::ostringstream d;
        d << "five-qubit ring code: weight<=1 mass matches q^5+5q^4(1-q) "
          << (mass_ok ? "ok" : "MISMATCH") << ", all 16 corrections exact (min fidelity "
          << format_sig12(worst_fid) << "), q* = " << format_sig12(qs)
          << " in (0.5,1), concatenation constant C = " << format_sig12(c_measured);
        return d.str();
    });

    // 8. Scaling demonstration: retention and fitted slopes from the sweep.
    run_criterion(8, 30.0, [](bool& pass) {
        SweepConfig cfg;
        cfg.mode = SweepMode::Phase;
        cfg.p = 1.0 - 1e-3;
        cfg.m_policy = MPolicy::Fixed;
        cfg.m_fixed = 5;
        for (int i = 0; i < 20; ++i)
            cfg.n_values.push_back(
                std::exp(std::log(1e2) + (std::log(2.5e5) - std::log(1e2)) * i / 19.0));
        const auto rows = scaling_sweep(cfg);

        bool retention_ok = true;
        std::vector<double> ns, deltas, classicals;
        for (const auto& row : rows) {
            if (row.heisenberg_retention < 0.99) retention_ok = false;
            ns.push_back(row.n_probes);
            deltas.push_back(row.delta_lambda_sqrtT);
            classicals.push_back(row.baseline_classical);
        }
        const double slope = fit_loglog_slope(ns, deltas);
        const double classical_slope = fit_loglog_slope(ns, classicals);
        const bool slope_ok = std::abs(slope - (-1.0)) <= 0.02;
        const bool classical_ok = std::abs(classical_slope - (-0.5)) <= 0.01;
        pass = retention_ok && slope_ok && classical_ok;
        std::ostringstream d;
        d << "sweep p=1-1e-3, m=5, N up to 2.5e5: retention >= 0.99 "
          << (retention_ok ? "ok" : "VIOLATED") << ", fitted slope " << format_sig12(slope)
          << " (-1.00 +- 0.02), classical slope " << format_sig12(classical_slope) << " (-0.5)";
        return d.str();
    });

    // 9. Two-qubit demo: exact recovery and Heisenberg-value pipeline.
    run_criterion(9, 10.0, [](bool& pass) {
        const double fid = two_qubit_demo_error_recovery_fidelity(2, 0);
        ScenarioSpec spec;
        spec.kind = ScenarioKind::TwoQubitDemo;
        spec.n_blocks = 2;
        spec.theta = 0.29;
        const auto res = run_two_qubit_demo(spec, 0.95);
        const bool fid_ok = std::abs(fid - 1.0) <= 1e-12;
        const bool qfi_ok = res.qfi_oracle && res.discrepancy <= 1e-8;
        pass = fid_ok && qfi_ok;
        std::ostringstream d;
        d << "injected sigma_x recovery fidelity " << format_sig12(fid)
          << " (tol 1e-12); N=2 demo QFI rel dev " << format_sig12(res.discrepancy)
          << " (tol 1e-8)";
        return d.str();
    });

    // 10. Determinism of the CLI verify and sweep outputs.
    run_criterion(10, 60.0, [&](bool& pass) {
        if (cli.empty()) {
            pass = false;
            return std::string("CLI path not supplied");
        }
        const fs::path dir = work / "determinism";
        fs::remove_all(dir);
        fs::create_directories(dir);
        auto run = [&](const std::string& args, const std::string& stdout_name) {
            const std::string cmdline = "QECMET_OUT_DIR='" + dir.string() + "' '" + cli + "' " +
                                        args + " > '" + (dir / stdout_name).string() + "' 2>&1";
            return std::system(cmdline.c_str());
        };
        const std::string sweep_args =
            "sweep --mode phase --m 5 --p 0.999 --n-grid 1e2:1e5:10";
        int rc = 0;
        rc |= run("verify --out v1.json", "v1.txt");
        rc |= run("verify --out v2.json", "v2.txt");
        rc |= run(sweep_args + " --out s1.csv", "sweep1.txt");
        rc |= run(sweep_args + " --out s2.csv", "sweep2.txt");
        const bool verify_same = read_file(dir / "v1.json") == read_file(dir / "v2.json") &&
                                 !read_file(dir / "v1.json").empty() &&
                                 read_file(dir / "v1.txt") == read_file(dir / "v2.txt");
        const bool sweep_same = read_file(dir / "s1.csv") == read_file(dir / "s2.csv") &&
                                !read_file(dir / "s1.csv").empty();
        pass = (rc == 0) && verify_same && sweep_same;
        std::ostringstream d;
        d << "repeated verify outputs byte-identical: " << (verify_same ? "yes" : "NO")
          << "; repeated sweep CSVs byte-identical: " << (sweep_same ? "yes" : "NO");
        return d.str();
    });

    int failures = 0;
    for (const auto& r : g_results)
        if (!r.pass) ++failures;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures;
}
