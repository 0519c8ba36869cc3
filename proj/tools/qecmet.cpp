// qecmet: precision limits of noisy quantum metrology with error-correction.
//
// Subcommands: qfi, sweep, optimize-time, codes, verify, scenario.
// Exit codes: 0 success, 1 check failure, 2 invalid input.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "qecmet/channels.hpp"
#include "qecmet/codes.hpp"
#include "qecmet/estimation.hpp"
#include "qecmet/format.hpp"
#include "qecmet/qfi.hpp"
#include "qecmet/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qecmet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;

fs::path output_dir() {
    if (const char* env = std::getenv("QECMET_OUT_DIR")) return fs::path(env);
    return fs::path(".");
}

fs::path resolve_out(const std::string& name) {
    fs::path p(name);
    if (p.is_absolute()) return p;
    return output_dir() / p;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& command) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key == "command") continue;
        if (!allowed.count(key))
            throw CLI::ValidationError("config", "unknown key '" + key + "' for command '" +
                                                     command + "'");
    }
}

json load_config(const std::string& path, const std::string& command,
                 const std::set<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("config", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw CLI::ValidationError("config", std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("config", "config must be a JSON object");
    if (j.contains("command") && j["command"] != command)
        throw CLI::ValidationError("config", "config is for command '" +
                                                 j["command"].get<std::string>() + "'");
    reject_unknown_keys(j, allowed, command);
    return j;
}

// config value unless the flag was given on the command line
template <typename T>
void maybe_from_config(const json& cfg, const char* key, const CLI::Option* opt, T& value) {
    if (cfg.contains(key) && (opt == nullptr || opt->count() == 0)) value = cfg[key].get<T>();
}

void maybe_dump_config(const std::string& path, const json& effective) {
    if (path.empty()) return;
    atomic_write(resolve_out(path), effective.dump(2) + "\n");
}

std::vector<double> parse_n_values(const std::string& values, const std::string& grid) {
    std::vector<double> ns;
    if (!values.empty()) {
        std::stringstream ss(values);
        std::string tok;
        while (std::getline(ss, tok, ',')) ns.push_back(std::stod(tok));
    } else if (!grid.empty()) {
        double lo, hi;
        int count;
        if (std::sscanf(grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
            lo <= 0 || hi <= lo)
            throw CLI::ValidationError("--n-grid", "expected lo:hi:count with 0 < lo < hi");
        for (int i = 0; i < count; ++i)
            ns.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1)));
    }
    return ns;
}

// ---------------------------------------------------------------- qfi ------

int cmd_qfi(const std::string& model, int n, double p, std::optional<double> t,
            const std::string& out) {
    QfiResult closed;
    ComplexMatrix state;
    const double scale = t ? *t : 1.0;
    if (model == "dephased-ghz") {
        closed = qfi_dephased_ghz_phase(p, n);
        if (n <= kOracleQubitCap) state = dephased_ghz_state(p, n);
    } else if (model == "depolarized-ghz") {
        closed = qfi_depolarized_ghz(p, n);
        if (n <= kOracleQubitCap) {
            state = dephased_ghz_state(1.0, n);
            state = apply_channel_all_qubits(std::move(state), PauliChannel::depolarizing(p));
        }
    } else {
        throw CLI::ValidationError("--model", "expected dephased-ghz or depolarized-ghz");
    }
    closed.value *= scale * scale;

    std::ostringstream table;
    table << "model,N,p,t,qfi_closed,qfi_spectral,discrepancy\n";
    table << model << ',' << n << ',' << format_sig12(p) << ',' << format_sig12(scale) << ','
          << format_sig12(closed.value) << ',';
    if (state.dim > 0) {
        const auto oracle = qfi_spectral(state, half_collective_z(n), scale);
        const double ref = std::max(std::abs(oracle.value), 1e-300);
        table << format_sig12(oracle.value) << ','
              << format_sig12(std::abs(closed.value - oracle.value) / ref) << '\n';
    } else {
        table << ",\n";
    }
    std::cout << table.str();
    if (!out.empty()) atomic_write(resolve_out(out), table.str());
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const SweepConfig& cfg, const std::string& out, const std::string& svg) {
    const auto rows = scaling_sweep(cfg);
    const std::string csv = sweep_rows_to_csv(rows);
    if (!out.empty())
        atomic_write(resolve_out(out), csv);
    else
        std::cout << csv;

    if (!svg.empty()) {
        SvgSeries protocol{"encoded delta*sqrt(T)", "#d62728", {}, {}};
        SvgSeries classical{"classical baseline", "#1f77b4", {}, {}};
        SvgSeries transversal{"transversal baseline", "#2ca02c", {}, {}};
        for (const auto& r : rows) {
            protocol.xs.push_back(r.n_probes);
            protocol.ys.push_back(r.delta_lambda_sqrtT);
            if (r.baseline_classical > 0) {
                classical.xs.push_back(r.n_probes);
                classical.ys.push_back(r.baseline_classical);
            }
            if (r.baseline_transversal > 0) {
                transversal.xs.push_back(r.n_probes);
                transversal.ys.push_back(r.baseline_transversal);
            }
        }
        std::vector<SvgSeries> series{protocol, classical};
        if (!transversal.xs.empty()) series.push_back(transversal);
        atomic_write(resolve_out(svg), svg_loglog_plot(series, "N", "delta lambda sqrt(T)"));
    }
    return kExitOk;
}

// --------------------------------------------------------- optimize-time ---

int cmd_optimize_time(double gamma, double n, int m, const std::string& out) {
    std::ostringstream table;
    table << "N,m,gamma,t_opt_numeric,f_per_t_numeric,t_opt_closed_form,f_per_t_closed_form,"
             "t_opt_stirling_limit,flags\n";

    std::function<double(double)> objective;
    if (m == 1) {
        objective = [gamma, n](double t) { return t * std::exp(-2 * n * gamma * t) * n * n; };
    } else {
        objective = encoded_f_per_t_objective(m, gamma, n);
    }
    const auto opt = optimize_interrogation_time(objective, 10.0 / gamma);

    std::string flags;
    if (opt.at_boundary) flags += "t_opt_at_boundary;";
    table << format_sig12(n) << ',' << m << ',' << format_sig12(gamma) << ','
          << format_sig12(opt.t_opt) << ',' << format_sig12(opt.value) << ',';
    if (m >= 3) {
        const double cf = t_opt_closed_form(m, gamma, n);
        const double cff = f_per_t_closed_form(m, gamma, n);
        if (!t_opt_closed_form_valid(m, gamma, n)) flags += "gamma_topt_gt_0.1;";
        table << format_sig12(cf) << ',' << format_sig12(cff) << ','
              << format_sig12(t_opt_asymptote(gamma)) << ',' << flags << '\n';
    } else {
        table << ",," << format_sig12(1.0 / (2 * n * gamma)) << ',' << flags << "unencoded;\n";
    }
    std::cout << table.str();
    if (!out.empty()) atomic_write(resolve_out(out), table.str());
    return kExitOk;
}

// ---------------------------------------------------------------- codes ----

int cmd_codes(const std::string& code, const std::string& m_list, double p,
              std::optional<double> gamma, std::optional<double> t, int levels, double q,
              const std::string& out) {
    std::ostringstream table;
    if (code == "repetition") {
        table << "m,p,p_L,eps_L,gamma_L\n";
        std::stringstream ss(m_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const int m = std::stoi(tok);
            double pp = p;
            if (gamma && t) pp = dephasing_flip_probability(*gamma, *t);
            const double pl = logical_flip_retention(pp, m);
            const double eps = 2 * logical_flip_tail(pp, m);
            table << m << ',' << format_sig12(pp) << ',' << format_sig12(pl) << ','
                  << format_sig12(eps) << ',';
            if (gamma && t)
                table << format_sig12(logical_noise_rate(*gamma, m, *t));
            table << '\n';
        }
    } else if (code == "five-qubit") {
        table << "levels,q,q_L,one_minus_qL,threshold\n";
        const double threshold = five_qubit_threshold();
        for (int l = 0; l <= levels; ++l) {
            const double ql = concatenated_q(q, l);
            table << l << ',' << format_sig12(q) << ',' << format_sig12(ql) << ','
                  << format_sig12(1 - ql) << ',' << format_sig12(threshold) << '\n';
        }
    } else {
        throw CLI::ValidationError("--code", "expected repetition or five-qubit");
    }
    std::cout << table.str();
    if (!out.empty()) atomic_write(resolve_out(out), table.str());
    return kExitOk;
}

// ---------------------------------------------------------------- verify ---

struct VerifyCheck {
    std::string name;
    std::string detail;
    double max_error;
    double tolerance;
    bool pass;
};

void verify_mapping(std::vector<VerifyCheck>& checks, int m, double tol) {
    const auto report = verify_scenario2_mapping(m);
    double dense_err = 0;
    const auto v = build_block_mapper(m);
    const ComplexMatrix u = dense_unitary(v);
    const ComplexMatrix udag = u.adjoint();
    std::vector<PauliString> probes;
    probes.push_back(PauliString::single(m, 0, 'Z'));
    for (int j = 0; j < m; ++j) probes.push_back(PauliString::single(m, j, 'X'));
    for (const auto& probe : probes) {
        const auto sym = conjugate_by_circuit(probe, v);
        dense_err = std::max(
            dense_err, max_abs_diff(dense(sym), matmul(matmul(u, dense(probe)), udag)));
    }
    checks.push_back({"mapping", "m=" + std::to_string(m), dense_err, tol,
                      report.all_ok() && dense_err <= tol});
}

void verify_eq3(std::vector<VerifyCheck>& checks, int m, double tol) {
    const auto code = CodeSpec::repetition_phase(m);
    const double p = 0.9;
    const double pl = logical_flip_retention(p, m);
    const auto [zero, one] = encode_codewords(code);
    const auto lz = logical_z_operator(code);
    double max_err = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const StateVector& a = i == 0 ? zero : one;
            const StateVector& b = j == 0 ? zero : one;
            ComplexMatrix op(a.dim);
            for (int r = 0; r < a.dim; ++r)
                for (int c = 0; c < a.dim; ++c) op(r, c) = a.amp[r] * std::conj(b.amp[c]);

            ComplexMatrix through(op.dim);
            for (std::uint32_t pattern = 0; pattern < (1u << m); ++pattern) {
                auto err = PauliString::identity(m);
                for (int qb = 0; qb < m; ++qb)
                    if ((pattern >> qb) & 1) err *= PauliString::single(m, qb, 'Z');
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
            max_err = std::max(max_err, max_abs_diff(through, logical));
        }
    checks.push_back({"eq3", "m=" + std::to_string(m), max_err, tol, max_err <= tol});
}

void verify_qfi(std::vector<VerifyCheck>& checks, double tol) {
    double max_rel = 0;
    for (double p : {0.9, 0.99}) {
        const auto oracle = qfi_spectral(dephased_ghz_state(p, 2), half_collective_z(2));
        const auto closed = qfi_dephased_ghz_phase(p, 2);
        max_rel = std::max(max_rel, std::abs(oracle.value - closed.value) / closed.value);
    }
    checks.push_back({"qfi-dephased", "N=2", max_rel, tol, max_rel <= tol});

    max_rel = 0;
    for (int n : {1, 2, 3}) {
        for (double p : {0.8, 0.95}) {
            ComplexMatrix state = dephased_ghz_state(1.0, n);
            state = apply_channel_all_qubits(std::move(state), PauliChannel::depolarizing(p));
            const auto oracle = qfi_spectral(state, half_collective_z(n));
            const auto closed = qfi_depolarized_ghz(p, n);
            max_rel = std::max(max_rel, std::abs(oracle.value - closed.value) / closed.value);
        }
    }
    checks.push_back({"qfi-depolarized", "N=1..3", max_rel, tol, max_rel <= tol});
}

int cmd_verify(const std::string& which, int m_flag, std::optional<double> tolerance,
               const std::string& out) {
    std::vector<VerifyCheck> checks;
    const std::vector<int> mapping_ms = m_flag > 0 ? std::vector<int>{m_flag}
                                                   : std::vector<int>{1, 3, 5};
    const std::vector<int> eq3_ms = m_flag > 0 ? std::vector<int>{m_flag}
                                               : std::vector<int>{3, 5};
    if (which == "all" || which == "mapping")
        for (int m : mapping_ms) verify_mapping(checks, m, tolerance.value_or(1e-12));
    if (which == "all" || which == "eq3")
        for (int m : eq3_ms) verify_eq3(checks, m, tolerance.value_or(1e-10));
    if (which == "all" || which == "qfi") verify_qfi(checks, tolerance.value_or(1e-9));
    if (checks.empty()) throw CLI::ValidationError("--check", "unknown check '" + which + "'");

    bool all_pass = true;
    std::ostringstream text;
    json report = json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        text << "check=" << c.name << ' ' << c.detail << " status=" << (c.pass ? "pass" : "FAIL")
             << " max_error=" << format_sig12(c.max_error)
             << " tolerance=" << format_sig12(c.tolerance) << '\n';
        report.push_back({{"check", c.name},
                          {"detail", c.detail},
                          {"max_error", c.max_error},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    text << "overall=" << (all_pass ? "pass" : "FAIL") << '\n';
    std::cout << text.str();
    if (!out.empty())
        atomic_write(resolve_out(out),
                     json{{"overall", all_pass}, {"checks", report}}.dump(2) + "\n");
    return all_pass ? kExitOk : kExitCheckFailed;
}

// -------------------------------------------------------------- scenario ---

int cmd_scenario(const std::string& kind, int n_blocks, int m, double gamma,
                 std::optional<double> p, double theta, std::optional<double> lambda,
                 std::optional<double> t, int steps, const std::string& out) {
    ScenarioSpec spec;
    spec.n_blocks = n_blocks;
    spec.theta = theta;
    spec.trotter_steps = steps;
    if (lambda && t) {
        spec.frequency_mode = true;
        spec.lambda = *lambda;
        spec.t = *t;
    }
    if (p) spec.channel_p = *p;

    ScenarioResult result;
    if (kind == "I-dephasing") {
        spec.kind = ScenarioKind::IDephasing;
        spec.code = CodeSpec::repetition_phase(m);
        spec.noise = LindbladSpec::dephasing(gamma);
        if (spec.frequency_mode) spec.channel_p.reset();
        result = run_scenario1_dephasing(spec);
    } else if (kind == "I-local") {
        spec.kind = ScenarioKind::ILocalNoise;
        spec.code = m == 5 ? CodeSpec::five_qubit_graph() : CodeSpec::repetition_phase(m);
        spec.noise = LindbladSpec::depolarizing(gamma);
        result = run_scenario1_local_noise(spec);
    } else if (kind == "II") {
        spec.kind = ScenarioKind::IITransversal;
        spec.code = m == 2 ? CodeSpec::two_qubit_demo() : CodeSpec::repetition_phase(m);
        spec.noise = LindbladSpec::transversal(gamma);
        result = run_scenario2(spec);
    } else if (kind == "demo") {
        spec.kind = ScenarioKind::TwoQubitDemo;
        m = 2;
        result = run_two_qubit_demo(spec, p.value_or(1.0));
    } else {
        throw CLI::ValidationError("--kind", "expected I-dephasing, I-local, II or demo");
    }

    std::ostringstream table;
    table << "kind,N,m,qfi_closed,qfi_oracle,discrepancy,flags\n";
    table << kind << ',' << n_blocks << ',' << m << ','
          << format_sig12(result.qfi_closed.value) << ',';
    if (result.qfi_oracle)
        table << format_sig12(result.qfi_oracle->value) << ','
              << format_sig12(result.discrepancy) << ',';
    else
        table << ",,";
    for (const auto& f : result.flags) table << f << ';';
    table << '\n';
    std::cout << table.str();
    if (!out.empty()) atomic_write(resolve_out(out), table.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Precision limits of noisy quantum metrology with error-correction"};
    app.require_subcommand(1);

    // ---- qfi
    auto* qfi_cmd = app.add_subcommand("qfi", "Closed-form and spectral QFI of GHZ probes");
    std::string qfi_model = "dephased-ghz", qfi_out, qfi_config, qfi_dump;
    int qfi_n = 2;
    double qfi_p = 1.0;
    std::optional<double> qfi_t;
    auto* qfi_model_opt = qfi_cmd->add_option("--model", qfi_model, "dephased-ghz | depolarized-ghz");
    auto* qfi_n_opt = qfi_cmd->add_option("--N", qfi_n, "number of probes");
    auto* qfi_p_opt = qfi_cmd->add_option("--p", qfi_p, "channel retention parameter");
    qfi_cmd->add_option("--t", qfi_t, "frequency-mode interrogation time");
    qfi_cmd->add_option("--out", qfi_out, "CSV output path");
    qfi_cmd->add_option("--config", qfi_config, "JSON config file");
    qfi_cmd->add_option("--config-out", qfi_dump, "write the effective config");

    // ---- sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Scaling sweep over N");
    std::string sweep_mode = "phase", sweep_values, sweep_grid, sweep_policy = "fixed";
    std::string sweep_out, sweep_svg, sweep_config, sweep_dump;
    int sweep_m = 5;
    double sweep_p = 1.0 - 1e-3, sweep_gamma = 0.01;
    auto* sm = sweep_cmd->add_option("--mode", sweep_mode, "phase | frequency");
    auto* sv = sweep_cmd->add_option("--n-values", sweep_values, "comma-separated N list");
    auto* sg = sweep_cmd->add_option("--n-grid", sweep_grid, "log grid lo:hi:count");
    auto* sp = sweep_cmd->add_option("--m-policy", sweep_policy, "fixed | ceil-log");
    auto* smm = sweep_cmd->add_option("--m", sweep_m, "fixed block size (odd)");
    auto* spp = sweep_cmd->add_option("--p", sweep_p, "phase-mode retention");
    auto* sgg = sweep_cmd->add_option("--gamma", sweep_gamma, "frequency-mode rate");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path");
    sweep_cmd->add_option("--svg", sweep_svg, "optional SVG plot path");
    sweep_cmd->add_option("--config", sweep_config, "JSON config file");
    sweep_cmd->add_option("--config-out", sweep_dump, "write the effective config");

    // ---- optimize-time
    auto* opt_cmd = app.add_subcommand("optimize-time", "Optimal interrogation time");
    double opt_gamma = 0.01, opt_n = 100;
    int opt_m = 3;
    std::string opt_out;
    opt_cmd->add_option("--gamma", opt_gamma, "noise rate")->required();
    opt_cmd->add_option("--N", opt_n, "number of probes")->required();
    opt_cmd->add_option("--m", opt_m, "block size; 1 means unencoded GHZ");
    opt_cmd->add_option("--out", opt_out, "CSV output path");

    // ---- codes
    auto* codes_cmd = app.add_subcommand("codes", "Logical retention tables");
    std::string codes_code = "repetition", codes_m = "3,5,11", codes_out;
    double codes_p = 1.0 - 1e-3, codes_q = 0.9;
    std::optional<double> codes_gamma, codes_t;
    int codes_levels = 2;
    codes_cmd->add_option("--code", codes_code, "repetition | five-qubit");
    codes_cmd->add_option("--m", codes_m, "comma-separated odd block sizes");
    codes_cmd->add_option("--p", codes_p, "physical retention");
    codes_cmd->add_option("--gamma", codes_gamma, "dephasing rate (with --t)");
    codes_cmd->add_option("--t", codes_t, "interrogation time (with --gamma)");
    codes_cmd->add_option("--q", codes_q, "five-qubit no-error probability");
    codes_cmd->add_option("--levels", codes_levels, "concatenation levels");
    codes_cmd->add_option("--out", codes_out, "CSV output path");

    // ---- verify
    auto* verify_cmd = app.add_subcommand("verify", "Oracle cross-check suite");
    std::string verify_check = "all", verify_out;
    int verify_m = 0;
    std::optional<double> verify_tol;
    verify_cmd->add_option("--check", verify_check, "all | mapping | eq3 | qfi");
    verify_cmd->add_option("--m", verify_m, "restrict to one block size");
    verify_cmd->add_option("--tolerance", verify_tol, "override the per-check tolerance");
    verify_cmd->add_option("--out", verify_out, "JSON report path");

    // ---- scenario
    auto* scen_cmd = app.add_subcommand("scenario", "Run one end-to-end pipeline");
    std::string scen_kind = "I-dephasing", scen_out;
    int scen_n = 2, scen_m = 3, scen_steps = 64;
    double scen_gamma = 0.0, scen_theta = 0.1;
    std::optional<double> scen_p, scen_lambda, scen_t;
    scen_cmd->add_option("--kind", scen_kind, "I-dephasing | I-local | II | demo");
    scen_cmd->add_option("--N", scen_n, "number of blocks");
    scen_cmd->add_option("--m", scen_m, "block size");
    scen_cmd->add_option("--gamma", scen_gamma, "noise rate");
    scen_cmd->add_option("--p", scen_p, "direct channel parameter");
    scen_cmd->add_option("--theta", scen_theta, "phase-mode angle");
    scen_cmd->add_option("--lambda", scen_lambda, "frequency-mode rate parameter");
    scen_cmd->add_option("--t", scen_t, "frequency-mode time");
    scen_cmd->add_option("--steps", scen_steps, "Trotter steps");
    scen_cmd->add_option("--out", scen_out, "CSV output path");

    try {
        app.parse(argc, argv);

        if (qfi_cmd->parsed()) {
            static const std::set<std::string> keys{"model", "N", "p", "t", "out"};
            if (!qfi_config.empty()) {
                const json cfg = load_config(qfi_config, "qfi", keys);
                maybe_from_config(cfg, "model", qfi_model_opt, qfi_model);
                maybe_from_config(cfg, "N", qfi_n_opt, qfi_n);
                maybe_from_config(cfg, "p", qfi_p_opt, qfi_p);
                if (cfg.contains("t") && !qfi_t) qfi_t = cfg["t"].get<double>();
                if (cfg.contains("out") && qfi_out.empty()) qfi_out = cfg["out"];
            }
            json effective{{"command", "qfi"}, {"model", qfi_model}, {"N", qfi_n}, {"p", qfi_p}};
            if (qfi_t) effective["t"] = *qfi_t;
            if (!qfi_out.empty()) effective["out"] = qfi_out;
            maybe_dump_config(qfi_dump, effective);
            return cmd_qfi(qfi_model, qfi_n, qfi_p, qfi_t, qfi_out);
        }

        if (sweep_cmd->parsed()) {
            static const std::set<std::string> keys{"mode",   "n-values", "n-grid", "m-policy",
                                                    "m",      "p",        "gamma",  "out",
                                                    "svg"};
            if (!sweep_config.empty()) {
                const json cfg = load_config(sweep_config, "sweep", keys);
                maybe_from_config(cfg, "mode", sm, sweep_mode);
                maybe_from_config(cfg, "n-values", sv, sweep_values);
                maybe_from_config(cfg, "n-grid", sg, sweep_grid);
                maybe_from_config(cfg, "m-policy", sp, sweep_policy);
                maybe_from_config(cfg, "m", smm, sweep_m);
                maybe_from_config(cfg, "p", spp, sweep_p);
                maybe_from_config(cfg, "gamma", sgg, sweep_gamma);
                if (cfg.contains("out") && sweep_out.empty()) sweep_out = cfg["out"];
                if (cfg.contains("svg") && sweep_svg.empty()) sweep_svg = cfg["svg"];
            }
            SweepConfig cfg;
            cfg.mode = sweep_mode == "frequency" ? SweepMode::Frequency : SweepMode::Phase;
            if (sweep_mode != "frequency" && sweep_mode != "phase")
                throw CLI::ValidationError("--mode", "expected phase or frequency");
            cfg.n_values = parse_n_values(sweep_values, sweep_grid);
            if (cfg.n_values.empty())
                throw CLI::ValidationError("--n-values", "empty N grid");
            cfg.m_policy = sweep_policy == "ceil-log" ? MPolicy::CeilLog : MPolicy::Fixed;
            if (sweep_policy != "ceil-log" && sweep_policy != "fixed")
                throw CLI::ValidationError("--m-policy", "expected fixed or ceil-log");
            cfg.m_fixed = sweep_m;
            cfg.p = sweep_p;
            cfg.gamma = sweep_gamma;

            json effective{{"command", "sweep"},   {"mode", sweep_mode},
                           {"m-policy", sweep_policy}, {"m", sweep_m},
                           {"p", sweep_p},         {"gamma", sweep_gamma}};
            if (!sweep_values.empty()) effective["n-values"] = sweep_values;
            if (!sweep_grid.empty()) effective["n-grid"] = sweep_grid;
            if (!sweep_out.empty()) effective["out"] = sweep_out;
            if (!sweep_svg.empty()) effective["svg"] = sweep_svg;
            maybe_dump_config(sweep_dump, effective);
            return cmd_sweep(cfg, sweep_out, sweep_svg);
        }

        if (opt_cmd->parsed()) return cmd_optimize_time(opt_gamma, opt_n, opt_m, opt_out);
        if (codes_cmd->parsed())
            return cmd_codes(codes_code, codes_m, codes_p, codes_gamma, codes_t, codes_levels,
                             codes_q, codes_out);
        if (verify_cmd->parsed()) return cmd_verify(verify_check, verify_m, verify_tol, verify_out);
        if (scen_cmd->parsed())
            return cmd_scenario(scen_kind, scen_n, scen_m, scen_gamma, scen_p, scen_theta,
                                scen_lambda, scen_t, scen_steps, scen_out);
        return kExitInvalidInput;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}
