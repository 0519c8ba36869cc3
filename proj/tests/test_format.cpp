#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "qecmet/format.hpp"

using namespace qecmet;

TEST_CASE("12-significant-digit formatting is stable") {
    CHECK(format_sig12(1.0) == "1.00000000000e+00");
    CHECK(format_sig12(0.999) == "9.99000000000e-01");
    CHECK(format_sig12(9.20046923843e-16) == "9.20046923843e-16");
    CHECK(format_sig12(-2.5e5) == "-2.50000000000e+05");
}

TEST_CASE("sweep CSV is deterministic and carries the pinned header") {
    SweepConfig cfg;
    cfg.mode = SweepMode::Phase;
    cfg.p = 1.0 - 1e-3;
    cfg.m_fixed = 5;
    cfg.n_values = {10, 100, 1000};

    const auto rows = scaling_sweep(cfg);
    const std::string a = sweep_rows_to_csv(rows);
    const std::string b = sweep_rows_to_csv(scaling_sweep(cfg));
    CHECK(a == b);
    CHECK(a.rfind("N,m,gamma,t_opt,f_per_t,delta_lambda_sqrtT,baseline_parallel,"
                  "baseline_classical,baseline_transversal,heisenberg_retention,flags\n",
                  0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 4);  // header + three rows
}

TEST_CASE("atomic write leaves no temp file behind") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qecmet_format_test";
    fs::remove_all(dir);
    const fs::path target = dir / "out.csv";
    atomic_write(target, "hello\n");
    CHECK(fs::exists(target));
    CHECK_FALSE(fs::exists(dir / "out.csv.tmp"));
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "hello\n");
    fs::remove_all(dir);
}

TEST_CASE("log-log slope fits") {
    std::vector<double> xs, inv, invsqrt;
    for (double x : {10.0, 100.0, 1000.0, 10000.0}) {
        xs.push_back(x);
        inv.push_back(3.0 / x);
        invsqrt.push_back(0.7 / std::sqrt(x));
    }
    CHECK(fit_loglog_slope(xs, inv) == Catch::Approx(-1.0).epsilon(1e-12));
    CHECK(fit_loglog_slope(xs, invsqrt) == Catch::Approx(-0.5).epsilon(1e-12));
    CHECK_THROWS_AS(fit_loglog_slope({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({1.0, -2.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("svg plot contains the series and slope guides") {
    SvgSeries s1{"encoded", "#d62728", {10, 100, 1000}, {0.1, 0.01, 0.001}};
    SvgSeries s2{"classical", "#1f77b4", {10, 100, 1000}, {0.3, 0.095, 0.03}};
    const std::string svg = svg_loglog_plot({s1, s2}, "N", "delta");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("slope -1") != std::string::npos);
    CHECK(svg.find("slope -1/2") != std::string::npos);
    CHECK(svg.find("encoded") != std::string::npos);
    CHECK(svg.find("classical") != std::string::npos);
}
