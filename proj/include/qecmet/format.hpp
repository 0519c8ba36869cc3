#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecmet/estimation.hpp"

namespace qecmet {

/// Fixed 12-significant-digit scientific notation; the CSV number format.
inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

/// Writes via a temp file in the same directory, then renames into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

inline const char* kSweepCsvHeader =
    "N,m,gamma,t_opt,f_per_t,delta_lambda_sqrtT,baseline_parallel,baseline_classical,"
    "baseline_transversal,heisenberg_retention,flags";

inline std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_sig12(r.n_probes) << ',' << r.m << ',' << format_sig12(r.gamma) << ','
            << format_sig12(r.t_opt) << ',' << format_sig12(r.f_per_t) << ','
            << format_sig12(r.delta_lambda_sqrtT) << ',' << format_sig12(r.baseline_parallel)
            << ',' << format_sig12(r.baseline_classical) << ','
            << format_sig12(r.baseline_transversal) << ','
            << format_sig12(r.heisenberg_retention) << ',' << r.flags << '\n';
    }
    return out.str();
}

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || ys[i] <= 0)
            throw std::invalid_argument("fit_loglog_slope: values must be positive");
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("fit_loglog_slope: degenerate x values");
    return (n * sxy - sx * sy) / denom;
}

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> xs, ys;
};

/// Minimal log-log SVG plot: axes, data polylines, and dashed slope guides
/// for -1, -1/2 and -5/6 anchored at the first data point.
inline std::string svg_loglog_plot(const std::vector<SvgSeries>& series,
                                   const std::string& x_label, const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("svg_loglog_plot: no series");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (s.xs[i] <= 0 || s.ys[i] <= 0) continue;
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    }
    if (!(xmin < xmax) || !(ymin < ymax))
        throw std::invalid_argument("svg_loglog_plot: degenerate data range");

    const double w = 640, h = 480, pad = 60;
    const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
    const double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    auto px = [&](double x) { return pad + (std::log10(x) - lx0) / (lx1 - lx0) * (w - 2 * pad); };
    auto py = [&](double y) { return h - pad - (std::log10(y) - ly0) / (ly1 - ly0) * (h - 2 * pad); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
        << h - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
        << h - pad << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 15
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" "
        << "transform=\"rotate(-90 18 " << h / 2 << ")\">" << y_label << "</text>\n";

    // slope guides through the first series' first point
    const auto& ref = series.front();
    if (!ref.xs.empty()) {
        const double x0 = ref.xs.front(), y0 = ref.ys.front();
        const struct { double slope; const char* label; } guides[] = {
            {-1.0, "slope -1"}, {-0.5, "slope -1/2"}, {-5.0 / 6.0, "slope -5/6"}};
        for (const auto& g : guides) {
            const double y_end = y0 * std::pow(xmax / x0, g.slope);
            out << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(xmax)
                << "\" y2=\"" << py(std::max(y_end, ymin * 1e-2)) << "\" stroke=\"#999\" "
                << "stroke-dasharray=\"5,4\"/>\n";
            out << "<text x=\"" << px(xmax) - 70 << "\" y=\"" << py(std::max(y_end, ymin * 1e-2)) - 4
                << "\" font-size=\"11\" fill=\"#777\">" << g.label << "</text>\n";
        }
    }

    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (s.xs[i] <= 0 || s.ys[i] <= 0) continue;
            out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
        }
        out << "\"/>\n";
    }
    double legend_y = pad + 8;
    for (const auto& s : series) {
        out << "<text x=\"" << w - pad - 150 << "\" y=\"" << legend_y << "\" font-size=\"12\" fill=\""
            << s.color << "\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace qecmet
