#pragma once

// SVG comparison and difference charts for result rows.
//
// Comparison chart: x = n on a log2 axis, y = |error| on a log10 axis, one
// polyline per aggregation rule plus a red vertical marker between them at
// every sample size. Difference chart: x as above, y = |E'| - |E| on a linear
// axis with a dashed zero line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rqmc/harness.hpp"

namespace rqmc {

/// Fixed chart geometry, in SVG user units.
struct PlotFrame {
    static constexpr double width = 640.0;
    static constexpr double height = 420.0;
    static constexpr double left = 80.0;
    static constexpr double right = 620.0;
    static constexpr double top = 40.0;
    static constexpr double bottom = 360.0;

    double x_min = 0.0, x_max = 1.0;  // log2 n
    double y_min = 0.0, y_max = 1.0;  // log10 |E| or raw difference

    double x_px(double x) const { return left + (x - x_min) / (x_max - x_min) * (right - left); }
    double y_px(double y) const { return bottom - (y - y_min) / (y_max - y_min) * (bottom - top); }
};

/// Decade range [floor(log10 min), ceil(log10 max)] over the positive values.
inline std::pair<double, double> log10_range(const std::vector<double>& values) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double v : values) {
        if (v > 0.0) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo <= hi)) {
        return {-16.0, 0.0};
    }
    double a = std::floor(std::log10(lo));
    double b = std::ceil(std::log10(hi));
    if (b <= a) b = a + 1.0;
    return {a, b};
}

/// Zero-inclusive linear range, padded by 5% of the span.
inline std::pair<double, double> linear_range(const std::vector<double>& values) {
    double lo = 0.0, hi = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 0.0) {
        return {-1.0, 1.0};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string svg_open(const std::string& title) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(PlotFrame::width) + "\" height=\"" +
         px(PlotFrame::height) + "\" viewBox=\"0 0 " + px(PlotFrame::width) + " " + px(PlotFrame::height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + px(PlotFrame::width) + "\" height=\"" + px(PlotFrame::height) +
         "\" fill=\"white\"/>\n";
    s += "<text x=\"" + px(PlotFrame::width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + title +
         "</text>\n";
    return s;
}

inline std::string line(double x1, double y1, double x2, double y2, const std::string& attrs) {
    return "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) + "\" " + attrs +
           "/>\n";
}

inline std::string frame_and_x_axis(const PlotFrame& f, const std::vector<double>& xs) {
    std::string s;
    s += "<rect class=\"plot-area\" x=\"" + px(PlotFrame::left) + "\" y=\"" + px(PlotFrame::top) + "\" width=\"" +
         px(PlotFrame::right - PlotFrame::left) + "\" height=\"" + px(PlotFrame::bottom - PlotFrame::top) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double x : xs) {
        const double X = f.x_px(x);
        s += line(X, PlotFrame::bottom, X, PlotFrame::bottom + 5, "stroke=\"black\"");
        s += "<text x=\"" + px(X) + "\" y=\"" + px(PlotFrame::bottom + 20) + "\" text-anchor=\"middle\">2<tspan dy=\"-6\" font-size=\"9\">" +
             std::to_string(static_cast<int>(x)) + "</tspan></text>\n";
    }
    s += "<text x=\"" + px((PlotFrame::left + PlotFrame::right) / 2) + "\" y=\"" + px(PlotFrame::bottom + 45) +
         "\" text-anchor=\"middle\">sample size n</text>\n";
    return s;
}

inline std::string points_attr(const PlotFrame& f, const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ' ';
        s += px(f.x_px(xs[i])) + "," + px(f.y_px(ys[i]));
    }
    return s;
}

}  // namespace detail

/// Comparison chart for one (kind, dim) series; rows sorted by log2n.
inline std::string comparison_svg(const std::vector<ResultRow>& series) {
    std::vector<double> xs, e_med, e_mean;
    for (const auto& r : series) {
        xs.push_back(r.log2n);
        e_med.push_back(r.abs_E);
        e_mean.push_back(r.abs_E_prime);
    }
    std::vector<double> all = e_med;
    all.insert(all.end(), e_mean.begin(), e_mean.end());
    const auto [lo, hi] = log10_range(all);
    PlotFrame f{xs.front(), xs.back(), lo, hi};
    auto to_log = [lo](double v) { return v > 0.0 ? std::max(std::log10(v), lo) : lo; };
    std::vector<double> y_med, y_mean;
    for (double v : e_med) y_med.push_back(to_log(v));
    for (double v : e_mean) y_mean.push_back(to_log(v));

    const auto& r0 = series.front();
    std::string s = detail::svg_open(to_string(r0.pointset_kind) + ", d = " + std::to_string(r0.dim) +
                                     ": absolute error vs sample size");
    s += detail::frame_and_x_axis(f, xs);
    for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
        const double Y = f.y_px(e);
        s += detail::line(PlotFrame::left - 5, Y, PlotFrame::left, Y, "stroke=\"black\"");
        s += "<text x=\"" + detail::px(PlotFrame::left - 8) + "\" y=\"" + detail::px(Y + 4) +
             "\" text-anchor=\"end\">10<tspan dy=\"-6\" font-size=\"9\">" + std::to_string(e) + "</tspan></text>\n";
    }
    s += "<text x=\"20\" y=\"" + detail::px((PlotFrame::top + PlotFrame::bottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + detail::px((PlotFrame::top + PlotFrame::bottom) / 2) +
         ")\">|error|</text>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double X = f.x_px(xs[i]);
        s += detail::line(X, f.y_px(y_med[i]), X, f.y_px(y_mean[i]),
                          "class=\"difference-marker\" stroke=\"#d62728\" stroke-width=\"1.5\"");
    }
    s += "<polyline class=\"median-of-means\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"" +
         detail::points_attr(f, xs, y_med) + "\"/>\n";
    s += "<polyline class=\"mean-of-means\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" "
         "stroke-dasharray=\"6,4\" points=\"" +
         detail::points_attr(f, xs, y_mean) + "\"/>\n";
    const double lx = PlotFrame::right - 150, ly = PlotFrame::top + 16;
    s += detail::line(lx, ly, lx + 24, ly, "stroke=\"#1f77b4\" stroke-width=\"2\"");
    s += "<text x=\"" + detail::px(lx + 30) + "\" y=\"" + detail::px(ly + 4) + "\">median-of-means</text>\n";
    s += detail::line(lx, ly + 18, lx + 24, ly + 18, "stroke=\"#ff7f0e\" stroke-width=\"2\" stroke-dasharray=\"6,4\"");
    s += "<text x=\"" + detail::px(lx + 30) + "\" y=\"" + detail::px(ly + 22) + "\">mean-of-means</text>\n";
    s += "</svg>\n";
    return s;
}

/// Difference chart |E'| - |E| for one (kind, dim) series; rows sorted by log2n.
inline std::string difference_svg(const std::vector<ResultRow>& series) {
    std::vector<double> xs, diffs;
    for (const auto& r : series) {
        xs.push_back(r.log2n);
        diffs.push_back(r.diff);
    }
    const auto [lo, hi] = linear_range(diffs);
    PlotFrame f{xs.front(), xs.back(), lo, hi};

    const auto& r0 = series.front();
    std::string s = detail::svg_open(to_string(r0.pointset_kind) + ", d = " + std::to_string(r0.dim) +
                                     ": |E'| - |E| (positive: median-of-means better)");
    s += detail::frame_and_x_axis(f, xs);
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        const double Y = f.y_px(v);
        s += detail::line(PlotFrame::left - 5, Y, PlotFrame::left, Y, "stroke=\"black\"");
        s += "<text x=\"" + detail::px(PlotFrame::left - 8) + "\" y=\"" + detail::px(Y + 4) +
             "\" text-anchor=\"end\">" + detail::short_real(v) + "</text>\n";
    }
    s += detail::line(PlotFrame::left, f.y_px(0.0), PlotFrame::right, f.y_px(0.0),
                      "class=\"zero-line\" stroke=\"gray\" stroke-dasharray=\"4,3\"");
    s += "<polyline class=\"difference\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"" +
         detail::points_attr(f, xs, diffs) + "\"/>\n";
    s += "</svg>\n";
    return s;
}

inline std::string plot_basename(PointSetKind kind, std::size_t dim, const std::string& which) {
    return to_string(kind) + "_d" + std::to_string(dim) + "_" + which + ".svg";
}

/// Writes one comparison and one difference chart per (kind, dim) and
/// returns the paths in (kind, dim) order.
inline std::vector<std::filesystem::path> emit_plots(const std::vector<ResultRow>& rows,
                                                     const std::filesystem::path& outdir) {
    std::map<std::pair<int, std::size_t>, std::vector<ResultRow>> groups;
    for (const auto& r : rows) {
        groups[{static_cast<int>(r.pointset_kind), r.dim}].push_back(r);
    }
    if (groups.empty()) {
        throw std::invalid_argument("emit_plots: no rows");
    }
    for (auto& [key, series] : groups) {
        std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) { return a.log2n < b.log2n; });
        const std::string name = "(" + to_string(series.front().pointset_kind) + ", d=" + std::to_string(key.second) + ")";
        if (series.size() < 2) {
            throw std::invalid_argument("emit_plots: cell " + name + " has fewer than 2 sample sizes");
        }
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (series[i].log2n == series[i - 1].log2n) {
                throw std::invalid_argument("emit_plots: cell " + name + " has duplicate rows for log2n=" +
                                            std::to_string(series[i].log2n));
            }
        }
    }

    std::filesystem::create_directories(outdir);
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw std::runtime_error("emit_plots: cannot write " + p.string());
        written.push_back(p);
    };
    for (const auto& [key, series] : groups) {
        const auto kind = series.front().pointset_kind;
        write(outdir / plot_basename(kind, key.second, "comparison"), comparison_svg(series));
        write(outdir / plot_basename(kind, key.second, "difference"), difference_svg(series));
    }
    return written;
}

}  // namespace rqmc
