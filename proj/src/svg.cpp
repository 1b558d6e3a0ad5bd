#include "stab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stab::svg {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 70, kRight = 680, kTop = 50, kBottom = 460;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0, hi = 1;
    double scale(double v, double out_lo, double out_hi) const {
        const double t = (v - lo) / (hi - lo);
        return out_lo + t * (out_hi - out_lo);
    }
};

Range nice_range(double lo, double hi) {
    if (hi <= lo) hi = lo + 1;
    const double pad = 0.05 * (hi - lo);
    lo = std::min(0.0, lo - pad);
    hi = hi + pad;
    return {lo, hi};
}

void axes(std::string& out, const Range& xr, const Range& yr, const std::string& title,
          const std::string& x_label, const std::string& y_label, int x_ticks, int y_ticks) {
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + escape(title) + "</text>\n";
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= x_ticks; ++t) {
        const double v = xr.lo + (xr.hi - xr.lo) * t / x_ticks;
        const double px = xr.scale(v, kLeft, kRight);
        out += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(kBottom + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(kBottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(v) + "</text>\n";
    }
    for (int t = 0; t <= y_ticks; ++t) {
        const double v = yr.lo + (yr.hi - yr.lo) * t / y_ticks;
        const double py = yr.scale(v, kBottom, kTop);
        out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(kLeft) +
               "\" y2=\"" + fmt(py) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(v) +
               "</text>\n";
    }
    out += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kHeight - 15) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + fmt((kTop + kBottom) / 2) + ")\">" +
           escape(y_label) + "</text>\n";
}

}  // namespace

std::string line_chart(std::span<const Series> series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("line_chart: no series");
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series) {
        if (s.xs.empty() || s.xs.size() != s.ys.size()) {
            throw std::invalid_argument("line_chart: series '" + s.label + "' is empty or ragged");
        }
        for (double x : s.xs) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
        }
        for (double y : s.ys) {
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    const Range xr{std::min(0.0, x_lo), x_hi};
    const Range yr = nice_range(y_lo, y_hi);

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                      "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
                      fmt(kHeight) + "\">\n";
    axes(out, xr, yr, title, x_label, y_label, 10, 10);

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        std::string points;
        for (std::size_t p = 0; p < series[i].xs.size(); ++p) {
            points += fmt(xr.scale(series[i].xs[p], kLeft, kRight)) + "," +
                      fmt(yr.scale(series[i].ys[p], kBottom, kTop)) + " ";
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.8\" points=\"" + points + "\"/>\n";
        const double ly = kTop + 18.0 * static_cast<double>(i);
        out += "<rect x=\"" + fmt(kRight + 14) + "\" y=\"" + fmt(ly - 9) +
               "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + fmt(kRight + 30) + "\" y=\"" + fmt(ly + 2) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series[i].label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

GroupStats summarize(const std::string& label, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty group '" + label + "'");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = static_cast<std::size_t>(std::ceil(pos));
        const double frac = pos - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return {label,        values.front(), quantile(0.25), quantile(0.5),
            quantile(0.75), values.back(),  values.size()};
}

std::string box_chart(std::span<const GroupStats> groups, const std::string& title,
                      const std::string& y_label) {
    if (groups.empty()) throw std::invalid_argument("box_chart: no groups");
    double y_lo = 1e300, y_hi = -1e300;
    for (const auto& g : groups) {
        y_lo = std::min(y_lo, g.min);
        y_hi = std::max(y_hi, g.max);
    }
    const Range yr = nice_range(y_lo, y_hi);

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
                      "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
                      fmt(kHeight) + "\">\n";
    const Range xr{0.0, static_cast<double>(groups.size())};
    axes(out, xr, yr, title, "", y_label, 1, 10);

    const double slot = (kRight - kLeft) / static_cast<double>(groups.size());
    const double half_box = std::min(40.0, slot * 0.3);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double y_min = yr.scale(g.min, kBottom, kTop);
        const double y_max = yr.scale(g.max, kBottom, kTop);
        const double y_q1 = yr.scale(g.q1, kBottom, kTop);
        const double y_q3 = yr.scale(g.q3, kBottom, kTop);
        const double y_med = yr.scale(g.median, kBottom, kTop);
        const char* color = kPalette[i % std::size(kPalette)];

        out += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(y_min) + "\" x2=\"" + fmt(cx) +
               "\" y2=\"" + fmt(y_max) + "\" stroke=\"black\"/>\n";
        out += "<rect x=\"" + fmt(cx - half_box) + "\" y=\"" + fmt(y_q3) + "\" width=\"" +
               fmt(2 * half_box) + "\" height=\"" + fmt(y_q1 - y_q3) + "\" fill=\"" + color +
               "\" fill-opacity=\"0.5\" stroke=\"black\"/>\n";
        out += "<line x1=\"" + fmt(cx - half_box) + "\" y1=\"" + fmt(y_med) + "\" x2=\"" +
               fmt(cx + half_box) + "\" y2=\"" + fmt(y_med) +
               "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(cx) + "\" y=\"" + fmt(kBottom + 35) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               escape(g.label) + " (n=" + std::to_string(g.n) + ")</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace stab::svg
