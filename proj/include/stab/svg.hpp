#pragma once

#include <span>
#include <string>
#include <vector>

namespace stab::svg {

struct Series {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

// Standalone SVG line chart, one polyline per series, with axes and legend.
// Deterministic output (fixed palette, fixed number formatting).
std::string line_chart(std::span<const Series> series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

struct GroupStats {
    std::string label;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    std::size_t n = 0;
};

// Five-number summary with linearly interpolated quartiles.
GroupStats summarize(const std::string& label, std::vector<double> values);

// Box-style summary chart, one box per group.
std::string box_chart(std::span<const GroupStats> groups, const std::string& title,
                      const std::string& y_label);

}  // namespace stab::svg
