#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stab {

// Dense row-major matrix of doubles. Row access is the hot path (one row per
// word), so rows are contiguous.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

}  // namespace stab
