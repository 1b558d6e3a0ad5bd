#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stab/matrix.hpp"
#include "stab/wals.hpp"

namespace stab {

struct RidgeModel {
    std::vector<std::string> columns;
    std::vector<double> weights;
    double intercept = 0.0;
    double lambda = 0.0;

    double predict(std::span<const double> row) const;
};

// Closed-form ridge fit: y and the columns of X are centered, weights solve
// (Xc' Xc + lambda I) w = Xc' y, the intercept restores the means and is not
// penalized. Throws on a singular system at lambda = 0.
RidgeModel fit_ridge(const Matrix& x, std::span<const double> y, double lambda,
                     std::span<const std::string> columns = {});

// 1 - SS_res / SS_tot with SS_tot about the mean of y. Throws when y is
// constant.
double r_squared(const RidgeModel& model, const Matrix& x, std::span<const double> y);

enum class BootstrapMode {
    kRows,     // resample observations (languages) with replacement
    kColumns,  // alternative reading: resample feature columns with replacement
};

struct BootstrapRidgeResult {
    std::vector<std::string> columns;
    std::vector<double> weight_mean;
    std::vector<double> weight_stderr;  // sample standard deviation across resamples
    double r2_mean = 0.0;
    double r2_stderr = 0.0;
    int resamples = 0;  // requested N
    int skipped = 0;    // degenerate resamples (constant y)
    double lambda = 0.0;
};

// N resamples with replacement, one ridge fit each, means and standard errors
// of weights and in-resample R^2. Deterministic for a given seed regardless
// of thread count. Throws when more than 10% of resamples are degenerate.
BootstrapRidgeResult bootstrap_fit(const Matrix& x, std::span<const double> y,
                                   std::span<const std::string> columns, double lambda,
                                   int n_resamples = 1000, std::uint64_t seed = 0,
                                   BootstrapMode mode = BootstrapMode::kRows);

struct SignificantWeight {
    std::string column;
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Columns with |mean| >= z * stderr and |mean| > 0, sorted by mean ascending.
std::vector<SignificantWeight> significant_weights(const BootstrapRidgeResult& result,
                                                   double z = 2.0);

struct Correlation {
    double r = 0.0;
    double p = 1.0;  // two-sided permutation p-value, in (0, 1]
};

// Pearson correlation over paired weights (>= 3 entries) with a permutation
// test (m_permutations shuffles), deterministic given the seed.
Correlation correlate_weights(std::span<const double> a, std::span<const double> b,
                              int m_permutations = 10000, std::uint64_t seed = 0);

struct Explanation {
    double prediction = 0.0;
    std::optional<double> ground_truth;
    std::vector<std::pair<std::string, double>> contributions;  // active columns, |w| >= threshold
};

// Prediction for one binary row plus the active columns whose weight
// magnitude reaches the threshold.
Explanation explain(const RidgeModel& model, std::span<const double> row,
                    double weight_threshold = 0.3,
                    std::optional<double> ground_truth = std::nullopt);

Matrix to_matrix(const BinaryFeatureMatrix& features);
std::vector<std::string> column_names(const BinaryFeatureMatrix& features);

void write_model_json(const RidgeModel& model, const std::filesystem::path& path);
RidgeModel load_model_json(const std::filesystem::path& path);
void write_bootstrap_tsv(const BootstrapRidgeResult& result, double z,
                         const std::filesystem::path& path);
void write_explain_tsv(const Explanation& explanation, const std::filesystem::path& path);

}  // namespace stab
