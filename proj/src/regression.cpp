#include "stab/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"
#include "stab/rng.hpp"

namespace stab {
namespace {

using EigenRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const Matrix& m) {
    return {m.data.data(), static_cast<Eigen::Index>(m.rows),
            static_cast<Eigen::Index>(m.cols)};
}

// Core solve on already-validated data; shared by fit_ridge and the bootstrap.
RidgeModel fit_ridge_unchecked(const Eigen::Ref<const EigenRowMajor>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
                               std::span<const std::string> columns) {
    const Eigen::Index p = x.cols();

    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const EigenRowMajor xc = x.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;

    Eigen::MatrixXd a = xc.transpose() * xc;
    a.diagonal().array() += lambda;
    const Eigen::VectorXd b = xc.transpose() * yc;

    Eigen::VectorXd w;
    if (lambda == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) {
            throw std::runtime_error(
                "singular normal equations at lambda = 0; use lambda > 0");
        }
        w = lu.solve(b);
    } else {
        w = a.ldlt().solve(b);
    }

    RidgeModel model;
    model.lambda = lambda;
    model.weights.assign(w.data(), w.data() + p);
    model.intercept = y_mean - x_mean.dot(w);
    if (!columns.empty()) {
        model.columns.assign(columns.begin(), columns.end());
    } else {
        model.columns.reserve(p);
        for (Eigen::Index j = 0; j < p; ++j) {
            model.columns.push_back("x" + std::to_string(j));
        }
    }
    return model;
}

void mean_and_stderr(std::span<const double> values, double& mean, double& stderr_out) {
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    mean = sum / n;
    if (values.size() < 2) {
        stderr_out = 0.0;
        return;
    }
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    stderr_out = std::sqrt(sq / (n - 1.0));
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
        throw std::runtime_error("correlate_weights: zero variance");
    }
    return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace

double RidgeModel::predict(std::span<const double> row) const {
    if (row.size() != weights.size()) {
        throw std::invalid_argument("predict: row length does not match model columns");
    }
    double out = intercept;
    for (std::size_t j = 0; j < row.size(); ++j) out += weights[j] * row[j];
    return out;
}

RidgeModel fit_ridge(const Matrix& x, std::span<const double> y, double lambda,
                     std::span<const std::string> columns) {
    if (x.rows != y.size()) throw std::invalid_argument("fit_ridge: X rows != |y|");
    if (x.rows == 0 || x.cols == 0) throw std::invalid_argument("fit_ridge: empty problem");
    if (lambda < 0.0) throw std::invalid_argument("fit_ridge: lambda must be >= 0");
    if (!columns.empty() && columns.size() != x.cols) {
        throw std::invalid_argument("fit_ridge: column names do not match X");
    }
    const Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
    return fit_ridge_unchecked(as_eigen(x), ym, lambda, columns);
}

double r_squared(const RidgeModel& model, const Matrix& x, std::span<const double> y) {
    if (x.rows != y.size() || x.cols != model.weights.size()) {
        throw std::invalid_argument("r_squared: shape mismatch");
    }
    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(y.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double pred = model.predict(x.row(i));
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
    }
    if (ss_tot == 0.0) throw std::runtime_error("r_squared: constant y (SS_tot = 0)");
    return 1.0 - ss_res / ss_tot;
}

BootstrapRidgeResult bootstrap_fit(const Matrix& x, std::span<const double> y,
                                   std::span<const std::string> columns, double lambda,
                                   int n_resamples, std::uint64_t seed, BootstrapMode mode) {
    if (n_resamples < 2) throw std::invalid_argument("bootstrap_fit: N must be >= 2");
    if (x.rows != y.size()) throw std::invalid_argument("bootstrap_fit: X rows != |y|");

    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    const auto xe = as_eigen(x);
    const Eigen::Map<const Eigen::VectorXd> ye(y.data(), static_cast<Eigen::Index>(n));

    std::vector<std::vector<double>> weights(n_resamples);
    std::vector<double> r2s(n_resamples, 0.0);
    std::vector<std::uint8_t> skipped(n_resamples, 0);
    std::string first_error;

#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n_resamples; ++i) {
        try {
            std::mt19937_64 gen(rng::derive_seed(seed, static_cast<std::uint64_t>(i)));
            if (mode == BootstrapMode::kRows) {
                EigenRowMajor xb(n, p);
                Eigen::VectorXd yb(n);
                for (std::size_t r = 0; r < n; ++r) {
                    const auto pick = rng::bounded(gen, n);
                    xb.row(static_cast<Eigen::Index>(r)) =
                        xe.row(static_cast<Eigen::Index>(pick));
                    yb(static_cast<Eigen::Index>(r)) = ye(static_cast<Eigen::Index>(pick));
                }
                if ((yb.array() == yb(0)).all()) {
                    skipped[i] = 1;
                    continue;
                }
                RidgeModel m = fit_ridge_unchecked(xb, yb, lambda, columns);
                const Eigen::VectorXd pred =
                    xb * Eigen::Map<const Eigen::VectorXd>(m.weights.data(), p).eval() +
                    Eigen::VectorXd::Constant(n, m.intercept);
                const double ss_res = (yb - pred).squaredNorm();
                const double ss_tot = (yb.array() - yb.mean()).matrix().squaredNorm();
                r2s[i] = 1.0 - ss_res / ss_tot;
                weights[i] = std::move(m.weights);
            } else {
                // Column resampling: duplicate columns split their weight, so
                // copies are summed back onto the original column.
                std::vector<std::size_t> pick(p);
                for (auto& c : pick) c = rng::bounded(gen, p);
                EigenRowMajor xb(n, p);
                for (std::size_t j = 0; j < p; ++j) {
                    xb.col(static_cast<Eigen::Index>(j)) =
                        xe.col(static_cast<Eigen::Index>(pick[j]));
                }
                if ((ye.array() == ye(0)).all()) {
                    skipped[i] = 1;
                    continue;
                }
                RidgeModel m = fit_ridge_unchecked(xb, ye, lambda, {});
                std::vector<double> mapped(p, 0.0);
                for (std::size_t j = 0; j < p; ++j) mapped[pick[j]] += m.weights[j];
                const Eigen::VectorXd pred =
                    xb * Eigen::Map<const Eigen::VectorXd>(m.weights.data(), p).eval() +
                    Eigen::VectorXd::Constant(n, m.intercept);
                const double ss_res = (ye - pred).squaredNorm();
                const double ss_tot = (ye.array() - ye.mean()).matrix().squaredNorm();
                r2s[i] = 1.0 - ss_res / ss_tot;
                weights[i] = std::move(mapped);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error("bootstrap_fit: " + first_error);

    BootstrapRidgeResult result;
    result.lambda = lambda;
    result.resamples = n_resamples;
    result.skipped = static_cast<int>(std::count(skipped.begin(), skipped.end(), 1));
    if (result.skipped * 10 > n_resamples) {
        throw std::runtime_error("bootstrap_fit: more than 10% of resamples degenerate (" +
                                 std::to_string(result.skipped) + " of " +
                                 std::to_string(n_resamples) + ")");
    }

    if (!columns.empty()) {
        result.columns.assign(columns.begin(), columns.end());
    } else {
        for (std::size_t j = 0; j < p; ++j) result.columns.push_back("x" + std::to_string(j));
    }

    std::vector<double> kept_r2;
    kept_r2.reserve(n_resamples);
    for (int i = 0; i < n_resamples; ++i) {
        if (!skipped[i]) kept_r2.push_back(r2s[i]);
    }
    mean_and_stderr(kept_r2, result.r2_mean, result.r2_stderr);

    result.weight_mean.resize(p);
    result.weight_stderr.resize(p);
    std::vector<double> column_samples;
    column_samples.reserve(kept_r2.size());
    for (std::size_t j = 0; j < p; ++j) {
        column_samples.clear();
        for (int i = 0; i < n_resamples; ++i) {
            if (!skipped[i]) column_samples.push_back(weights[i][j]);
        }
        mean_and_stderr(column_samples, result.weight_mean[j], result.weight_stderr[j]);
    }
    return result;
}

std::vector<SignificantWeight> significant_weights(const BootstrapRidgeResult& result,
                                                   double z) {
    std::vector<SignificantWeight> out;
    for (std::size_t j = 0; j < result.weight_mean.size(); ++j) {
        const double mean = result.weight_mean[j];
        const double se = result.weight_stderr[j];
        if (std::abs(mean) > 0.0 && std::abs(mean) >= z * se) {
            out.push_back({result.columns[j], mean, se});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.mean != b.mean) return a.mean < b.mean;
        return a.column < b.column;
    });
    return out;
}

Correlation correlate_weights(std::span<const double> a, std::span<const double> b,
                              int m_permutations, std::uint64_t seed) {
    if (a.size() != b.size()) throw std::invalid_argument("correlate_weights: length mismatch");
    if (a.size() < 3) throw std::invalid_argument("correlate_weights: need >= 3 shared columns");
    if (m_permutations < 1) throw std::invalid_argument("correlate_weights: M must be >= 1");

    Correlation c;
    c.r = pearson(a, b);

    std::mt19937_64 gen(rng::derive_seed(seed, 0));
    std::vector<double> shuffled(b.begin(), b.end());
    const double target = std::abs(c.r);
    int hits = 0;
    for (int m = 0; m < m_permutations; ++m) {
        rng::shuffle(shuffled, gen);
        if (std::abs(pearson(a, shuffled)) >= target) ++hits;
    }
    c.p = static_cast<double>(1 + hits) / static_cast<double>(m_permutations + 1);
    return c;
}

Explanation explain(const RidgeModel& model, std::span<const double> row,
                    double weight_threshold, std::optional<double> ground_truth) {
    Explanation out;
    out.prediction = model.predict(row);
    out.ground_truth = ground_truth;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] != 0.0 && std::abs(model.weights[j]) >= weight_threshold) {
            out.contributions.emplace_back(model.columns[j], model.weights[j]);
        }
    }
    return out;
}

Matrix to_matrix(const BinaryFeatureMatrix& features) {
    Matrix m(features.languages.size(), features.columns.size());
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        m.data[i] = static_cast<double>(features.cells[i]);
    }
    return m;
}

std::vector<std::string> column_names(const BinaryFeatureMatrix& features) {
    std::vector<std::string> names;
    names.reserve(features.columns.size());
    for (const auto& col : features.columns) names.push_back(col.name());
    return names;
}

void write_model_json(const RidgeModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["columns"] = model.columns;
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["lambda"] = model.lambda;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model: " + path.string());
    out << j.dump(2) << '\n';
}

RidgeModel load_model_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model: " + path.string());
    nlohmann::json j;
    in >> j;
    RidgeModel model;
    model.columns = j.at("columns").get<std::vector<std::string>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.lambda = j.at("lambda").get<double>();
    if (model.columns.size() != model.weights.size()) {
        throw std::runtime_error(path.string() + ": columns and weights disagree");
    }
    return model;
}

void write_bootstrap_tsv(const BootstrapRidgeResult& result, double z,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bootstrap report: " + path.string());
    out << "column\tweight_mean\tstderr\tsignificant\n";
    char buf[80];
    for (std::size_t j = 0; j < result.columns.size(); ++j) {
        const double mean = result.weight_mean[j];
        const double se = result.weight_stderr[j];
        const bool sig = std::abs(mean) > 0.0 && std::abs(mean) >= z * se;
        std::snprintf(buf, sizeof buf, "%.6f\t%.6f\t%d", mean, se, sig ? 1 : 0);
        out << result.columns[j] << '\t' << buf << '\n';
    }
}

void write_explain_tsv(const Explanation& explanation, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write explanation: " + path.string());
    out << "attribute\tweight\n";
    char buf[32];
    for (const auto& [column, weight] : explanation.contributions) {
        std::snprintf(buf, sizeof buf, "%.6f", weight);
        out << column << '\t' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.6f", explanation.prediction);
    out << "Predicted value\t" << buf << '\n';
    if (explanation.ground_truth) {
        std::snprintf(buf, sizeof buf, "%.6f", *explanation.ground_truth);
        out << "Ground truth: average stability\t" << buf << '\n';
    }
}

}  // namespace stab
