#include "stab/ref.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace stab::ref {
namespace {

double cosine_raw(std::span<const double> u, std::span<const double> v) {
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw std::runtime_error("reference cosine: zero vector");
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

// restrict id -> space row, resolved once per (space, restrict) pair
std::vector<int> map_restrict(const EmbeddingSpace& space, const Vocabulary& restrict_vocab) {
    std::vector<int> rows(restrict_vocab.size());
    for (std::size_t r = 0; r < restrict_vocab.size(); ++r) {
        rows[r] = space.vocab.id_of(restrict_vocab.word(r));
        if (rows[r] < 0) {
            throw std::runtime_error("reference: restrict word missing from space: " +
                                     restrict_vocab.word(r));
        }
    }
    return rows;
}

NeighborList one_query(const EmbeddingSpace& space, std::span<const int> rows, int query,
                       int k) {
    std::vector<std::pair<int, double>> all;
    all.reserve(rows.size() - 1);
    const auto query_row = space.matrix.row(static_cast<std::size_t>(rows[query]));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(r) == query) continue;
        all.emplace_back(static_cast<int>(r),
                         cosine_raw(query_row, space.matrix.row(rows[r])));
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (all.size() > static_cast<std::size_t>(k)) all.resize(static_cast<std::size_t>(k));
    return NeighborList{query, std::move(all)};
}

double overlap_of_lists(const NeighborList& a, const NeighborList& b) {
    std::set<int> sa, sb;
    for (const auto& [id, sim] : a.neighbors) sa.insert(id);
    for (const auto& [id, sim] : b.neighbors) sb.insert(id);
    std::size_t hits = 0;
    for (int id : sa) hits += sb.count(id);
    return 100.0 * static_cast<double>(hits) / static_cast<double>(a.neighbors.size());
}

}  // namespace

std::vector<NeighborList> batch_top_k(const EmbeddingSpace& space,
                                      std::span<const int> queries, int k,
                                      const Vocabulary& restrict_vocab) {
    const auto rows = map_restrict(space, restrict_vocab);
    std::vector<NeighborList> out;
    out.reserve(queries.size());
    for (int q : queries) out.push_back(one_query(space, rows, q, k));
    return out;
}

double word_stability(std::span<const EmbeddingSpace> spaces, std::string_view word,
                      int k, const Vocabulary& restrict_vocab) {
    if (spaces.size() < 2) throw std::runtime_error("reference word_stability: need >= 2 spaces");
    const int query = restrict_vocab.id_of(word);
    if (query < 0) throw std::runtime_error("reference: word not in restrict vocabulary");
    std::vector<NeighborList> lists;
    for (const auto& space : spaces) {
        lists.push_back(one_query(space, map_restrict(space, restrict_vocab), query, k));
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        for (std::size_t j = i + 1; j < lists.size(); ++j) {
            sum += overlap_of_lists(lists[i], lists[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::map<std::string, double> per_word_stability(std::span<const EmbeddingSpace> spaces,
                                                 const Vocabulary& restrict_vocab, int k) {
    if (spaces.size() < 2) throw std::runtime_error("reference: need >= 2 spaces");
    std::vector<std::vector<int>> rows;
    for (const auto& space : spaces) rows.push_back(map_restrict(space, restrict_vocab));

    std::map<std::string, double> out;
    for (std::size_t w = 0; w < restrict_vocab.size(); ++w) {
        std::vector<NeighborList> lists;
        for (std::size_t s = 0; s < spaces.size(); ++s) {
            lists.push_back(one_query(spaces[s], rows[s], static_cast<int>(w), k));
        }
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < lists.size(); ++i) {
            for (std::size_t j = i + 1; j < lists.size(); ++j) {
                sum += overlap_of_lists(lists[i], lists[j]);
                ++pairs;
            }
        }
        out.emplace(restrict_vocab.word(w), sum / static_cast<double>(pairs));
    }
    return out;
}

std::vector<double> ridge_normal_solve(const Matrix& x, std::span<const double> y,
                                       double lambda) {
    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    if (n != y.size() || n == 0 || p == 0) {
        throw std::runtime_error("reference ridge: shape mismatch");
    }

    std::vector<double> x_mean(p, 0.0);
    double y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y_mean += y[i];
        for (std::size_t j = 0; j < p; ++j) x_mean[j] += x.at(i, j);
    }
    y_mean /= static_cast<double>(n);
    for (double& m : x_mean) m /= static_cast<double>(n);

    // a = Xc' Xc + lambda I augmented with b = Xc' yc
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double xj = x.at(i, j) - x_mean[j];
            for (std::size_t l = 0; l < p; ++l) {
                a[j][l] += xj * (x.at(i, l) - x_mean[l]);
            }
            a[j][p] += xj * (y[i] - y_mean);
        }
    }
    for (std::size_t j = 0; j < p; ++j) a[j][j] += lambda;

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            throw std::runtime_error("reference ridge: singular system");
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = col + 1; r < p; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t l = col; l <= p; ++l) a[r][l] -= f * a[col][l];
        }
    }
    std::vector<double> w(p, 0.0);
    for (std::size_t col = p; col-- > 0;) {
        double rhs = a[col][p];
        for (std::size_t l = col + 1; l < p; ++l) rhs -= a[col][l] * w[l];
        w[col] = rhs / a[col][col];
    }

    double intercept = y_mean;
    for (std::size_t j = 0; j < p; ++j) intercept -= x_mean[j] * w[j];
    w.push_back(intercept);
    return w;
}

}  // namespace stab::ref
