#include "stab/knn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace stab {
namespace {

inline bool better(const std::pair<int, double>& a, const std::pair<int, double>& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
}

// Rows of the space restricted to a vocabulary, unit-normalized once so
// every similarity is a plain dot product.
struct RestrictedView {
    Matrix rows;  // |restrict| x D, unit rows

    RestrictedView(const EmbeddingSpace& space, const Vocabulary& restrict_vocab)
        : rows(restrict_vocab.size(), space.dim()) {
        for (std::size_t r = 0; r < restrict_vocab.size(); ++r) {
            const std::string& token = restrict_vocab.word(r);
            const int sid = space.vocab.id_of(token);
            if (sid < 0) {
                throw std::runtime_error("restrict vocabulary not contained in space '" +
                                         space.label + "': missing token '" + token + "'");
            }
            auto src = space.matrix.row(static_cast<std::size_t>(sid));
            double sq = 0.0;
            for (double x : src) sq += x * x;
            if (sq == 0.0) {
                throw std::runtime_error("zero vector for token '" + token + "' in space '" +
                                         space.label + "'");
            }
            const double inv = 1.0 / std::sqrt(sq);
            auto dst = rows.row(r);
            for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j] * inv;
        }
    }
};

NeighborList top_k_from_view(const RestrictedView& view, int query, int k) {
    const std::size_t n = view.rows.rows;
    const std::size_t d = view.rows.cols;
    const double* q = view.rows.data.data() + static_cast<std::size_t>(query) * d;

    std::vector<std::pair<int, double>> cand;
    cand.reserve(n - 1);
    for (std::size_t r = 0; r < n; ++r) {
        if (static_cast<int>(r) == query) continue;
        const double* v = view.rows.data.data() + r * d;
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += q[j] * v[j];
        cand.emplace_back(static_cast<int>(r), std::clamp(dot, -1.0, 1.0));
    }

    const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), cand.size());
    std::nth_element(cand.begin(), cand.begin() + k_eff, cand.end(), better);
    std::sort(cand.begin(), cand.begin() + k_eff, better);
    cand.resize(k_eff);

    return NeighborList{query, std::move(cand)};
}

void validate_args(const Vocabulary& restrict_vocab, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (restrict_vocab.size() < 2) {
        throw std::invalid_argument("restrict vocabulary must contain at least 2 words");
    }
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw std::invalid_argument("cosine: zero vector");
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

NeighborList top_k(const EmbeddingSpace& space, std::string_view query, int k,
                   const Vocabulary& restrict_vocab) {
    validate_args(restrict_vocab, k);
    const int qid = restrict_vocab.id_of(query);
    if (qid < 0) {
        throw std::invalid_argument("query '" + std::string(query) +
                                    "' not in restrict vocabulary");
    }
    RestrictedView view(space, restrict_vocab);
    return top_k_from_view(view, qid, k);
}

std::vector<NeighborList> batch_top_k(const EmbeddingSpace& space,
                                      std::span<const int> queries, int k,
                                      const Vocabulary& restrict_vocab) {
    validate_args(restrict_vocab, k);
    for (int q : queries) {
        if (q < 0 || static_cast<std::size_t>(q) >= restrict_vocab.size()) {
            throw std::invalid_argument("query id " + std::to_string(q) +
                                        " outside restrict vocabulary");
        }
    }
    RestrictedView view(space, restrict_vocab);

    std::vector<NeighborList> out(queries.size());
    std::string first_error;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(queries.size()); ++i) {
        try {
            out[i] = top_k_from_view(view, queries[i], k);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) {
                first_error = "query '" + restrict_vocab.word(queries[i]) + "': " + e.what();
            }
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);
    return out;
}

void write_neighbors_tsv(std::ostream& out, std::span<const NeighborList> lists,
                         const Vocabulary& restrict_vocab) {
    out << "query\trank\tneighbor\tsimilarity\n";
    char buf[32];
    for (const auto& list : lists) {
        int rank = 1;
        for (const auto& [id, sim] : list.neighbors) {
            std::snprintf(buf, sizeof buf, "%.6f", sim);
            out << restrict_vocab.word(list.query) << '\t' << rank++ << '\t'
                << restrict_vocab.word(id) << '\t' << buf << '\n';
        }
    }
}

}  // namespace stab
