#include "stab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace stab {
namespace {

std::vector<int> sorted_ids(const NeighborList& list) {
    std::vector<int> ids;
    ids.reserve(list.neighbors.size());
    for (const auto& [id, sim] : list.neighbors) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

double overlap_percent(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t hits = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++hits;
            ++i;
            ++j;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(a.size());
}

// Neighbor id sets for every restrict word in every space, computed once.
std::vector<std::vector<std::vector<int>>> all_neighbor_ids(
    std::span<const EmbeddingSpace> spaces, const Vocabulary& restrict_vocab, int k) {
    std::vector<int> queries(restrict_vocab.size());
    std::iota(queries.begin(), queries.end(), 0);
    std::vector<std::vector<std::vector<int>>> ids(spaces.size());
    for (std::size_t s = 0; s < spaces.size(); ++s) {
        auto lists = batch_top_k(spaces[s], queries, k, restrict_vocab);
        ids[s].resize(lists.size());
        for (std::size_t w = 0; w < lists.size(); ++w) ids[s][w] = sorted_ids(lists[w]);
    }
    return ids;
}

std::vector<std::string> labels_of(std::span<const EmbeddingSpace> spaces) {
    std::vector<std::string> labels;
    labels.reserve(spaces.size());
    for (const auto& s : spaces) labels.push_back(s.label);
    return labels;
}

StabilityReport assemble_report(const Vocabulary& restrict_vocab,
                                const std::vector<double>& per_word,
                                StabilityConfig config) {
    StabilityReport report;
    report.config = std::move(config);
    double sum = 0.0;
    for (std::size_t w = 0; w < restrict_vocab.size(); ++w) {
        report.per_word.emplace(restrict_vocab.word(w), per_word[w]);
        sum += per_word[w];
    }
    report.average = sum / static_cast<double>(per_word.size());
    report.buckets = bucketize(per_word, report.config.bucket_width);
    return report;
}

}  // namespace

double pair_overlap(const NeighborList& a, const NeighborList& b) {
    if (a.query != b.query) {
        throw std::invalid_argument("pair_overlap: neighbor lists answer different queries");
    }
    if (a.neighbors.size() != b.neighbors.size()) {
        throw std::invalid_argument("pair_overlap: neighbor lists have different k");
    }
    if (a.neighbors.empty()) throw std::invalid_argument("pair_overlap: empty neighbor lists");
    return overlap_percent(sorted_ids(a), sorted_ids(b));
}

double word_stability(std::span<const EmbeddingSpace> spaces, std::string_view word,
                      int k, const Vocabulary& restrict_vocab) {
    if (spaces.size() < 2) {
        throw std::invalid_argument("word_stability over one set needs at least two spaces");
    }
    std::vector<NeighborList> lists;
    lists.reserve(spaces.size());
    for (const auto& space : spaces) lists.push_back(top_k(space, word, k, restrict_vocab));

    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        for (std::size_t j = i + 1; j < lists.size(); ++j) {
            sum += pair_overlap(lists[i], lists[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

double word_stability(std::span<const EmbeddingSpace> x, std::span<const EmbeddingSpace> y,
                      std::string_view word, int k, const Vocabulary& restrict_vocab) {
    if (x.empty() || y.empty()) {
        throw std::invalid_argument("word_stability: empty space set");
    }
    std::vector<NeighborList> lx, ly;
    for (const auto& space : x) lx.push_back(top_k(space, word, k, restrict_vocab));
    for (const auto& space : y) ly.push_back(top_k(space, word, k, restrict_vocab));

    double sum = 0.0;
    for (const auto& a : lx) {
        for (const auto& b : ly) sum += pair_overlap(a, b);
    }
    return sum / static_cast<double>(lx.size() * ly.size());
}

StabilityReport language_stability(std::span<const EmbeddingSpace> spaces,
                                   const Vocabulary& restrict_vocab, int k,
                                   double bucket_width) {
    if (spaces.size() < 2) {
        throw std::invalid_argument("language_stability over one set needs at least two spaces");
    }
    if (restrict_vocab.empty()) {
        throw std::invalid_argument("language_stability: empty restrict vocabulary");
    }
    const auto ids = all_neighbor_ids(spaces, restrict_vocab, k);

    const std::size_t n_words = restrict_vocab.size();
    std::vector<double> per_word(n_words, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(n_words); ++w) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            for (std::size_t j = i + 1; j < ids.size(); ++j) {
                sum += overlap_percent(ids[i][w], ids[j][w]);
                ++pairs;
            }
        }
        per_word[w] = sum / static_cast<double>(pairs);
    }

    StabilityConfig config{k, bucket_width, labels_of(spaces),
                           std::to_string(n_words) + " words (single space set)"};
    return assemble_report(restrict_vocab, per_word, std::move(config));
}

StabilityReport language_stability(std::span<const EmbeddingSpace> x,
                                   std::span<const EmbeddingSpace> y,
                                   const Vocabulary& restrict_vocab, int k,
                                   double bucket_width) {
    if (x.empty() || y.empty()) {
        throw std::invalid_argument("language_stability: empty space set");
    }
    if (restrict_vocab.empty()) {
        throw std::invalid_argument("language_stability: empty restrict vocabulary");
    }
    const auto idx = all_neighbor_ids(x, restrict_vocab, k);
    const auto idy = all_neighbor_ids(y, restrict_vocab, k);

    const std::size_t n_words = restrict_vocab.size();
    std::vector<double> per_word(n_words, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < static_cast<std::ptrdiff_t>(n_words); ++w) {
        double sum = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idy.size(); ++j) {
                sum += overlap_percent(idx[i][w], idy[j][w]);
            }
        }
        per_word[w] = sum / static_cast<double>(idx.size() * idy.size());
    }

    auto labels = labels_of(x);
    for (const auto& l : labels_of(y)) labels.push_back(l);
    StabilityConfig config{k, bucket_width, std::move(labels),
                           std::to_string(n_words) + " words (two space sets)"};
    return assemble_report(restrict_vocab, per_word, std::move(config));
}

std::vector<double> bucketize(std::span<const double> values, double width) {
    if (width <= 0.0 || width > 100.0) throw std::invalid_argument("bucket width out of range");
    const auto n_bins = static_cast<std::size_t>(std::ceil(100.0 / width - 1e-9));
    std::vector<double> bins(n_bins, 0.0);
    for (double v : values) {
        if (!(v >= 0.0 && v <= 100.0)) {
            throw std::invalid_argument("stability value out of [0,100]: " + std::to_string(v));
        }
        // bin 0 is [0, w]; bin i is (iw, (i+1)w]
        std::size_t idx = 0;
        if (v > width) {
            idx = std::min(n_bins - 1, static_cast<std::size_t>(std::ceil(v / width)) - 1);
        }
        bins[idx] += 1.0;
    }
    if (!values.empty()) {
        const double scale = 100.0 / static_cast<double>(values.size());
        for (double& b : bins) b *= scale;
    }
    return bins;
}

std::string select_best_variant(const std::map<std::string, StabilityReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("select_best_variant: no reports");
    auto best = reports.begin();
    for (auto it = std::next(reports.begin()); it != reports.end(); ++it) {
        if (it->second.average > best->second.average) best = it;
    }
    return best->first;
}

void write_report_json(const StabilityReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["average"] = report.average;
    j["buckets"] = report.buckets;
    j["config"] = {{"k", report.config.k},
                   {"bucket_width", report.config.bucket_width},
                   {"space_labels", report.config.space_labels},
                   {"vocab_filter", report.config.vocab_filter}};
    j["per_word"] = report.per_word;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << j.dump(2) << '\n';
}

void write_report_tsv(const StabilityReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << "word\tstability\n";
    char buf[32];
    for (const auto& [word, value] : report.per_word) {
        std::snprintf(buf, sizeof buf, "%.6f", value);
        out << word << '\t' << buf << '\n';
    }
}

void write_buckets_csv(const StabilityReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << "bucket_upper,percent\n";
    char buf[32];
    for (std::size_t i = 0; i < report.buckets.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", report.buckets[i]);
        out << report.config.bucket_width * static_cast<double>(i + 1) << ',' << buf << '\n';
    }
}

}  // namespace stab
