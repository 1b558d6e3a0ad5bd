#include "stab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "stab/rng.hpp"

namespace stab {
namespace {

Corpus materialize(const Corpus& corpus, std::span<const std::size_t> rows,
                   const std::string& label) {
    Corpus sample;
    sample.label = label;
    sample.sentences.reserve(rows.size());
    sample.origin.reserve(rows.size());
    for (std::size_t r : rows) {
        sample.sentences.push_back(corpus.sentences[r]);
        sample.origin.push_back(corpus.origin.empty() ? r : corpus.origin[r]);
    }
    return sample;
}

}  // namespace

std::size_t SamplePlan::core_size() const {
    if (!overlap_target) return 0;
    return static_cast<std::size_t>(std::llround(*overlap_target * static_cast<double>(n)));
}

void SamplePlan::validate(std::size_t corpus_size) const {
    if (k == 0 || n == 0) throw std::invalid_argument("sample plan needs k >= 1 and n >= 1");
    if (overlap_target && (*overlap_target < 0.0 || *overlap_target > 1.0)) {
        throw std::invalid_argument("overlap target must be in [0, 1]");
    }
    const std::size_t core = core_size();
    const std::size_t required = core + k * (n - core);
    if (required > corpus_size) {
        throw std::runtime_error("sample plan infeasible: requires " + std::to_string(required) +
                                 " sentences, corpus has " + std::to_string(corpus_size));
    }
}

std::vector<Corpus> downsample_disjoint(const Corpus& corpus, std::size_t k,
                                        std::size_t n, std::uint64_t seed) {
    SamplePlan plan{k, n, std::nullopt, seed};
    plan.validate(corpus.size());

    std::mt19937_64 gen(rng::derive_seed(seed, 0));
    const auto chosen = rng::sample_indices(corpus.size(), k * n, gen);

    std::vector<Corpus> samples;
    samples.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::span<const std::size_t> rows(chosen.data() + i * n, n);
        samples.push_back(
            materialize(corpus, rows, corpus.label + "#sample" + std::to_string(i)));
    }
    return samples;
}

std::vector<Corpus> downsample_with_overlap(const Corpus& corpus, std::size_t k,
                                            std::size_t n, double overlap_target,
                                            std::uint64_t seed) {
    SamplePlan plan{k, n, overlap_target, seed};
    plan.validate(corpus.size());
    const std::size_t core = plan.core_size();
    const std::size_t block = n - core;

    std::mt19937_64 gen(rng::derive_seed(seed, 0));
    const auto chosen = rng::sample_indices(corpus.size(), core + k * block, gen);

    std::vector<Corpus> samples;
    samples.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> rows(chosen.begin(), chosen.begin() + core);
        rows.insert(rows.end(), chosen.begin() + core + i * block,
                    chosen.begin() + core + (i + 1) * block);
        rng::shuffle(rows, gen);
        samples.push_back(
            materialize(corpus, rows, corpus.label + "#sample" + std::to_string(i)));
    }
    return samples;
}

std::vector<std::vector<double>> measured_overlap(std::span<const Corpus> samples) {
    if (samples.empty()) throw std::invalid_argument("measured_overlap: no samples");
    const std::size_t n = samples[0].size();
    for (const auto& s : samples) {
        if (s.size() != n) throw std::invalid_argument("measured_overlap: unequal sample sizes");
    }

    std::vector<std::unordered_set<std::size_t>> ids(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ids[i].insert(samples[i].origin.begin(), samples[i].origin.end());
    }

    std::vector<std::vector<double>> overlap(samples.size(),
                                             std::vector<double>(samples.size(), 0.0));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        overlap[i][i] = 1.0;
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            std::size_t hits = 0;
            for (std::size_t pos : ids[i]) hits += ids[j].count(pos);
            const double frac = static_cast<double>(hits) / static_cast<double>(n);
            overlap[i][j] = frac;
            overlap[j][i] = frac;
        }
    }
    return overlap;
}

Vocabulary shared_vocabulary(std::span<const Corpus> samples, std::uint64_t min_count,
                             MinCountMode mode) {
    if (samples.empty()) throw std::invalid_argument("shared_vocabulary: no samples");

    std::vector<std::unordered_map<std::string, std::uint64_t>> counts(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (const auto& sentence : samples[i].sentences) {
            for (const auto& token : sentence) ++counts[i][token];
        }
    }

    // Candidates must at least appear in every sample.
    std::map<std::string, std::uint64_t> totals;
    for (const auto& [token, c] : counts[0]) {
        std::uint64_t total = c;
        bool everywhere = true;
        bool per_sample_ok = c >= min_count;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            auto it = counts[i].find(token);
            if (it == counts[i].end()) {
                everywhere = false;
                break;
            }
            total += it->second;
            per_sample_ok = per_sample_ok && it->second >= min_count;
        }
        if (!everywhere) continue;
        const bool keep = mode == MinCountMode::kPerSampleAtLeast ? per_sample_ok
                                                                  : total > min_count;
        if (keep) totals.emplace(token, total);
    }

    if (totals.empty()) {
        throw std::runtime_error("shared_vocabulary: no token passes the frequency threshold");
    }
    std::vector<std::string> words;
    std::vector<std::uint64_t> word_counts;
    words.reserve(totals.size());
    for (const auto& [token, total] : totals) {
        words.push_back(token);
        word_counts.push_back(total);
    }
    return Vocabulary::from_words(std::move(words), std::move(word_counts));
}

}  // namespace stab
