#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stab/corpus.hpp"
#include "stab/vocab.hpp"

namespace stab {

struct SamplePlan {
    std::size_t k = 5;                     // number of samples
    std::size_t n = 0;                     // sentences per sample
    std::optional<double> overlap_target;  // shared-core fraction in [0, 1]
    std::uint64_t seed = 0;

    std::size_t core_size() const;
    // Throws with required vs available sentence counts when infeasible.
    void validate(std::size_t corpus_size) const;
};

// k pairwise-disjoint samples of exactly n sentences each, uniform without
// replacement. Deterministic given the seed.
std::vector<Corpus> downsample_disjoint(const Corpus& corpus, std::size_t k,
                                        std::size_t n, std::uint64_t seed);

// Shared-core construction: a core of round(overlap_target * n) sentences is
// drawn once, each sample adds its own disjoint block, so every pair of
// samples overlaps in exactly the core.
std::vector<Corpus> downsample_with_overlap(const Corpus& corpus, std::size_t k,
                                            std::size_t n, double overlap_target,
                                            std::uint64_t seed);

// Pairwise overlap fractions by sentence identity (source corpus position).
// Diagonal is 1. Requires equal sample sizes.
std::vector<std::vector<double>> measured_overlap(std::span<const Corpus> samples);

enum class MinCountMode {
    kPerSampleAtLeast,    // count >= threshold within every sample
    kTotalGreaterThan,    // summed count across samples > threshold
};

// Tokens passing the frequency threshold, intersected across samples, ordered
// lexicographically. Counts in the result are totals across samples.
Vocabulary shared_vocabulary(std::span<const Corpus> samples, std::uint64_t min_count = 5,
                             MinCountMode mode = MinCountMode::kPerSampleAtLeast);

}  // namespace stab
