#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stab/embedding.hpp"
#include "stab/knn.hpp"

namespace stab {

struct StabilityConfig {
    int k = 10;
    double bucket_width = 5.0;
    std::vector<std::string> space_labels;
    std::string vocab_filter;
};

// Per-word stability percentages for one language/configuration, plus the
// bucketed histogram used for cross-language comparison.
struct StabilityReport {
    std::map<std::string, double> per_word;  // percent in [0, 100]
    double average = 0.0;
    std::vector<double> buckets;  // percent of words per bin, sums to 100
    StabilityConfig config;
};

// 100 * |ids(a) ∩ ids(b)| / k. Both lists must answer the same query with the
// same length.
double pair_overlap(const NeighborList& a, const NeighborList& b);

// Stability of one word within a single set of spaces: average overlap over
// all unordered distinct pairs {x, y}. Needs at least two spaces.
double word_stability(std::span<const EmbeddingSpace> spaces, std::string_view word,
                      int k, const Vocabulary& restrict_vocab);

// Stability across two distinct sets: average over all |X|*|Y| pairs.
double word_stability(std::span<const EmbeddingSpace> x, std::span<const EmbeddingSpace> y,
                      std::string_view word, int k, const Vocabulary& restrict_vocab);

// Per-word stability for every word of the restrict vocabulary, average, and
// bucket histogram.
StabilityReport language_stability(std::span<const EmbeddingSpace> spaces,
                                   const Vocabulary& restrict_vocab, int k = 10,
                                   double bucket_width = 5.0);
StabilityReport language_stability(std::span<const EmbeddingSpace> x,
                                   std::span<const EmbeddingSpace> y,
                                   const Vocabulary& restrict_vocab, int k = 10,
                                   double bucket_width = 5.0);

// Histogram of percent values: bin 0 covers [0, w], bin i covers (iw, (i+1)w].
// Returns percent of inputs per bin.
std::vector<double> bucketize(std::span<const double> values, double width = 5.0);

// Label with the highest average stability; ties go to the lexicographically
// smallest label.
std::string select_best_variant(const std::map<std::string, StabilityReport>& reports);

void write_report_json(const StabilityReport& report, const std::filesystem::path& path);
void write_report_tsv(const StabilityReport& report, const std::filesystem::path& path);
void write_buckets_csv(const StabilityReport& report, const std::filesystem::path& path);

}  // namespace stab
