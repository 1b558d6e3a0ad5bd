#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stab/corpus.hpp"
#include "stab/embedding.hpp"

namespace stab {

// Skip-gram negative-sampling trainer configuration. dim/window/min_count
// follow the usual word2vec text-embedding setup; the rest are the reference
// implementation defaults.
struct TrainConfig {
    int dim = 300;
    int window = 5;
    std::uint64_t min_count = 5;
    int negatives = 5;
    int epochs = 5;
    double initial_lr = 0.025;  // linear decay towards 0, floored at 1e-4 * initial
    double subsample_threshold = 1e-3;
    std::uint64_t seed = 1;
    bool deterministic = true;  // single-threaded, one RNG stream, bit-identical
    int threads = 0;            // parallel (hogwild) mode only; 0 = OpenMP default
    bool average_in_out = false;  // export (input + output) / 2 instead of input vectors

    void validate() const;
};

struct TrainStats {
    std::vector<double> epoch_loss;  // mean example loss per epoch
    std::uint64_t examples = 0;      // (center, context) pairs trained
};

// Tokens with count >= min_count; ids by descending count, ties by token
// bytes. Counts populated.
Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_count);

// Trains SGNS embeddings and returns the input-vector matrix. Deterministic
// mode is bit-identical for identical (corpus, config); parallel mode uses
// lock-free shared updates and is explicitly nondeterministic.
EmbeddingSpace train(const Corpus& corpus, const TrainConfig& config,
                     TrainStats* stats = nullptr);

// Loss of one (center, positive, negatives) example at float64:
//   -log sigmoid(v . u_pos) - sum_i log sigmoid(-v . u_neg[i])
// Analytic gradients are accumulated into the g_* buffers when provided
// (each must match the corresponding vector's length).
double sgns_example_loss(std::span<const double> v_center,
                         std::span<const double> u_positive,
                         std::span<const std::vector<double>> u_negatives,
                         std::span<double> g_center = {},
                         std::span<double> g_positive = {},
                         std::span<std::vector<double>> g_negatives = {});

}  // namespace stab
