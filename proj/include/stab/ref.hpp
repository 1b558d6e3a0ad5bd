#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stab/embedding.hpp"
#include "stab/knn.hpp"
#include "stab/matrix.hpp"

// Serial brute-force reference implementations. Algorithmically independent
// of the OpenMP kernels in stab_core: per-pair cosine from raw rows, full
// sorts, nested loops. Linked by tests and benchmarks only.
namespace stab::ref {

// All-pairs exact search: cosine of every candidate computed directly from
// the unnormalized rows, full sort, first k taken.
std::vector<NeighborList> batch_top_k(const EmbeddingSpace& space,
                                      std::span<const int> queries, int k,
                                      const Vocabulary& restrict_vocab);

// Double loop over unordered space pairs with set intersection per pair.
double word_stability(std::span<const EmbeddingSpace> spaces, std::string_view word,
                      int k, const Vocabulary& restrict_vocab);

// Per-word stability for the whole restrict vocabulary, serial.
std::map<std::string, double> per_word_stability(std::span<const EmbeddingSpace> spaces,
                                                 const Vocabulary& restrict_vocab, int k);

// Ridge weights via Gaussian elimination with partial pivoting on the
// centered normal equations. Returns weights then intercept (size cols + 1).
std::vector<double> ridge_normal_solve(const Matrix& x, std::span<const double> y,
                                       double lambda);

}  // namespace stab::ref
