#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stab/embedding.hpp"

namespace stab {

// Top-k cosine neighbors of one query word. Ids index the restrict vocabulary
// that produced the list, so lists computed in different spaces over the same
// restrict vocabulary are directly comparable.
struct NeighborList {
    int query = -1;
    std::vector<std::pair<int, double>> neighbors;  // descending similarity, ties by ascending id
};

// dot(u,v) / (|u||v|), clamped to [-1, 1]. Throws on zero vectors or
// mismatched dimensions.
double cosine(std::span<const double> u, std::span<const double> v);

// Exact top-k by cosine over restrict \ {query}. List length is
// min(k, |restrict| - 1).
NeighborList top_k(const EmbeddingSpace& space, std::string_view query, int k,
                   const Vocabulary& restrict_vocab);

// Element-wise equal to top_k; results in query order. Queries are ids into
// the restrict vocabulary. Runs queries in parallel.
std::vector<NeighborList> batch_top_k(const EmbeddingSpace& space,
                                      std::span<const int> queries, int k,
                                      const Vocabulary& restrict_vocab);

// TSV dump: query \t rank \t neighbor \t similarity (with header).
void write_neighbors_tsv(std::ostream& out, std::span<const NeighborList> lists,
                         const Vocabulary& restrict_vocab);

}  // namespace stab
