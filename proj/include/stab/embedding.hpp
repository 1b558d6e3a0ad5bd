#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "stab/matrix.hpp"
#include "stab/vocab.hpp"

namespace stab {

// One trained embedding space: a vocabulary plus one vector per word.
// Immutable by convention after construction; safe to share across threads.
struct EmbeddingSpace {
    Vocabulary vocab;
    Matrix matrix;  // V x D
    std::string label;

    std::size_t dim() const { return matrix.cols; }
    std::span<const double> vector_of(int id) const { return matrix.row(id); }
};

// word2vec text format: optional "V D" header, then "token v1 .. vD" lines.
EmbeddingSpace load_word2vec_text(const std::filesystem::path& path);

// GloVe text format: same line layout, never a header.
EmbeddingSpace load_glove_text(const std::filesystem::path& path);

// Writes word2vec text with header, 9 significant digits per component.
void save_word2vec_text(const EmbeddingSpace& space, const std::filesystem::path& path);

// Returns a copy with every row scaled to unit L2 norm. Throws listing the
// offending tokens if any row is all zeros.
EmbeddingSpace normalize_rows(const EmbeddingSpace& space);

// Intersection of the vocabularies, ordered lexicographically by token bytes.
Vocabulary common_vocabulary(std::span<const EmbeddingSpace> spaces);

}  // namespace stab
