#pragma once

// Shared test fixtures: synthetic embedding spaces with prescribed neighbor
// lists, random spaces, and a seeded Markov corpus generator.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stab/corpus.hpp"
#include "stab/embedding.hpp"
#include "stab/rng.hpp"

namespace fixtures {

// The three top-10 neighbor lists of "rock" in three models trained on
// Wikipedia subsets (overlaps 60/70/70 -> word stability 66.7).
inline const std::vector<std::vector<std::string>>& rock_neighbor_lists() {
    static const std::vector<std::vector<std::string>> lists = {
        {"indie", "punk", "progressive", "pop", "roll", "band", "blues", "brass",
         "classic", "alternative"},
        {"punk", "indie", "alternative", "progressive", "band", "sedimentary", "bands",
         "psychedelic", "climbing", "pop"},
        {"punk", "pop", "indie", "alternative", "band", "roll", "progressive", "folk",
         "climbing", "metal"},
    };
    return lists;
}

// Builds one space per neighbor list such that top_k("rock", k=10) reproduces
// the list exactly, in order. Every word exists in every space; words not on
// a space's list sit at negative cosine to "rock".
inline std::vector<stab::EmbeddingSpace> rock_fixture_spaces() {
    const auto& lists = rock_neighbor_lists();
    std::set<std::string> vocab_set{"rock"};
    for (const auto& list : lists) vocab_set.insert(list.begin(), list.end());
    const std::vector<std::string> words(vocab_set.begin(), vocab_set.end());

    const std::size_t v = words.size();
    const std::size_t dim = v + 1;  // axis 0 for "rock", one private axis per word
    std::vector<stab::EmbeddingSpace> spaces;
    for (std::size_t s = 0; s < lists.size(); ++s) {
        stab::EmbeddingSpace space;
        space.vocab = stab::Vocabulary::from_words(words);
        space.matrix = stab::Matrix(v, dim);
        space.label = "fixture" + std::to_string(s + 1);
        for (std::size_t w = 0; w < v; ++w) {
            if (words[w] == "rock") {
                space.matrix.at(w, 0) = 1.0;
                continue;
            }
            const auto& list = lists[s];
            const auto pos = std::find(list.begin(), list.end(), words[w]);
            double target_cos;
            if (pos != list.end()) {
                const auto rank = static_cast<double>(pos - list.begin());
                target_cos = 0.95 - 0.04 * rank;  // 0.95 down to 0.59, no ties
            } else {
                target_cos = -0.2 - 0.01 * static_cast<double>(w);
            }
            space.matrix.at(w, 0) = target_cos;
            space.matrix.at(w, w + 1) = std::sqrt(1.0 - target_cos * target_cos);
        }
        spaces.push_back(std::move(space));
    }
    return spaces;
}

// Random space over `n_words` tokens w000.. with unit-free gaussian entries.
inline stab::EmbeddingSpace random_space(std::size_t n_words, std::size_t dim,
                                         std::uint64_t seed,
                                         const std::string& label = "random") {
    std::vector<std::string> words;
    words.reserve(n_words);
    for (std::size_t i = 0; i < n_words; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "w%04zu", i);
        words.emplace_back(buf);
    }
    stab::EmbeddingSpace space;
    space.vocab = stab::Vocabulary::from_words(std::move(words));
    space.matrix = stab::Matrix(n_words, dim);
    space.label = label;
    std::mt19937_64 gen(stab::rng::derive_seed(seed, 99));
    for (double& x : space.matrix.data) x = stab::rng::gaussian(gen);
    return space;
}

// Seeded Markov-chain corpus over a skewed vocabulary: each word prefers a
// handful of successors, so trained embeddings get stable-ish neighborhoods.
inline stab::Corpus markov_corpus(std::size_t n_sentences, std::size_t vocab_size,
                                  std::uint64_t seed, const std::string& label = "markov") {
    std::vector<std::string> words;
    words.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "t%03zu", i);
        words.emplace_back(buf);
    }

    stab::Corpus corpus;
    corpus.label = label;
    std::mt19937_64 gen(stab::rng::derive_seed(seed, 7));
    for (std::size_t s = 0; s < n_sentences; ++s) {
        const std::size_t len = 8 + stab::rng::bounded(gen, 7);  // 8..14 tokens
        std::vector<std::string> sentence;
        // zipf-ish start: low ids are more frequent
        std::size_t state = stab::rng::bounded(gen, vocab_size);
        state = std::min(state, stab::rng::bounded(gen, vocab_size));
        for (std::size_t t = 0; t < len; ++t) {
            sentence.push_back(words[state]);
            if (stab::rng::unit_real(gen) < 0.85) {
                // preferred successor: one of five related words
                state = (state * 7 + 1 + stab::rng::bounded(gen, 5)) % vocab_size;
            } else {
                state = stab::rng::bounded(gen, vocab_size);
            }
        }
        corpus.origin.push_back(corpus.sentences.size());
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

// Unique scratch directory under the system temp dir.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / (tag + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir for " + tag);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

}  // namespace fixtures
