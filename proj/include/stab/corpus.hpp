#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace stab {

// Pre-tokenized corpus: one sentence per line, tokens separated by single
// ASCII spaces. `origin` tracks each sentence's position in the source corpus
// so sample overlap can be measured by sentence identity.
struct Corpus {
    std::vector<std::vector<std::string>> sentences;
    std::string label;
    std::vector<std::size_t> origin;

    std::size_t size() const { return sentences.size(); }
};

Corpus load_corpus(const std::filesystem::path& path, std::string label = {});
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace stab
