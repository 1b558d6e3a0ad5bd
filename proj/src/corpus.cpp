#include "stab/corpus.hpp"

#include <fstream>
#include <stdexcept>

namespace stab {

Corpus load_corpus(const std::filesystem::path& path, std::string label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path.string());

    Corpus corpus;
    corpus.label = label.empty() ? path.filename().string() : std::move(label);

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ') ++j;
            if (j > i) tokens.emplace_back(line.substr(i, j - i));
            i = j;
        }
        corpus.origin.push_back(corpus.sentences.size());
        corpus.sentences.push_back(std::move(tokens));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path.string());
    for (const auto& sentence : corpus.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (i > 0) out << ' ';
            out << sentence[i];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace stab
