#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stab {

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

// Dense token <-> id mapping. Ids are 0..V-1 in the order of words().
// Counts are optional corpus frequencies aligned with the word list.
class Vocabulary {
  public:
    Vocabulary() = default;

    static Vocabulary from_words(std::vector<std::string> words,
                                 std::vector<std::uint64_t> counts = {}) {
        Vocabulary v;
        v.words_ = std::move(words);
        v.counts_ = std::move(counts);
        if (!v.counts_.empty() && v.counts_.size() != v.words_.size()) {
            throw std::invalid_argument("vocabulary counts do not match word list size");
        }
        v.index_.reserve(v.words_.size());
        for (std::size_t i = 0; i < v.words_.size(); ++i) {
            auto [it, inserted] = v.index_.emplace(v.words_[i], static_cast<int>(i));
            if (!inserted) {
                throw std::runtime_error("duplicate token in vocabulary: " + v.words_[i]);
            }
        }
        return v;
    }

    int id_of(std::string_view token) const {
        auto it = index_.find(token);
        return it == index_.end() ? -1 : it->second;
    }
    bool contains(std::string_view token) const { return id_of(token) >= 0; }

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::vector<std::string>& words() const { return words_; }
    const std::string& word(std::size_t id) const { return words_[id]; }

    bool has_counts() const { return !counts_.empty(); }
    std::uint64_t count(std::size_t id) const { return counts_[id]; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

  private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, int, StringHash, std::equal_to<>> index_;
};

}  // namespace stab
