#include "stab/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stab {
namespace {

// Tokens are maximal runs of non-ASCII-space bytes; runs of ' ' collapse.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

EmbeddingSpace load_text(const std::filesystem::path& path, bool allow_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path.string());

    std::vector<std::string> tokens;
    std::vector<double> values;
    std::size_t dim = 0;
    bool have_header = false;
    std::uint64_t header_v = 0, header_d = 0;

    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        if (lineno == 1 && allow_header && fields.size() == 2) {
            std::uint64_t v, d;
            if (parse_u64(fields[0], v) && parse_u64(fields[1], d)) {
                have_header = true;
                header_v = v;
                header_d = d;
                dim = static_cast<std::size_t>(d);
                continue;
            }
        }

        if (fields.size() < 2) fail("expected 'token v1 .. vD'");
        const std::size_t d = fields.size() - 1;
        if (dim == 0) {
            dim = d;
        } else if (d != dim) {
            fail("dimension mismatch: expected " + std::to_string(dim) + " values, got " +
                 std::to_string(d));
        }
        tokens.emplace_back(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            double x;
            if (!parse_double(fields[i], x)) fail("cannot parse value '" + std::string(fields[i]) + "'");
            if (!std::isfinite(x)) fail("non-finite value for token '" + tokens.back() + "'");
            values.push_back(x);
        }
    }

    if (tokens.empty()) throw std::runtime_error(path.string() + ": no vectors");
    if (have_header) {
        if (header_v != tokens.size()) {
            throw std::runtime_error(path.string() + ": header declares " +
                                     std::to_string(header_v) + " vectors, file has " +
                                     std::to_string(tokens.size()));
        }
        if (header_d != dim) {
            throw std::runtime_error(path.string() + ": header dimension mismatch");
        }
    }

    EmbeddingSpace space;
    space.vocab = Vocabulary::from_words(std::move(tokens));  // rejects duplicates
    space.matrix.rows = space.vocab.size();
    space.matrix.cols = dim;
    space.matrix.data = std::move(values);
    space.label = path.filename().string();
    return space;
}

}  // namespace

EmbeddingSpace load_word2vec_text(const std::filesystem::path& path) {
    return load_text(path, /*allow_header=*/true);
}

EmbeddingSpace load_glove_text(const std::filesystem::path& path) {
    return load_text(path, /*allow_header=*/false);
}

void save_word2vec_text(const EmbeddingSpace& space, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write embedding file: " + path.string());
    out << space.vocab.size() << ' ' << space.dim() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < space.vocab.size(); ++i) {
        out << space.vocab.word(i);
        for (double x : space.matrix.row(i)) {
            std::snprintf(buf, sizeof buf, " %.9g", x);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

EmbeddingSpace normalize_rows(const EmbeddingSpace& space) {
    EmbeddingSpace out = space;
    std::vector<std::string> zero_rows;
    for (std::size_t i = 0; i < out.matrix.rows; ++i) {
        auto row = out.matrix.row(i);
        double sq = 0.0;
        for (double x : row) sq += x * x;
        if (sq == 0.0) {
            zero_rows.push_back(out.vocab.word(i));
            continue;
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (double& x : row) x *= inv;
    }
    if (!zero_rows.empty()) {
        std::string msg = "cannot normalize all-zero rows:";
        for (const auto& t : zero_rows) msg += " " + t;
        throw std::runtime_error(msg);
    }
    if (out.label.find("(normalized)") == std::string::npos) {
        out.label += " (normalized)";
    }
    return out;
}

Vocabulary common_vocabulary(std::span<const EmbeddingSpace> spaces) {
    if (spaces.size() < 2) {
        throw std::invalid_argument("common_vocabulary needs at least two spaces");
    }
    std::set<std::string> common(spaces[0].vocab.words().begin(),
                                 spaces[0].vocab.words().end());
    for (std::size_t s = 1; s < spaces.size() && !common.empty(); ++s) {
        for (auto it = common.begin(); it != common.end();) {
            if (!spaces[s].vocab.contains(*it)) {
                it = common.erase(it);
            } else {
                ++it;
            }
        }
    }
    if (common.empty()) throw std::runtime_error("no common vocabulary across spaces");
    return Vocabulary::from_words({common.begin(), common.end()});
}

}  // namespace stab
