#include "stab/wals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace stab {
namespace {

// Minimal RFC 4180 row parser: quoted fields with "" escapes.
std::vector<std::string> parse_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::optional<std::string> WalsDatabase::value_of(std::string_view language,
                                                  std::string_view feature) const {
    auto it = values.find({std::string(language), std::string(feature)});
    if (it == values.end()) return std::nullopt;
    return it->second;
}

WalsDatabase load_wals_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open WALS CSV: " + path.string());

    WalsDatabase db;
    std::set<std::string> languages;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = parse_csv_row(line);
        if (lineno == 1) {
            if (fields.size() != 3 || lower(fields[0]) != "language" ||
                lower(fields[1]) != "feature" || lower(fields[2]) != "value") {
                fail("expected header 'language,feature,value'");
            }
            continue;
        }
        if (fields.size() != 3) {
            fail("expected 3 fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            fail("empty field");
        }
        auto key = std::make_pair(fields[0], fields[1]);
        auto it = db.values.find(key);
        if (it != db.values.end()) {
            if (it->second != fields[2]) {
                fail("conflicting value for (" + fields[0] + ", " + fields[1] + "): '" +
                     it->second + "' vs '" + fields[2] + "'");
            }
            continue;  // consistent duplicate
        }
        db.values.emplace(std::move(key), fields[2]);
        db.features[fields[1]].insert(fields[2]);
        languages.insert(fields[0]);
    }
    db.languages.assign(languages.begin(), languages.end());
    return db;
}

std::vector<std::string> coverage_filter(const WalsDatabase& db,
                                         std::span<const std::string> languages,
                                         double min_coverage) {
    if (min_coverage < 0.0 || min_coverage > 1.0) {
        throw std::invalid_argument("min_coverage must be in [0, 1]");
    }
    const auto required = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(min_coverage * static_cast<double>(languages.size()) - 1e-9)));

    std::vector<std::string> kept;
    for (const auto& [feature, value_set] : db.features) {
        std::size_t covered = 0;
        for (const auto& language : languages) {
            if (db.value_of(language, feature)) ++covered;
        }
        if (covered >= required) kept.push_back(feature);
    }
    return kept;
}

BinaryFeatureMatrix binarize(const WalsDatabase& db,
                             std::span<const std::string> languages,
                             std::span<const std::string> features) {
    if (features.empty()) throw std::invalid_argument("binarize: no features");

    std::vector<std::string> ordered(features.begin(), features.end());
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    BinaryFeatureMatrix matrix;
    matrix.languages.assign(languages.begin(), languages.end());
    for (const auto& feature : ordered) {
        std::set<std::string> observed;
        for (const auto& language : languages) {
            if (auto v = db.value_of(language, feature)) observed.insert(*v);
        }
        observed.insert("Unknown");  // always emitted, keeps column sets stable
        for (const auto& value : observed) {
            matrix.columns.push_back({feature, value});
        }
    }

    matrix.cells.assign(matrix.languages.size() * matrix.columns.size(), 0);
    for (std::size_t r = 0; r < matrix.languages.size(); ++r) {
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            const auto& col = matrix.columns[c];
            const auto v = db.value_of(matrix.languages[r], col.feature);
            const bool hit = v ? *v == col.value : col.value == "Unknown";
            if (hit) matrix.cells[r * matrix.columns.size() + c] = 1;
        }
    }
    return matrix;
}

std::vector<std::string> morphology_subset(const WalsDatabase& db) {
    struct Target {
        const char* id;
        const char* name;
        const char* display;
    };
    static constexpr Target targets[] = {
        {"20a", "fusion", "Fusion (WALS 20A)"},
        {"21a", "exponence", "Exponence (WALS 21A)"},
        {"59a", "possessive classification", "Possessive Classification (WALS 59A)"},
    };

    std::vector<std::string> out;
    for (const auto& target : targets) {
        std::vector<std::string> matches;
        for (const auto& [feature, value_set] : db.features) {
            const std::string lf = lower(feature);
            const std::string first_token = lf.substr(0, lf.find(' '));
            if (first_token == target.id || lf.find(target.name) != std::string::npos) {
                matches.push_back(feature);
            }
        }
        if (matches.empty()) {
            throw std::runtime_error(std::string("morphology feature not found: ") +
                                     target.display);
        }
        if (matches.size() > 1) {
            throw std::runtime_error(std::string("ambiguous morphology feature ") +
                                     target.display + ": matched " + matches[0] + " and " +
                                     matches[1]);
        }
        out.push_back(matches[0]);
    }
    return out;
}

void write_matrix_tsv(std::ostream& out, const BinaryFeatureMatrix& matrix) {
    out << "language";
    for (const auto& col : matrix.columns) out << '\t' << col.name();
    out << '\n';
    for (std::size_t r = 0; r < matrix.languages.size(); ++r) {
        out << matrix.languages[r];
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            out << '\t' << static_cast<int>(matrix.at(r, c));
        }
        out << '\n';
    }
}

}  // namespace stab
