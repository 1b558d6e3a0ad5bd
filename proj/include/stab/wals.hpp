#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stab {

// Categorical typology features per language, loaded from the canonical
// 3-column CSV "language,feature,value". Missing (language, feature)
// combinations are simply absent.
struct WalsDatabase {
    std::vector<std::string> languages;  // distinct, lexicographic
    std::map<std::string, std::set<std::string>> features;  // feature -> observed values
    std::map<std::pair<std::string, std::string>, std::string> values;

    std::optional<std::string> value_of(std::string_view language,
                                        std::string_view feature) const;
};

WalsDatabase load_wals_csv(const std::filesystem::path& path);

// Features defined for at least ceil(min_coverage * |languages|) of the given
// languages (at least one language when min_coverage is 0).
std::vector<std::string> coverage_filter(const WalsDatabase& db,
                                         std::span<const std::string> languages,
                                         double min_coverage);

// Languages x one-hot (feature, value) columns, one Unknown column per
// feature. Exactly one column per feature group is 1 for each language.
struct BinaryFeatureMatrix {
    struct Column {
        std::string feature;
        std::string value;
        std::string name() const { return feature + ": " + value; }
    };
    std::vector<std::string> languages;  // rows
    std::vector<Column> columns;
    std::vector<std::uint8_t> cells;  // row-major

    std::uint8_t at(std::size_t row, std::size_t col) const {
        return cells[row * columns.size() + col];
    }
};

// Column order: feature id, then value lexicographic (Unknown sorts as a
// plain value). Values observed among the chosen languages only.
BinaryFeatureMatrix binarize(const WalsDatabase& db,
                             std::span<const std::string> languages,
                             std::span<const std::string> features);

// The three morphology features (WALS 20A fusion, 21A exponence, 59A
// possessive classification), matched by id or by name.
std::vector<std::string> morphology_subset(const WalsDatabase& db);

void write_matrix_tsv(std::ostream& out, const BinaryFeatureMatrix& matrix);

}  // namespace stab
