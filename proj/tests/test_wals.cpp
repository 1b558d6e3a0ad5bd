#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stab/wals.hpp"
#include "support/fixtures.hpp"

using namespace stab;

namespace {

std::string write_csv(const fixtures::TempDir& tmp, const std::string& name,
                      const std::string& content) {
    const auto path = tmp.file(name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("load_wals_csv basics") {
    fixtures::TempDir tmp("wals");
    const auto path = write_csv(tmp, "w.csv",
                                "language,feature,value\n"
                                "english,Tone,No tones\n"
                                "english,Gender,Sex-based\n"
                                "mandarin,Tone,Complex tone system\n");
    const auto db = load_wals_csv(path);
    CHECK(db.languages == std::vector<std::string>{"english", "mandarin"});
    CHECK(db.features.at("Tone").size() == 2);
    CHECK(*db.value_of("english", "Tone") == "No tones");
    CHECK_FALSE(db.value_of("mandarin", "Gender").has_value());
}

TEST_CASE("duplicates: consistent rows dedup, conflicts error") {
    fixtures::TempDir tmp("wals-dup");
    const auto ok = write_csv(tmp, "ok.csv",
                              "language,feature,value\n"
                              "english,Tone,No tones\n"
                              "english,Tone,No tones\n");
    CHECK(load_wals_csv(ok).values.size() == 1);

    const auto bad = write_csv(tmp, "bad.csv",
                               "language,feature,value\n"
                               "english,Tone,No tones\n"
                               "english,Tone,Complex tone system\n");
    CHECK_THROWS_WITH_AS(load_wals_csv(bad), doctest::Contains(":3:"), std::runtime_error);
}

TEST_CASE("malformed rows carry line numbers; quoted fields parse") {
    fixtures::TempDir tmp("wals-bad");
    const auto bad = write_csv(tmp, "bad.csv",
                               "language,feature,value\n"
                               "english,Tone\n");
    CHECK_THROWS_WITH_AS(load_wals_csv(bad), doctest::Contains(":2:"), std::runtime_error);

    const auto quoted = write_csv(tmp, "q.csv",
                                  "language,feature,value\n"
                                  "english,\"Suppletion, tense and aspect\",None\n");
    const auto db = load_wals_csv(quoted);
    CHECK(db.features.count("Suppletion, tense and aspect") == 1);
}

TEST_CASE("coverage_filter rounds the threshold up") {
    fixtures::TempDir tmp("wals-cov");
    // feature "Seven" covers 7 of 26 languages; 25% of 26 rounds up to 7
    std::ostringstream csv;
    csv << "language,feature,value\n";
    for (int i = 0; i < 26; ++i) {
        csv << "lang" << (i < 10 ? "0" : "") << i << ",Anchor,x\n";
        if (i < 7) csv << "lang" << "0" << i << ",Seven,y\n";
        if (i < 6) csv << "lang" << "0" << i << ",Six,z\n";
    }
    const auto path = write_csv(tmp, "cov.csv", csv.str());
    const auto db = load_wals_csv(path);
    const auto kept = coverage_filter(db, db.languages, 0.25);
    CHECK(std::find(kept.begin(), kept.end(), "Seven") != kept.end());
    CHECK(std::find(kept.begin(), kept.end(), "Six") == kept.end());  // 6 < ceil(6.5)

    SUBCASE("min_coverage 0 keeps features with at least one value") {
        const auto all = coverage_filter(db, db.languages, 0.0);
        CHECK(all.size() == 3);
    }
    SUBCASE("min_coverage 1 keeps only fully annotated features") {
        const auto full = coverage_filter(db, db.languages, 1.0);
        CHECK(full == std::vector<std::string>{"Anchor"});
    }
    SUBCASE("monotone: raising min_coverage never adds features") {
        std::size_t previous = coverage_filter(db, db.languages, 0.0).size();
        for (double c : {0.1, 0.25, 0.5, 0.9, 1.0}) {
            const auto kept_c = coverage_filter(db, db.languages, c).size();
            CHECK(kept_c <= previous);
            previous = kept_c;
        }
    }
}

TEST_CASE("binarize one-hot semantics") {
    fixtures::TempDir tmp("wals-bin");
    const auto path = write_csv(tmp, "b.csv",
                                "language,feature,value\n"
                                "english,Tone,No tones\n"
                                "mandarin,Tone,Complex tone system\n"
                                "english,Gender,Sex-based\n");
    const auto db = load_wals_csv(path);
    const std::vector<std::string> languages{"english", "mandarin"};
    const std::vector<std::string> features{"Tone", "Gender"};
    const auto matrix = binarize(db, languages, features);

    // column order: feature, then value lexicographic (Unknown sorts as value)
    std::vector<std::string> names;
    for (const auto& col : matrix.columns) names.push_back(col.name());
    CHECK(names == std::vector<std::string>{
                       "Gender: Sex-based", "Gender: Unknown", "Tone: Complex tone system",
                       "Tone: No tones", "Tone: Unknown"});

    auto cell = [&](const std::string& lang, const std::string& col) {
        const auto r = std::find(matrix.languages.begin(), matrix.languages.end(), lang) -
                       matrix.languages.begin();
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            if (matrix.columns[c].name() == col) return matrix.at(r, c);
        }
        FAIL("no column ", col);
        return std::uint8_t{0};
    };
    CHECK(cell("english", "Tone: No tones") == 1);
    CHECK(cell("english", "Tone: Unknown") == 0);
    CHECK(cell("mandarin", "Gender: Unknown") == 1);  // missing -> Unknown

    // one-hot: per feature group, each row sums to exactly 1
    for (std::size_t r = 0; r < matrix.languages.size(); ++r) {
        int tone = 0, gender = 0;
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            if (matrix.columns[c].feature == "Tone") tone += matrix.at(r, c);
            if (matrix.columns[c].feature == "Gender") gender += matrix.at(r, c);
        }
        CHECK(tone == 1);
        CHECK(gender == 1);
    }

    SUBCASE("languages sharing all values get identical rows") {
        // both absent from the db: every feature Unknown for both
        const std::vector<std::string> two{"ghost1", "ghost2"};
        const auto m = binarize(db, two, features);
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            CHECK(m.at(0, c) == m.at(1, c));
        }
    }
}

TEST_CASE("morphology_subset finds the three features") {
    fixtures::TempDir tmp("wals-morph");
    const auto path = write_csv(tmp, "m.csv",
                                "language,feature,value\n"
                                "indonesian,20A Fusion of Selected Inflectional Formatives,"
                                "Exclusively isolating\n"
                                "turkish,21A Exponence of Selected Inflectional Formatives,"
                                "Monoexponential case\n"
                                "english,59A Possessive Classification,None\n"
                                "english,Tone,No tones\n");
    const auto db = load_wals_csv(path);
    const auto subset = morphology_subset(db);
    REQUIRE(subset.size() == 3);
    CHECK(subset[0].find("20A") == 0);
    CHECK(subset[1].find("21A") == 0);
    CHECK(subset[2].find("59A") == 0);

    const auto matrix = binarize(db, db.languages, subset);
    bool found = false;
    for (const auto& col : matrix.columns) {
        if (col.name() == "20A Fusion of Selected Inflectional Formatives: "
                          "Exclusively isolating") {
            found = true;
        }
    }
    CHECK(found);

    SUBCASE("missing feature errors by name") {
        fixtures::TempDir tmp2("wals-morph2");
        const auto partial = write_csv(tmp2, "p.csv",
                                       "language,feature,value\n"
                                       "indonesian,20A Fusion,Exclusively isolating\n"
                                       "turkish,21A Exponence,Monoexponential case\n");
        const auto db2 = load_wals_csv(partial);
        CHECK_THROWS_WITH_AS(morphology_subset(db2), doctest::Contains("59A"),
                             std::runtime_error);
    }
}

TEST_CASE("matrix TSV header mirrors 'Feature: Value' naming") {
    fixtures::TempDir tmp("wals-tsv");
    const auto path = write_csv(tmp, "t.csv",
                                "language,feature,value\n"
                                "english,Tone,No tones\n");
    const auto db = load_wals_csv(path);
    const std::vector<std::string> languages{"english"};
    const std::vector<std::string> features{"Tone"};
    const auto matrix = binarize(db, languages, features);
    std::ostringstream out;
    write_matrix_tsv(out, matrix);
    const auto text = out.str();
    CHECK(text.find("language\tTone: No tones\tTone: Unknown\n") == 0);
    CHECK(text.find("english\t1\t0\n") != std::string::npos);
}
