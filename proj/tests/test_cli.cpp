// Integration tests driving the embstab binary; exit codes are part of the
// contract (0 success, 1 usage error, 2 data error).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "stab/corpus.hpp"
#include "stab/embedding.hpp"
#include "support/fixtures.hpp"

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(EMBSTAB_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string make_corpus(const fixtures::TempDir& tmp, const std::string& name,
                        std::size_t sentences, std::uint64_t seed) {
    const auto corpus = fixtures::markov_corpus(sentences, 40, seed);
    const auto path = tmp.file(name);
    stab::save_corpus(corpus, path);
    return path;
}

std::string wals_fixture_csv() {
    // 8 languages, 2 features; y below is linear in these columns
    return "language,feature,value\n"
           "lang0,Tone,None\nlang0,Gender,No gender\n"
           "lang1,Tone,Complex\nlang1,Gender,No gender\n"
           "lang2,Tone,None\nlang2,Gender,Sex-based\n"
           "lang3,Tone,Complex\nlang3,Gender,Sex-based\n"
           "lang4,Tone,None\n"
           "lang5,Tone,Complex\n"
           "lang6,Gender,No gender\n"
           "lang7,Gender,Sex-based\n";
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("definitely-not-a-subcommand") == 1);
    CHECK(run("downsample") == 1);                       // missing required args
    CHECK(run("stability --bogus-flag x y --out p") == 1);
    CHECK(run("--help") == 0);
    CHECK(run("--version") == 0);
}

TEST_CASE("downsample writes k samples plus a manifest") {
    fixtures::TempDir tmp("cli-down");
    const auto corpus = make_corpus(tmp, "wiki.txt", 600, 1);
    CHECK(run("downsample " + corpus + " --k 5 --n 100 --disjoint --seed 7 --out-dir " +
              tmp.file("out")) == 0);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::filesystem::exists(tmp.file("out/wiki.sample" + std::to_string(i) +
                                               ".txt")));
    }
    const auto manifest = nlohmann::json::parse(slurp(tmp.file("out/wiki.manifest.json")));
    CHECK(manifest.at("command") == "downsample");
    CHECK(manifest.at("config").at("seed") == 7);

    SUBCASE("overlap mode records the measured overlap") {
        CHECK(run("downsample " + corpus + " --k 2 --n 100 --overlap 0.3 --seed 7 "
                  "--label ov --out-dir " + tmp.file("out")) == 0);
        const auto m = nlohmann::json::parse(slurp(tmp.file("out/ov.manifest.json")));
        CHECK(m.at("results").at("measured_overlap")[0][1].get<double>() ==
              doctest::Approx(0.3));
    }
    SUBCASE("infeasible plan is a data error") {
        CHECK(run("downsample " + corpus + " --k 100 --n 100 --disjoint --out-dir " +
                  tmp.file("out")) == 2);
    }
    SUBCASE("missing corpus is a data error") {
        CHECK(run("downsample /nope/missing.txt --k 2 --n 10 --disjoint") == 2);
    }
}

TEST_CASE("train emits word2vec text deterministically") {
    fixtures::TempDir tmp("cli-train");
    const auto corpus = make_corpus(tmp, "c.txt", 400, 2);
    const std::string base = " --dim 8 --window 3 --min-count 3 --epochs 2 --seed 5 --out ";
    CHECK(run("train " + corpus + base + tmp.file("a.vec")) == 0);
    CHECK(run("train " + corpus + base + tmp.file("b.vec")) == 0);
    CHECK(slurp(tmp.file("a.vec")) == slurp(tmp.file("b.vec")));
    CHECK(std::filesystem::exists(tmp.file("a.vec.manifest.json")));
    const auto space = stab::load_word2vec_text(tmp.file("a.vec"));
    CHECK(space.dim() == 8);
}

TEST_CASE("stability on the three-model fixture reports 66.7 for rock") {
    fixtures::TempDir tmp("cli-stab");
    const auto spaces = fixtures::rock_fixture_spaces();
    std::string files;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        const auto path = tmp.file("g" + std::to_string(i) + ".vec");
        stab::save_word2vec_text(spaces[i], path);
        files += path + " ";
    }
    CHECK(run("stability " + files + "--k 10 --out " + tmp.file("rock")) == 0);
    const auto report = nlohmann::json::parse(slurp(tmp.file("rock.json")));
    CHECK(report.at("per_word").at("rock").get<double>() == doctest::Approx(66.7).epsilon(0.001));

    SUBCASE("two identical spaces average 100") {
        CHECK(run("stability " + tmp.file("g0.vec") + " " + tmp.file("g0.vec") +
                  " --out " + tmp.file("same")) == 0);
        const auto same = nlohmann::json::parse(slurp(tmp.file("same.json")));
        CHECK(same.at("average").get<double>() == 100.0);
    }
    SUBCASE("missing space file exits 2") {
        CHECK(run("stability " + tmp.file("g0.vec") + " /nope.vec --out " +
                  tmp.file("x")) == 2);
    }
    SUBCASE("cross-set stability via --versus") {
        CHECK(run("stability " + tmp.file("g0.vec") + " --versus " + tmp.file("g1.vec") +
                  " " + tmp.file("g2.vec") + " --k 10 --out " + tmp.file("cross")) == 0);
        const auto cross = nlohmann::json::parse(slurp(tmp.file("cross.json")));
        // mean of overlap(g0,g1)=60 and overlap(g0,g2)=70 for "rock"
        CHECK(cross.at("per_word").at("rock").get<double>() == doctest::Approx(65.0));
    }
}

TEST_CASE("neighbors dumps a TSV") {
    fixtures::TempDir tmp("cli-nn");
    const auto space = fixtures::random_space(30, 6, 9);
    stab::save_word2vec_text(space, tmp.file("s.vec"));
    CHECK(run("neighbors " + tmp.file("s.vec") + " --query w0003 --k 5 --out " +
              tmp.file("nn.tsv")) == 0);
    const auto tsv = slurp(tmp.file("nn.tsv"));
    CHECK(tsv.rfind("query\trank\tneighbor\tsimilarity\n", 0) == 0);
    CHECK(tsv.find("w0003\t1\t") != std::string::npos);
    CHECK(run("neighbors " + tmp.file("s.vec") + " --query not-there") == 2);
}

TEST_CASE("pipeline multi-seed-train via the CLI") {
    fixtures::TempDir tmp("cli-pipe");
    const auto corpus = make_corpus(tmp, "c.txt", 500, 3);
    CHECK(run("pipeline --method multi-seed-train --corpus " + corpus +
              " --seeds 1 2 3 --dim 8 --window 3 --min-count 3 --epochs 2 --k 5 "
              "--out-prefix " + tmp.file("run")) == 0);
    const auto report = nlohmann::json::parse(slurp(tmp.file("run.json")));
    double sum = 0.0;
    for (const auto& b : report.at("buckets")) sum += b.get<double>();
    CHECK(sum == doctest::Approx(100.0).epsilon(1e-6));
    const auto manifest = nlohmann::json::parse(slurp(tmp.file("run.manifest.json")));
    CHECK(manifest.at("config").at("seeds").size() == 3);

    SUBCASE("bad method is a usage error") {
        CHECK(run("pipeline --method nonsense --corpus " + corpus) == 1);
    }
    SUBCASE("one seed is a data error") {
        CHECK(run("pipeline --method multi-seed-train --corpus " + corpus +
                  " --seeds 1 --out-prefix " + tmp.file("x")) == 2);
    }
}

TEST_CASE("wals-prep emits the binarized matrix") {
    fixtures::TempDir tmp("cli-wals");
    std::ofstream(tmp.file("w.csv")) << wals_fixture_csv();
    CHECK(run("wals-prep --wals " + tmp.file("w.csv") +
              " --languages lang0 lang1 lang2 lang3 --min-coverage 0.5 --out " +
              tmp.file("m.tsv")) == 0);
    const auto tsv = slurp(tmp.file("m.tsv"));
    CHECK(tsv.find("Tone: Complex") != std::string::npos);
    CHECK(tsv.find("Gender: Unknown") != std::string::npos);
    CHECK(tsv.find("lang0\t") != std::string::npos);
}

TEST_CASE("regress and explain round-trip") {
    fixtures::TempDir tmp("cli-reg");
    std::ofstream(tmp.file("w.csv")) << wals_fixture_csv();
    // y linear in the fixture: None +0.5, Complex -0.5, No gender +0.3, base 2
    std::ofstream(tmp.file("s.tsv")) << "language\taverage_stability\n"
                                        "lang0\t2.8\nlang1\t1.8\nlang2\t2.5\n"
                                        "lang3\t1.5\nlang4\t2.5\nlang5\t1.5\n"
                                        "lang6\t2.3\nlang7\t2.0\n";
    CHECK(run("regress --stability " + tmp.file("s.tsv") + " --wals " + tmp.file("w.csv") +
              " --lambda 0.001 --bootstrap 200 --seed 4 --min-coverage 0.25 --out-prefix " +
              tmp.file("full")) == 0);
    const auto manifest = nlohmann::json::parse(slurp(tmp.file("full.manifest.json")));
    CHECK(manifest.at("results").at("r2_mean").get<double>() >= 0.95);
    CHECK(std::filesystem::exists(tmp.file("full.model.json")));
    CHECK(std::filesystem::exists(tmp.file("full.bootstrap.tsv")));
    CHECK(std::filesystem::exists(tmp.file("full.significant.tsv")));

    SUBCASE("explain reports prediction and ground truth") {
        CHECK(run("explain --model " + tmp.file("full.model.json") + " --wals " +
                  tmp.file("w.csv") + " --language lang0 --stability " + tmp.file("s.tsv") +
                  " --threshold 0.1 --out " + tmp.file("e.tsv")) == 0);
        const auto tsv = slurp(tmp.file("e.tsv"));
        CHECK(tsv.find("Predicted value\t") != std::string::npos);
        CHECK(tsv.find("Ground truth: average stability\t2.8") != std::string::npos);
    }
    SUBCASE("two tables average per language") {
        std::ofstream(tmp.file("s2.tsv")) << "language\taverage_stability\nlang0\t40\n";
        std::ofstream(tmp.file("s3.tsv")) << "language\taverage_stability\nlang0\t60\n";
        CHECK(run("explain --model " + tmp.file("full.model.json") + " --wals " +
                  tmp.file("w.csv") + " --language lang0 --stability " + tmp.file("s2.tsv") +
                  " --stability " + tmp.file("s3.tsv") + " --out " + tmp.file("avg.tsv")) == 0);
        CHECK(slurp(tmp.file("avg.tsv")).find("Ground truth: average stability\t50") !=
              std::string::npos);
    }
    SUBCASE("morphology subset requires the three features") {
        CHECK(run("regress --stability " + tmp.file("s.tsv") + " --wals " + tmp.file("w.csv") +
                  " --morphology --out-prefix " + tmp.file("m")) == 2);
    }
    SUBCASE("fewer than 3 languages is a data error") {
        std::ofstream(tmp.file("tiny.tsv")) << "language\taverage_stability\nlang0\t2\n";
        CHECK(run("regress --stability " + tmp.file("tiny.tsv") + " --wals " +
                  tmp.file("w.csv") + " --out-prefix " + tmp.file("t")) == 2);
    }
}

TEST_CASE("regress with the morphology features present") {
    fixtures::TempDir tmp("cli-morph");
    std::ostringstream csv;
    csv << "language,feature,value\n";
    const char* fusion[] = {"Exclusively isolating", "Exclusively concatenative"};
    for (int i = 0; i < 6; ++i) {
        csv << "lang" << i << ",20A Fusion,"
            << fusion[i % 2] << "\n"
            << "lang" << i << ",21A Exponence,"
            << (i % 3 == 0 ? "No case" : "Monoexponential case") << "\n"
            << "lang" << i << ",59A Possessive Classification,"
            << (i < 3 ? "None" : "Two classes") << "\n"
            << "lang" << i << ",Tone,None\n";
    }
    std::ofstream(tmp.file("w.csv")) << csv.str();
    std::ofstream(tmp.file("s.tsv")) << "language\taverage_stability\n"
                                        "lang0\t3.0\nlang1\t1.0\nlang2\t2.8\n"
                                        "lang3\t1.4\nlang4\t3.1\nlang5\t0.9\n";
    CHECK(run("regress --stability " + tmp.file("s.tsv") + " --wals " + tmp.file("w.csv") +
              " --morphology --lambda 0.1 --bootstrap 100 --out-prefix " +
              tmp.file("m")) == 0);
    const auto model = nlohmann::json::parse(slurp(tmp.file("m.model.json")));
    for (const auto& column : model.at("columns")) {
        const auto name = column.get<std::string>();
        const bool morph = name.find("20A") == 0 || name.find("21A") == 0 ||
                           name.find("59A") == 0;
        CHECK(morph);
    }
}

TEST_CASE("plot renders polylines per series") {
    fixtures::TempDir tmp("cli-plot");
    for (int s = 0; s < 6; ++s) {
        std::ofstream csv(tmp.file("b" + std::to_string(s) + ".csv"));
        csv << "bucket_upper,percent\n";
        for (int b = 1; b <= 20; ++b) csv << (5 * b) << ',' << (s + b % 5) << "\n";
    }
    std::string inputs;
    for (int s = 0; s < 6; ++s) inputs += tmp.file("b" + std::to_string(s) + ".csv") + " ";
    CHECK(run("plot " + inputs + "--labels 10% 20% 30% 40% 50% 60% --out " +
              tmp.file("c.svg")) == 0);
    const auto svg = slurp(tmp.file("c.svg"));
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 6);
    CHECK(svg.find("60%") != std::string::npos);

    SUBCASE("groups mode draws boxes") {
        std::ofstream groups(tmp.file("g.tsv"));
        groups << "group\tvalue\nNo tones\t2.1\nNo tones\t2.4\nNo tones\t1.9\n"
                  "Complex\t1.0\nComplex\t1.2\nComplex\t0.7\n";
        groups.close();
        CHECK(run("plot --mode groups " + tmp.file("g.tsv") + " --out " +
                  tmp.file("g.svg")) == 0);
        CHECK(slurp(tmp.file("g.svg")).find("No tones (n=3)") != std::string::npos);
    }
    SUBCASE("empty series errors") {
        std::ofstream(tmp.file("empty.csv")) << "bucket_upper,percent\n";
        CHECK(run("plot " + tmp.file("empty.csv") + " --out " + tmp.file("x.svg")) == 2);
    }
}

TEST_CASE("EMBSTAB_OUT_DIR re-roots relative outputs") {
    fixtures::TempDir tmp("cli-env");
    const auto corpus = make_corpus(tmp, "c.txt", 200, 8);
    setenv("EMBSTAB_OUT_DIR", tmp.file("redirected").c_str(), 1);
    const int rc = run("downsample " + corpus + " --k 2 --n 20 --disjoint --label env "
                       "--out-dir samples");
    unsetenv("EMBSTAB_OUT_DIR");
    CHECK(rc == 0);
    CHECK(std::filesystem::exists(tmp.file("redirected/samples/env.sample0.txt")));
    CHECK(std::filesystem::exists(tmp.file("redirected/samples/env.manifest.json")));
}
