#include "stab/pipeline.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "stab/version.hpp"

namespace stab {
namespace {

template <class Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error("stage " + std::string(name) + ": " + e.what());
    }
}

Vocabulary intersect(const Vocabulary& a, const Vocabulary& b) {
    std::vector<std::string> words;
    for (const auto& w : a.words()) {
        if (b.contains(w)) words.push_back(w);
    }
    if (words.empty()) throw std::runtime_error("empty vocabulary intersection");
    return Vocabulary::from_words(std::move(words));
}

StabilityReport run_multi_seed_train(const PipelineConfig& config,
                                     const std::string& corpus_path) {
    Corpus corpus = stage("load-corpus", [&] { return load_corpus(corpus_path); });

    std::vector<EmbeddingSpace> spaces = stage("train", [&] {
        std::vector<EmbeddingSpace> out;
        out.reserve(config.seeds.size());
        for (std::uint64_t seed : config.seeds) {
            TrainConfig train_config = config.train;
            train_config.seed = seed;
            out.push_back(train(corpus, train_config));
        }
        return out;
    });

    Vocabulary restrict_vocab = stage("vocabulary", [&] {
        return shared_vocabulary({&corpus, 1}, config.train.min_count, config.vocab_mode);
    });

    return stage("stability", [&] {
        return language_stability(spaces, restrict_vocab, config.k, config.bucket_width);
    });
}

StabilityReport run_multi_downsample_ingest(const PipelineConfig& config) {
    std::vector<EmbeddingSpace> spaces = stage("load-spaces", [&] {
        if (config.space_paths.size() < 2) {
            throw std::runtime_error("multi-downsample-ingest needs at least two spaces");
        }
        std::vector<EmbeddingSpace> out;
        out.reserve(config.space_paths.size());
        for (const auto& path : config.space_paths) {
            out.push_back(config.glove_format ? load_glove_text(path)
                                              : load_word2vec_text(path));
        }
        return out;
    });

    Vocabulary restrict_vocab = stage("vocabulary", [&] {
        Vocabulary common = common_vocabulary(spaces);
        if (config.sample_paths.empty()) return common;
        std::vector<Corpus> samples;
        samples.reserve(config.sample_paths.size());
        for (const auto& path : config.sample_paths) samples.push_back(load_corpus(path));
        return intersect(shared_vocabulary(samples, config.min_count, config.vocab_mode),
                         common);
    });

    return stage("stability", [&] {
        return language_stability(spaces, restrict_vocab, config.k, config.bucket_width);
    });
}

void write_outputs(const PipelineConfig& config, const PipelineResult& result) {
    const auto prefix = config.out_prefix.string();
    write_report_json(result.report, prefix + ".json");
    write_report_tsv(result.report, prefix + ".tsv");
    write_buckets_csv(result.report, prefix + ".buckets.csv");

    nlohmann::json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["command"] = "pipeline";
    manifest["config"] = {
        {"method", config.method == PipelineMethod::kMultiSeedTrain ? "multi-seed-train"
                                                                    : "multi-downsample-ingest"},
        {"k", config.k},
        {"bucket_width", config.bucket_width},
        {"min_count", config.min_count},
        {"vocab_mode", config.vocab_mode == MinCountMode::kPerSampleAtLeast
                           ? "per-sample-at-least"
                           : "total-greater-than"},
        {"seeds", config.seeds},
        {"corpus", config.corpus_path},
        {"spaces", config.space_paths},
        {"samples", config.sample_paths},
        {"glove_format", config.glove_format},
    };
    if (config.method == PipelineMethod::kMultiSeedTrain) {
        manifest["config"]["train"] = {
            {"dim", config.train.dim},           {"window", config.train.window},
            {"min_count", config.train.min_count}, {"negatives", config.train.negatives},
            {"epochs", config.train.epochs},     {"initial_lr", config.train.initial_lr},
            {"subsample_threshold", config.train.subsample_threshold},
            {"deterministic", config.train.deterministic},
        };
    }
    manifest["outputs"] = {prefix + ".json", prefix + ".tsv", prefix + ".buckets.csv"};
    manifest["average_stability"] = result.report.average;
    if (!result.best_variant.empty()) {
        manifest["best_variant"] = result.best_variant;
        nlohmann::json averages;
        for (const auto& [label, report] : result.variant_reports) {
            averages[label] = report.average;
        }
        manifest["variant_averages"] = averages;
    }

    std::ofstream out(prefix + ".manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + prefix + ".manifest.json");
    out << manifest.dump(2) << '\n';
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;

    if (config.method == PipelineMethod::kMultiSeedTrain) {
        if (config.seeds.size() < 2) {
            throw std::invalid_argument(
                "multi-seed-train requires at least two seeds over one corpus");
        }
        if (!config.variants.empty()) {
            for (const auto& [label, path] : config.variants) {
                result.variant_reports.emplace(label, run_multi_seed_train(config, path));
            }
            result.best_variant = select_best_variant(result.variant_reports);
            result.report = result.variant_reports.at(result.best_variant);
        } else {
            if (config.corpus_path.empty()) {
                throw std::invalid_argument("multi-seed-train requires exactly one corpus");
            }
            result.report = run_multi_seed_train(config, config.corpus_path);
        }
    } else {
        result.report = run_multi_downsample_ingest(config);
    }

    if (!config.out_prefix.empty()) {
        stage("write-report", [&] {
            write_outputs(config, result);
            return 0;
        });
    }
    return result;
}

}  // namespace stab
