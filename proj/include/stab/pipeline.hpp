#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stab/sampling.hpp"
#include "stab/sgns.hpp"
#include "stab/stability.hpp"

namespace stab {

enum class PipelineMethod {
    kMultiDownsampleIngest,  // stability across externally trained spaces, one per downsample
    kMultiSeedTrain,         // train on one corpus with several seeds, stability across seeds
};

struct PipelineConfig {
    PipelineMethod method = PipelineMethod::kMultiSeedTrain;
    int k = 10;
    double bucket_width = 5.0;

    // multi-seed-train
    std::string corpus_path;
    std::vector<std::uint64_t> seeds;
    TrainConfig train;
    std::map<std::string, std::string> variants;  // label -> corpus path (e.g. translations)

    // multi-downsample-ingest
    std::vector<std::string> space_paths;
    std::vector<std::string> sample_paths;  // optional matching corpora for vocab filtering
    bool glove_format = false;
    std::uint64_t min_count = 5;
    MinCountMode vocab_mode = MinCountMode::kPerSampleAtLeast;

    // When set, writes <prefix>.json/.tsv/.buckets.csv and <prefix>.manifest.json.
    std::filesystem::path out_prefix;
};

struct PipelineResult {
    StabilityReport report;  // the only report, or the best variant's
    std::string best_variant;
    std::map<std::string, StabilityReport> variant_reports;
};

// Runs the configured pipeline end to end. Stage failures are rethrown with
// the stage name prefixed.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace stab
