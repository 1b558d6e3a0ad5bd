// embstab: measure word-embedding stability across spaces, run downsampling
// and training protocols, and relate typology features to stability.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stab/corpus.hpp"
#include "stab/embedding.hpp"
#include "stab/knn.hpp"
#include "stab/pipeline.hpp"
#include "stab/regression.hpp"
#include "stab/sampling.hpp"
#include "stab/sgns.hpp"
#include "stab/stability.hpp"
#include "stab/svg.hpp"
#include "stab/version.hpp"
#include "stab/wals.hpp"

namespace {

namespace fs = std::filesystem;

// EMBSTAB_OUT_DIR re-roots relative output paths; the only env override.
fs::path resolve_out(const fs::path& path) {
    const char* dir = std::getenv("EMBSTAB_OUT_DIR");
    if (dir && *dir && path.is_relative()) return fs::path(dir) / path;
    return path;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_manifest(const fs::path& path, const std::string& command,
                    nlohmann::json config, std::vector<std::string> outputs,
                    nlohmann::json results = {}) {
    nlohmann::json manifest;
    manifest["tool"] = stab::kToolName;
    manifest["version"] = stab::kToolVersion;
    manifest["command"] = command;
    manifest["config"] = std::move(config);
    manifest["outputs"] = std::move(outputs);
    if (!results.is_null()) manifest["results"] = std::move(results);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << manifest.dump(2) << '\n';
}

stab::EmbeddingSpace load_space(const fs::path& path, bool glove) {
    return glove ? stab::load_glove_text(path) : stab::load_word2vec_text(path);
}

// "language<TAB>average" rows with a header line; several files are averaged
// per language.
std::map<std::string, double> read_language_averages(const std::vector<std::string>& paths) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open stability table: " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected 'language<TAB>average'");
            }
            const std::string language = line.substr(0, tab);
            if (lineno == 1 && (language == "language" || language == "word")) continue;
            const double value = std::stod(line.substr(tab + 1));
            auto& slot = acc[language];
            slot.first += value;
            slot.second += 1;
        }
    }
    std::map<std::string, double> out;
    for (const auto& [language, slot] : acc) {
        out[language] = slot.first / slot.second;
    }
    return out;
}

std::vector<stab::svg::Series> read_bucket_series(const std::vector<std::string>& paths,
                                                  const std::vector<std::string>& labels) {
    std::vector<stab::svg::Series> series;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::ifstream in(paths[i], std::ios::binary);
        if (!in) throw std::runtime_error("cannot open bucket CSV: " + paths[i]);
        stab::svg::Series s;
        s.label = i < labels.size() ? labels[i] : fs::path(paths[i]).stem().string();
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || lineno == 1) continue;  // header
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                throw std::runtime_error(paths[i] + ":" + std::to_string(lineno) +
                                         ": expected 'bucket_upper,percent'");
            }
            s.xs.push_back(std::stod(line.substr(0, comma)));
            s.ys.push_back(std::stod(line.substr(comma + 1)));
        }
        if (s.xs.empty()) throw std::runtime_error(paths[i] + ": no data rows");
        series.push_back(std::move(s));
    }
    return series;
}

// ---------------------------------------------------------------------------

struct DownsampleArgs {
    std::string corpus;
    std::size_t k = 5, n = 0;
    double overlap = -1.0;
    bool disjoint = false;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string label;
};

void run_downsample(const DownsampleArgs& args) {
    if (args.disjoint == (args.overlap >= 0.0)) {
        throw std::runtime_error("choose exactly one of --disjoint or --overlap");
    }
    const stab::Corpus corpus = stab::load_corpus(args.corpus);
    const std::string label =
        args.label.empty() ? fs::path(args.corpus).stem().string() : args.label;

    std::vector<stab::Corpus> samples =
        args.disjoint
            ? stab::downsample_disjoint(corpus, args.k, args.n, args.seed)
            : stab::downsample_with_overlap(corpus, args.k, args.n, args.overlap, args.seed);

    const fs::path dir = resolve_out(args.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        fs::path path = dir / (label + ".sample" + std::to_string(i) + ".txt");
        stab::save_corpus(samples[i], path);
        files.push_back(path.string());
    }

    const auto overlap = stab::measured_overlap(samples);
    nlohmann::json config{{"corpus", args.corpus},
                          {"k", args.k},
                          {"n", args.n},
                          {"seed", args.seed},
                          {"mode", args.disjoint ? "disjoint" : "overlap"}};
    if (!args.disjoint) config["overlap_target"] = args.overlap;
    write_manifest(dir / (label + ".manifest.json"), "downsample", config, files,
                   {{"measured_overlap", overlap}});
    std::cout << "wrote " << samples.size() << " samples to " << dir.string() << "\n";
}

struct TrainArgs {
    std::string corpus;
    std::string out;
    stab::TrainConfig config;
    bool parallel = false;
    bool deterministic = false;
};

void run_train(const TrainArgs& args) {
    if (args.parallel && args.deterministic) {
        throw std::runtime_error("--deterministic and --parallel are mutually exclusive");
    }
    stab::TrainConfig config = args.config;
    config.deterministic = !args.parallel;
    const stab::Corpus corpus = stab::load_corpus(args.corpus);
    stab::TrainStats stats;
    const stab::EmbeddingSpace space = stab::train(corpus, config, &stats);

    const fs::path out = resolve_out(args.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    stab::save_word2vec_text(space, out);
    write_manifest(out.string() + ".manifest.json", "train",
                   {{"corpus", args.corpus},
                    {"dim", config.dim},
                    {"window", config.window},
                    {"min_count", config.min_count},
                    {"negatives", config.negatives},
                    {"epochs", config.epochs},
                    {"initial_lr", config.initial_lr},
                    {"subsample_threshold", config.subsample_threshold},
                    {"seed", config.seed},
                    {"deterministic", config.deterministic}},
                   {out.string()},
                   {{"epoch_loss", stats.epoch_loss},
                    {"examples", stats.examples},
                    {"vocabulary", space.vocab.size()}});
    std::cout << "trained " << space.vocab.size() << " vectors (dim " << space.dim()
              << ") -> " << out.string() << "\n";
}

struct NeighborsArgs {
    std::string space;
    std::vector<std::string> queries;
    bool all = false;
    bool glove = false;
    int k = 10;
    std::string out;
};

void run_neighbors(const NeighborsArgs& args) {
    const stab::EmbeddingSpace space = load_space(args.space, args.glove);
    const stab::Vocabulary& restrict_vocab = space.vocab;

    std::vector<int> queries;
    if (args.all) {
        queries.resize(restrict_vocab.size());
        for (std::size_t i = 0; i < queries.size(); ++i) queries[i] = static_cast<int>(i);
    } else {
        if (args.queries.empty()) throw std::runtime_error("no queries given (use --query or --all)");
        for (const auto& q : args.queries) {
            const int id = restrict_vocab.id_of(q);
            if (id < 0) throw std::runtime_error("query '" + q + "' not in vocabulary");
            queries.push_back(id);
        }
    }
    const auto lists = stab::batch_top_k(space, queries, args.k, restrict_vocab);

    if (args.out.empty()) {
        stab::write_neighbors_tsv(std::cout, lists, restrict_vocab);
    } else {
        const fs::path out = resolve_out(args.out);
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + out.string());
        stab::write_neighbors_tsv(file, lists, restrict_vocab);
        write_manifest(out.string() + ".manifest.json", "neighbors",
                       {{"space", args.space}, {"k", args.k}, {"glove", args.glove}},
                       {out.string()});
    }
}

struct StabilityArgs {
    std::vector<std::string> spaces;
    std::vector<std::string> versus;
    bool glove = false;
    int k = 10;
    double bucket_width = 5.0;
    std::string out_prefix;
};

void run_stability(const StabilityArgs& args) {
    std::vector<stab::EmbeddingSpace> x;
    for (const auto& path : args.spaces) x.push_back(load_space(path, args.glove));
    std::vector<stab::EmbeddingSpace> y;
    for (const auto& path : args.versus) y.push_back(load_space(path, args.glove));

    std::vector<stab::EmbeddingSpace> all(x.begin(), x.end());
    all.insert(all.end(), y.begin(), y.end());
    if (all.size() < 2) throw std::runtime_error("need at least two embedding spaces");
    const stab::Vocabulary restrict_vocab = stab::common_vocabulary(all);

    const stab::StabilityReport report =
        y.empty() ? stab::language_stability(x, restrict_vocab, args.k, args.bucket_width)
                  : stab::language_stability(x, y, restrict_vocab, args.k, args.bucket_width);

    const fs::path prefix = resolve_out(args.out_prefix);
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    stab::write_report_json(report, prefix.string() + ".json");
    stab::write_report_tsv(report, prefix.string() + ".tsv");
    stab::write_buckets_csv(report, prefix.string() + ".buckets.csv");
    write_manifest(prefix.string() + ".manifest.json", "stability",
                   {{"spaces", args.spaces},
                    {"versus", args.versus},
                    {"k", args.k},
                    {"bucket_width", args.bucket_width},
                    {"glove", args.glove}},
                   {prefix.string() + ".json", prefix.string() + ".tsv",
                    prefix.string() + ".buckets.csv"},
                   {{"average", report.average}, {"words", report.per_word.size()}});
    std::cout << "average stability " << report.average << " over " << report.per_word.size()
              << " words\n";
}

struct PipelineArgs {
    std::string method = "multi-seed-train";
    std::string vocab_mode = "per-sample";
    stab::PipelineConfig config;
    std::vector<std::string> variant_specs;
    bool parallel = false;
};

void run_pipeline_cmd(PipelineArgs& args) {
    args.config.method = args.method == "multi-seed-train"
                             ? stab::PipelineMethod::kMultiSeedTrain
                             : stab::PipelineMethod::kMultiDownsampleIngest;
    args.config.vocab_mode = args.vocab_mode == "per-sample"
                                 ? stab::MinCountMode::kPerSampleAtLeast
                                 : stab::MinCountMode::kTotalGreaterThan;
    args.config.train.deterministic = !args.parallel;
    args.config.train.min_count = args.config.min_count;
    for (const auto& spec : args.variant_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("--variant expects LABEL=CORPUS, got '" + spec + "'");
        }
        args.config.variants.emplace(spec.substr(0, eq), spec.substr(eq + 1));
    }
    if (!args.config.out_prefix.empty()) {
        args.config.out_prefix = resolve_out(args.config.out_prefix);
        if (args.config.out_prefix.has_parent_path()) {
            fs::create_directories(args.config.out_prefix.parent_path());
        }
    }

    const stab::PipelineResult result = stab::run_pipeline(args.config);
    if (!result.best_variant.empty()) {
        std::cout << "best variant: " << result.best_variant << "\n";
        for (const auto& [label, report] : result.variant_reports) {
            std::cout << "  " << label << ": average " << report.average << "\n";
        }
    }
    std::cout << "average stability " << result.report.average << " over "
              << result.report.per_word.size() << " words\n";
}

struct WalsPrepArgs {
    std::string wals;
    std::vector<std::string> languages;
    std::string languages_from;
    double min_coverage = 0.25;
    bool morphology = false;
    std::string out;
};

void run_wals_prep(const WalsPrepArgs& args) {
    const stab::WalsDatabase db = stab::load_wals_csv(args.wals);
    std::vector<std::string> languages = args.languages;
    if (!args.languages_from.empty()) {
        for (const auto& [language, avg] : read_language_averages({args.languages_from})) {
            languages.push_back(language);
        }
    }
    if (languages.empty()) languages = db.languages;
    std::sort(languages.begin(), languages.end());
    languages.erase(std::unique(languages.begin(), languages.end()), languages.end());

    const std::vector<std::string> features =
        args.morphology ? stab::morphology_subset(db)
                        : stab::coverage_filter(db, languages, args.min_coverage);
    if (features.empty()) throw std::runtime_error("no feature passes the coverage filter");
    const stab::BinaryFeatureMatrix matrix = stab::binarize(db, languages, features);

    std::ostringstream body;
    stab::write_matrix_tsv(body, matrix);
    if (args.out.empty()) {
        std::cout << body.str();
    } else {
        const fs::path out = resolve_out(args.out);
        write_text(out, body.str());
        write_manifest(out.string() + ".manifest.json", "wals-prep",
                       {{"wals", args.wals},
                        {"languages", languages},
                        {"min_coverage", args.min_coverage},
                        {"morphology", args.morphology},
                        {"columns", matrix.columns.size()}},
                       {out.string()});
    }
}

struct RegressArgs {
    std::vector<std::string> stability_tables;
    std::string wals;
    double lambda = 1.0;
    int bootstrap = 1000;
    std::uint64_t seed = 0;
    double min_coverage = 0.25;
    bool morphology = false;
    double z = 2.0;
    bool column_bootstrap = false;
    std::string model_weights = "single";
    std::string out_prefix;
};

void run_regress(const RegressArgs& args) {
    const auto averages = read_language_averages(args.stability_tables);
    if (averages.size() < 3) throw std::runtime_error("regression needs at least 3 languages");

    std::vector<std::string> languages;
    std::vector<double> y;
    for (const auto& [language, avg] : averages) {
        languages.push_back(language);
        y.push_back(avg);
    }

    const stab::WalsDatabase db = stab::load_wals_csv(args.wals);
    const std::vector<std::string> features =
        args.morphology ? stab::morphology_subset(db)
                        : stab::coverage_filter(db, languages, args.min_coverage);
    if (features.empty()) throw std::runtime_error("no feature passes the coverage filter");

    const stab::BinaryFeatureMatrix binary = stab::binarize(db, languages, features);
    const stab::Matrix x = stab::to_matrix(binary);
    const std::vector<std::string> names = stab::column_names(binary);

    stab::RidgeModel model = stab::fit_ridge(x, y, args.lambda, names);
    const double r2 = stab::r_squared(model, x, y);
    const stab::BootstrapRidgeResult boot = stab::bootstrap_fit(
        x, y, names, args.lambda, args.bootstrap, args.seed,
        args.column_bootstrap ? stab::BootstrapMode::kColumns : stab::BootstrapMode::kRows);
    if (args.model_weights == "bootstrap-mean") {
        model.weights = boot.weight_mean;
    }

    const fs::path prefix = resolve_out(args.out_prefix);
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());

    // model.json plus the (feature, value) split per column so `explain` can
    // rebuild rows for any language.
    nlohmann::json mj;
    mj["columns"] = model.columns;
    mj["weights"] = model.weights;
    mj["intercept"] = model.intercept;
    mj["lambda"] = model.lambda;
    {
        std::vector<std::string> col_features, col_values;
        for (const auto& col : binary.columns) {
            col_features.push_back(col.feature);
            col_values.push_back(col.value);
        }
        mj["column_features"] = col_features;
        mj["column_values"] = col_values;
    }
    write_text(prefix.string() + ".model.json", mj.dump(2) + "\n");

    stab::write_bootstrap_tsv(boot, args.z, prefix.string() + ".bootstrap.tsv");

    std::ostringstream sig;
    sig << "column\tweight_mean\tstderr\n";
    for (const auto& w : stab::significant_weights(boot, args.z)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f\t%.6f", w.mean, w.stderr_);
        sig << w.column << '\t' << buf << '\n';
    }
    write_text(prefix.string() + ".significant.tsv", sig.str());

    write_manifest(prefix.string() + ".manifest.json", "regress",
                   {{"stability_tables", args.stability_tables},
                    {"wals", args.wals},
                    {"lambda", args.lambda},
                    {"bootstrap", args.bootstrap},
                    {"seed", args.seed},
                    {"min_coverage", args.min_coverage},
                    {"morphology", args.morphology},
                    {"z", args.z},
                    {"bootstrap_mode", args.column_bootstrap ? "columns" : "rows"},
                    {"model_weights", args.model_weights}},
                   {prefix.string() + ".model.json", prefix.string() + ".bootstrap.tsv",
                    prefix.string() + ".significant.tsv"},
                   {{"languages", languages.size()},
                    {"columns", names.size()},
                    {"r2_single_fit", r2},
                    {"r2_mean", boot.r2_mean},
                    {"r2_stderr", boot.r2_stderr},
                    {"skipped_resamples", boot.skipped}});
    std::cout << "R^2 " << r2 << " (bootstrap mean " << boot.r2_mean << " +/- "
              << boot.r2_stderr << ", N=" << args.bootstrap << ")\n";
}

struct ExplainArgs {
    std::string model;
    std::string wals;
    std::string language;
    std::vector<std::string> stability_tables;
    double threshold = 0.3;
    std::string out;
};

void run_explain(const ExplainArgs& args) {
    std::ifstream in(args.model, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model: " + args.model);
    nlohmann::json mj;
    in >> mj;

    stab::RidgeModel model;
    model.columns = mj.at("columns").get<std::vector<std::string>>();
    model.weights = mj.at("weights").get<std::vector<double>>();
    model.intercept = mj.at("intercept").get<double>();
    model.lambda = mj.at("lambda").get<double>();

    std::vector<std::string> col_features, col_values;
    if (mj.contains("column_features")) {
        col_features = mj.at("column_features").get<std::vector<std::string>>();
        col_values = mj.at("column_values").get<std::vector<std::string>>();
    } else {
        for (const auto& name : model.columns) {  // fall back to "feature: value"
            const auto sep = name.find(": ");
            if (sep == std::string::npos) {
                throw std::runtime_error("model column '" + name + "' is not 'feature: value'");
            }
            col_features.push_back(name.substr(0, sep));
            col_values.push_back(name.substr(sep + 2));
        }
    }
    if (col_features.size() != model.weights.size()) {
        throw std::runtime_error("model column metadata does not match weights");
    }

    const stab::WalsDatabase db = stab::load_wals_csv(args.wals);
    std::vector<double> row(model.weights.size(), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
        const auto v = db.value_of(args.language, col_features[j]);
        const bool hit = v ? *v == col_values[j] : col_values[j] == "Unknown";
        row[j] = hit ? 1.0 : 0.0;
    }

    std::optional<double> ground_truth;
    if (!args.stability_tables.empty()) {
        const auto averages = read_language_averages(args.stability_tables);
        auto it = averages.find(args.language);
        if (it != averages.end()) ground_truth = it->second;
    }

    const stab::Explanation explanation =
        stab::explain(model, row, args.threshold, ground_truth);
    const fs::path out = args.out.empty() ? fs::path{} : resolve_out(args.out);
    if (out.empty()) {
        std::cout << "attribute\tweight\n";
        for (const auto& [column, weight] : explanation.contributions) {
            std::cout << column << '\t' << weight << '\n';
        }
        std::cout << "Predicted value\t" << explanation.prediction << '\n';
        if (explanation.ground_truth) {
            std::cout << "Ground truth: average stability\t" << *explanation.ground_truth
                      << '\n';
        }
    } else {
        stab::write_explain_tsv(explanation, out);
        write_manifest(out.string() + ".manifest.json", "explain",
                       {{"model", args.model},
                        {"wals", args.wals},
                        {"language", args.language},
                        {"threshold", args.threshold}},
                       {out.string()});
    }
}

struct PlotArgs {
    std::string mode = "buckets";
    std::vector<std::string> inputs;
    std::vector<std::string> labels;
    std::string title;
    std::string out;
};

void run_plot(const PlotArgs& args) {
    std::string svg;
    if (args.mode == "buckets") {
        const auto series = read_bucket_series(args.inputs, args.labels);
        svg = stab::svg::line_chart(series,
                                    args.title.empty() ? "Stability buckets" : args.title,
                                    "stability bucket upper bound (%)", "percent of words");
    } else {
        // grouped averages: TSV rows "group<TAB>value"
        std::map<std::string, std::vector<double>> groups;
        for (const auto& path : args.inputs) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open group table: " + path);
            std::string line;
            std::size_t lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                const auto tab = line.find('\t');
                if (tab == std::string::npos) {
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": expected 'group<TAB>value'");
                }
                const std::string group = line.substr(0, tab);
                if (lineno == 1 && group == "group") continue;
                groups[group].push_back(std::stod(line.substr(tab + 1)));
            }
        }
        if (groups.empty()) throw std::runtime_error("no groups to plot");
        std::vector<stab::svg::GroupStats> stats;
        for (auto& [label, values] : groups) {
            stats.push_back(stab::svg::summarize(label, std::move(values)));
        }
        svg = stab::svg::box_chart(stats, args.title.empty() ? "Grouped averages" : args.title,
                                   "average stability");
    }

    const fs::path out = resolve_out(args.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_text(out, svg);
    write_manifest(out.string() + ".manifest.json", "plot",
                   {{"mode", args.mode}, {"inputs", args.inputs}, {"title", args.title}},
                   {out.string()});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-embedding stability toolkit"};
    app.set_version_flag("--version", stab::kToolVersion);
    app.require_subcommand(1);

    DownsampleArgs downsample_args;
    auto* cmd = app.add_subcommand("downsample", "draw sentence samples from a corpus");
    cmd->add_option("corpus", downsample_args.corpus, "corpus file, one sentence per line")
        ->required();
    cmd->add_option("--k", downsample_args.k, "number of samples")->default_val(5);
    cmd->add_option("--n", downsample_args.n, "sentences per sample")->required();
    cmd->add_flag("--disjoint", downsample_args.disjoint, "pairwise-disjoint samples");
    cmd->add_option("--overlap", downsample_args.overlap,
                    "shared-core overlap fraction in [0,1]");
    cmd->add_option("--seed", downsample_args.seed, "RNG seed")->default_val(0);
    cmd->add_option("--out-dir", downsample_args.out_dir, "output directory")->default_val(".");
    cmd->add_option("--label", downsample_args.label, "output basename");
    cmd->callback([&] { run_downsample(downsample_args); });

    TrainArgs train_args;
    cmd = app.add_subcommand("train", "train skip-gram negative-sampling embeddings");
    cmd->add_option("corpus", train_args.corpus, "training corpus")->required();
    cmd->add_option("--out", train_args.out, "output .vec file")->required();
    cmd->add_option("--dim", train_args.config.dim)->default_val(300);
    cmd->add_option("--window", train_args.config.window)->default_val(5);
    cmd->add_option("--min-count", train_args.config.min_count)->default_val(5);
    cmd->add_option("--negatives", train_args.config.negatives)->default_val(5);
    cmd->add_option("--epochs", train_args.config.epochs)->default_val(5);
    cmd->add_option("--lr", train_args.config.initial_lr)->default_val(0.025);
    cmd->add_option("--subsample", train_args.config.subsample_threshold)->default_val(1e-3);
    cmd->add_option("--seed", train_args.config.seed)->default_val(1);
    cmd->add_flag("--deterministic", train_args.deterministic,
                  "single-threaded bit-identical training (the default)");
    cmd->add_flag("--parallel", train_args.parallel,
                  "hogwild updates across threads (nondeterministic)");
    cmd->add_option("--threads", train_args.config.threads, "threads in --parallel mode");
    cmd->add_flag("--average-in-out", train_args.config.average_in_out,
                  "export (input+output)/2 vectors");
    cmd->callback([&] { run_train(train_args); });

    NeighborsArgs neighbors_args;
    cmd = app.add_subcommand("neighbors", "dump exact top-k cosine neighbors");
    cmd->add_option("space", neighbors_args.space, "embedding file")->required();
    cmd->add_option("--query", neighbors_args.queries, "query word (repeatable)");
    cmd->add_flag("--all", neighbors_args.all, "all vocabulary words");
    cmd->add_flag("--glove", neighbors_args.glove, "input is GloVe text (no header)");
    cmd->add_option("--k", neighbors_args.k)->default_val(10);
    cmd->add_option("--out", neighbors_args.out, "output TSV (default stdout)");
    cmd->callback([&] { run_neighbors(neighbors_args); });

    StabilityArgs stability_args;
    cmd = app.add_subcommand("stability", "nearest-neighbor overlap across spaces");
    cmd->add_option("spaces", stability_args.spaces, "embedding files (one set)")
        ->required()
        ->expected(-1);
    cmd->add_option("--versus", stability_args.versus,
                    "second set of spaces (cross-set stability)");
    cmd->add_flag("--glove", stability_args.glove, "inputs are GloVe text (no header)");
    cmd->add_option("--k", stability_args.k)->default_val(10);
    cmd->add_option("--bucket-width", stability_args.bucket_width)->default_val(5.0);
    cmd->add_option("--out", stability_args.out_prefix, "output prefix")->required();
    cmd->callback([&] { run_stability(stability_args); });

    PipelineArgs pipeline_args;
    cmd = app.add_subcommand("pipeline", "end-to-end stability pipeline");
    cmd->add_option("--method", pipeline_args.method)
        ->check(CLI::IsMember({"multi-seed-train", "multi-downsample-ingest"}))
        ->default_val("multi-seed-train");
    cmd->add_option("--corpus", pipeline_args.config.corpus_path, "corpus (multi-seed-train)");
    cmd->add_option("--seeds", pipeline_args.config.seeds, "training seeds");
    cmd->add_option("--variant", pipeline_args.variant_specs,
                    "LABEL=CORPUS variant (repeatable); best average wins");
    cmd->add_option("--spaces", pipeline_args.config.space_paths,
                    "embedding files (multi-downsample-ingest)");
    cmd->add_option("--samples", pipeline_args.config.sample_paths,
                    "sample corpora for vocabulary filtering");
    cmd->add_flag("--glove", pipeline_args.config.glove_format);
    cmd->add_option("--k", pipeline_args.config.k)->default_val(10);
    cmd->add_option("--bucket-width", pipeline_args.config.bucket_width)->default_val(5.0);
    cmd->add_option("--min-count", pipeline_args.config.min_count)->default_val(5);
    cmd->add_option("--vocab-mode", pipeline_args.vocab_mode,
                    "per-sample: count >= min-count in every sample; "
                    "total: summed count > min-count")
        ->check(CLI::IsMember({"per-sample", "total"}))
        ->default_val("per-sample");
    cmd->add_option("--dim", pipeline_args.config.train.dim)->default_val(300);
    cmd->add_option("--window", pipeline_args.config.train.window)->default_val(5);
    cmd->add_option("--negatives", pipeline_args.config.train.negatives)->default_val(5);
    cmd->add_option("--epochs", pipeline_args.config.train.epochs)->default_val(5);
    cmd->add_option("--lr", pipeline_args.config.train.initial_lr)->default_val(0.025);
    cmd->add_option("--subsample", pipeline_args.config.train.subsample_threshold)
        ->default_val(1e-3);
    cmd->add_flag("--parallel", pipeline_args.parallel, "nondeterministic hogwild training");
    cmd->add_option("--out-prefix", pipeline_args.config.out_prefix, "report prefix");
    cmd->callback([&] { run_pipeline_cmd(pipeline_args); });

    WalsPrepArgs wals_args;
    cmd = app.add_subcommand("wals-prep", "binarize WALS features for regression");
    cmd->add_option("--wals", wals_args.wals, "canonical CSV language,feature,value")
        ->required();
    cmd->add_option("--languages", wals_args.languages, "language subset");
    cmd->add_option("--languages-from", wals_args.languages_from,
                    "language<TAB>average table supplying the language set");
    cmd->add_option("--min-coverage", wals_args.min_coverage)->default_val(0.25);
    cmd->add_flag("--morphology", wals_args.morphology,
                  "fusion/exponence/possessive classification only");
    cmd->add_option("--out", wals_args.out, "output TSV (default stdout)");
    cmd->callback([&] { run_wals_prep(wals_args); });

    RegressArgs regress_args;
    cmd = app.add_subcommand("regress", "bootstrap ridge regression of stability on WALS");
    cmd->add_option("--stability", regress_args.stability_tables,
                    "language<TAB>average table (repeatable; averaged per language)")
        ->required();
    cmd->add_option("--wals", regress_args.wals)->required();
    cmd->add_option("--lambda", regress_args.lambda)->default_val(1.0);
    cmd->add_option("--bootstrap", regress_args.bootstrap)->default_val(1000);
    cmd->add_option("--seed", regress_args.seed)->default_val(0);
    cmd->add_option("--min-coverage", regress_args.min_coverage)->default_val(0.25);
    cmd->add_flag("--morphology", regress_args.morphology);
    cmd->add_option("--z", regress_args.z, "significance threshold")->default_val(2.0);
    cmd->add_flag("--column-bootstrap", regress_args.column_bootstrap,
                  "resample feature columns instead of languages");
    cmd->add_option("--model-weights", regress_args.model_weights)
        ->check(CLI::IsMember({"single", "bootstrap-mean"}))
        ->default_val("single");
    cmd->add_option("--out-prefix", regress_args.out_prefix)->required();
    cmd->callback([&] { run_regress(regress_args); });

    ExplainArgs explain_args;
    cmd = app.add_subcommand("explain", "per-language weight contributions");
    cmd->add_option("--model", explain_args.model, "model.json from regress")->required();
    cmd->add_option("--wals", explain_args.wals)->required();
    cmd->add_option("--language", explain_args.language)->required();
    cmd->add_option("--stability", explain_args.stability_tables,
                    "language<TAB>average table for the ground-truth row");
    cmd->add_option("--threshold", explain_args.threshold)->default_val(0.3);
    cmd->add_option("--out", explain_args.out, "output TSV (default stdout)");
    cmd->callback([&] { run_explain(explain_args); });

    PlotArgs plot_args;
    cmd = app.add_subcommand("plot", "render bucket curves or grouped summaries as SVG");
    cmd->add_option("--mode", plot_args.mode)
        ->check(CLI::IsMember({"buckets", "groups"}))
        ->default_val("buckets");
    cmd->add_option("inputs", plot_args.inputs, "bucket CSVs or group TSVs")
        ->required()
        ->expected(-1);
    cmd->add_option("--labels", plot_args.labels, "series labels");
    cmd->add_option("--title", plot_args.title);
    cmd->add_option("--out", plot_args.out, "output SVG")->required();
    cmd->callback([&] { run_plot(plot_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;  // data error
    }
    return 0;
}
