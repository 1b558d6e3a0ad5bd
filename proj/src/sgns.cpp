#include "stab/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stab/rng.hpp"

namespace stab {
namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// word2vec-style negative sampling table over unigram^0.75.
class UnigramTable {
  public:
    explicit UnigramTable(const Vocabulary& vocab, double power = 0.75,
                          std::size_t size = std::size_t{1} << 20)
        : table_(size) {
        const std::size_t v = vocab.size();
        double total = 0.0;
        for (std::size_t i = 0; i < v; ++i) {
            total += std::pow(static_cast<double>(vocab.count(i)), power);
        }
        std::size_t word = 0;
        double cum = std::pow(static_cast<double>(vocab.count(0)), power) / total;
        for (std::size_t a = 0; a < size; ++a) {
            table_[a] = static_cast<int>(word);
            if (static_cast<double>(a + 1) / static_cast<double>(size) > cum && word + 1 < v) {
                ++word;
                cum += std::pow(static_cast<double>(vocab.count(word)), power) / total;
            }
        }
    }

    int sample(std::mt19937_64& g) const {
        return table_[rng::bounded(g, table_.size())];
    }

  private:
    std::vector<int> table_;
};

struct PreparedCorpus {
    std::vector<std::vector<int>> sentences;  // in-vocab token ids, empty sentences dropped
    std::uint64_t total_tokens = 0;
};

PreparedCorpus index_corpus(const Corpus& corpus, const Vocabulary& vocab) {
    PreparedCorpus prepared;
    prepared.sentences.reserve(corpus.sentences.size());
    bool any_pair = false;
    for (const auto& sentence : corpus.sentences) {
        std::vector<int> ids;
        ids.reserve(sentence.size());
        for (const auto& token : sentence) {
            const int id = vocab.id_of(token);
            if (id >= 0) ids.push_back(id);
        }
        if (ids.empty()) continue;
        any_pair = any_pair || ids.size() >= 2;
        prepared.total_tokens += ids.size();
        prepared.sentences.push_back(std::move(ids));
    }
    if (!any_pair) {
        throw std::runtime_error("corpus too small: no (center, context) pair after "
                                 "min_count filtering");
    }
    return prepared;
}

// Shared state for one training run.
struct Trainer {
    const TrainConfig& cfg;
    const Vocabulary& vocab;
    const PreparedCorpus& corpus;
    UnigramTable table;
    Matrix input;   // updated vectors, exported
    Matrix output;  // context-side vectors, zero-initialized as in word2vec
    std::vector<double> keep_prob;
    std::uint64_t lr_budget;

    Trainer(const TrainConfig& c, const Vocabulary& v, const PreparedCorpus& pc)
        : cfg(c),
          vocab(v),
          corpus(pc),
          table(v),
          input(v.size(), static_cast<std::size_t>(c.dim)),
          output(v.size(), static_cast<std::size_t>(c.dim)),
          keep_prob(v.size(), 1.0),
          lr_budget(static_cast<std::uint64_t>(c.epochs) * pc.total_tokens + 1) {
        std::mt19937_64 init_gen(rng::derive_seed(c.seed, 0));
        for (double& x : input.data) {
            x = (rng::unit_real(init_gen) - 0.5) / static_cast<double>(c.dim);
        }
        if (c.subsample_threshold > 0.0) {
            const double t = c.subsample_threshold;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double f = static_cast<double>(v.count(i)) /
                                 static_cast<double>(pc.total_tokens);
                keep_prob[i] = std::min(1.0, std::sqrt(t / f) + t / f);
            }
        }
    }

    double lr_at(std::uint64_t processed) const {
        const double frac = static_cast<double>(processed) / static_cast<double>(lr_budget);
        return std::max(cfg.initial_lr * (1.0 - frac), cfg.initial_lr * 1e-4);
    }

    // One sentence pass: subsample, slide the dynamic window, update. Returns
    // summed example loss; bumps `examples` per (center, context) pair.
    double train_sentence(std::span<const int> sentence, double lr, std::mt19937_64& gen,
                          std::uint64_t& examples) {
        thread_local std::vector<int> kept;
        thread_local std::vector<double> grad_center;
        kept.clear();
        for (int id : sentence) {
            if (keep_prob[id] >= 1.0 || rng::unit_real(gen) <= keep_prob[id]) {
                kept.push_back(id);
            }
        }
        const int len = static_cast<int>(kept.size());
        double loss_sum = 0.0;
        grad_center.assign(static_cast<std::size_t>(cfg.dim), 0.0);
        for (int i = 0; i < len; ++i) {
            const int reduced = static_cast<int>(rng::bounded(gen, cfg.window));
            const int win = cfg.window - reduced;
            for (int j = std::max(0, i - win); j <= std::min(len - 1, i + win); ++j) {
                if (j == i) continue;
                loss_sum += train_pair(kept[i], kept[j], lr, gen, grad_center);
                ++examples;
            }
        }
        return loss_sum;
    }

    double train_pair(int center, int context, double lr, std::mt19937_64& gen,
                      std::vector<double>& grad_center) {
        const std::size_t d = static_cast<std::size_t>(cfg.dim);
        double* v = input.row(center).data();
        std::fill(grad_center.begin(), grad_center.end(), 0.0);
        double loss = 0.0;

        auto update = [&](int target, double label) {
            double* u = output.row(target).data();
            double dot = 0.0;
            for (std::size_t c = 0; c < d; ++c) dot += v[c] * u[c];
            const double sig = sigmoid(dot);
            loss += label > 0.5 ? -std::log(std::max(sig, 1e-300))
                                : -std::log(std::max(1.0 - sig, 1e-300));
            const double g = (label - sig) * lr;
            for (std::size_t c = 0; c < d; ++c) {
                grad_center[c] += g * u[c];
                u[c] += g * v[c];
            }
        };

        update(context, 1.0);
        for (int n = 0; n < cfg.negatives; ++n) {
            const int target = table.sample(gen);
            if (target == context) continue;  // as in word2vec: skip, do not redraw
            update(target, 0.0);
        }
        for (std::size_t c = 0; c < d; ++c) v[c] += grad_center[c];
        return loss;
    }
};

}  // namespace

void TrainConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (initial_lr <= 0.0) throw std::invalid_argument("initial learning rate must be > 0");
}

Vocabulary build_vocab(const Corpus& corpus, std::uint64_t min_count) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& sentence : corpus.sentences) {
        for (const auto& token : sentence) ++counts[token];
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (auto& [token, count] : counts) {
        if (count >= min_count) kept.emplace_back(token, count);
    }
    if (kept.empty()) {
        throw std::runtime_error("empty vocabulary: no token reaches min_count " +
                                 std::to_string(min_count));
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> word_counts;
    words.reserve(kept.size());
    for (auto& [token, count] : kept) {
        words.push_back(std::move(token));
        word_counts.push_back(count);
    }
    return Vocabulary::from_words(std::move(words), std::move(word_counts));
}

EmbeddingSpace train(const Corpus& corpus, const TrainConfig& config, TrainStats* stats) {
    config.validate();
    Vocabulary vocab = build_vocab(corpus, config.min_count);
    const PreparedCorpus prepared = index_corpus(corpus, vocab);
    Trainer trainer(config, vocab, prepared);

    std::vector<double> epoch_loss;
    std::uint64_t examples = 0;

    if (config.deterministic) {
        std::mt19937_64 gen(rng::derive_seed(config.seed, 1));
        std::uint64_t processed = 0;
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            double loss_sum = 0.0;
            std::uint64_t epoch_examples = 0;
            for (const auto& sentence : prepared.sentences) {
                const double lr = trainer.lr_at(processed);
                loss_sum += trainer.train_sentence(sentence, lr, gen, epoch_examples);
                processed += sentence.size();
            }
            examples += epoch_examples;
            epoch_loss.push_back(epoch_examples ? loss_sum / static_cast<double>(epoch_examples)
                                                : 0.0);
        }
    } else {
        // Hogwild: shared matrices, concurrent unsynchronized updates. Races
        // are tolerated; results are nondeterministic by contract.
        const std::ptrdiff_t n_sentences =
            static_cast<std::ptrdiff_t>(prepared.sentences.size());
        std::uint64_t processed = 0;
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            double loss_sum = 0.0;
            std::uint64_t epoch_examples = 0;
#ifdef _OPENMP
            const int requested = config.threads > 0 ? config.threads : omp_get_max_threads();
#else
            const int requested = 1;
#endif
#pragma omp parallel num_threads(requested) reduction(+ : loss_sum, epoch_examples)
            {
#ifdef _OPENMP
                const int tid = omp_get_thread_num();
#else
                const int tid = 0;
#endif
                std::mt19937_64 gen(rng::derive_seed(
                    config.seed, 2 + static_cast<std::uint64_t>(epoch) * 1024 + tid));
                const std::uint64_t tokens_per_sentence =
                    prepared.total_tokens / std::max<std::size_t>(1, prepared.sentences.size());
#pragma omp for schedule(static)
                for (std::ptrdiff_t s = 0; s < n_sentences; ++s) {
                    const double lr = trainer.lr_at(
                        processed + static_cast<std::uint64_t>(s) * tokens_per_sentence);
                    loss_sum += trainer.train_sentence(prepared.sentences[s], lr, gen,
                                                       epoch_examples);
                }
            }
            processed += prepared.total_tokens;
            examples += epoch_examples;
            epoch_loss.push_back(epoch_examples ? loss_sum / static_cast<double>(epoch_examples)
                                                : 0.0);
        }
    }

    if (stats) {
        stats->epoch_loss = std::move(epoch_loss);
        stats->examples = examples;
    }

    EmbeddingSpace space;
    space.matrix = std::move(trainer.input);
    if (config.average_in_out) {
        for (std::size_t i = 0; i < space.matrix.data.size(); ++i) {
            space.matrix.data[i] = 0.5 * (space.matrix.data[i] + trainer.output.data[i]);
        }
    }
    space.vocab = std::move(vocab);
    space.label = "sgns(" + corpus.label + ", dim=" + std::to_string(config.dim) +
                  ", window=" + std::to_string(config.window) +
                  ", seed=" + std::to_string(config.seed) +
                  (config.deterministic ? ", deterministic)" : ", parallel)");
    return space;
}

double sgns_example_loss(std::span<const double> v_center,
                         std::span<const double> u_positive,
                         std::span<const std::vector<double>> u_negatives,
                         std::span<double> g_center, std::span<double> g_positive,
                         std::span<std::vector<double>> g_negatives) {
    const std::size_t d = v_center.size();
    auto dot_with_center = [&](std::span<const double> u) {
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += v_center[c] * u[c];
        return dot;
    };

    double loss = 0.0;
    {
        const double sig = sigmoid(dot_with_center(u_positive));
        loss -= std::log(std::max(sig, 1e-300));
        const double g = sig - 1.0;  // dLoss/d(dot)
        if (!g_center.empty()) {
            for (std::size_t c = 0; c < d; ++c) g_center[c] += g * u_positive[c];
        }
        if (!g_positive.empty()) {
            for (std::size_t c = 0; c < d; ++c) g_positive[c] += g * v_center[c];
        }
    }
    for (std::size_t n = 0; n < u_negatives.size(); ++n) {
        const double sig = sigmoid(dot_with_center(u_negatives[n]));
        loss -= std::log(std::max(1.0 - sig, 1e-300));
        const double g = sig;
        if (!g_center.empty()) {
            for (std::size_t c = 0; c < d; ++c) g_center[c] += g * u_negatives[n][c];
        }
        if (!g_negatives.empty()) {
            for (std::size_t c = 0; c < d; ++c) g_negatives[n][c] += g * v_center[c];
        }
    }
    return loss;
}

}  // namespace stab
