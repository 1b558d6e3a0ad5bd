// Compares the OpenMP kernels against the serial reference implementations.

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "stab/knn.hpp"
#include "stab/ref.hpp"
#include "stab/regression.hpp"
#include "stab/rng.hpp"
#include "stab/stability.hpp"
#include "support/fixtures.hpp"

namespace {

stab::EmbeddingSpace space_of(std::size_t v, std::size_t d, std::uint64_t seed) {
    return fixtures::random_space(v, d, seed);
}

void bm_knn_parallel(benchmark::State& state) {
    const auto space = space_of(static_cast<std::size_t>(state.range(0)), 50, 1);
    std::vector<int> queries(space.vocab.size());
    std::iota(queries.begin(), queries.end(), 0);
    for (auto _ : state) {
        auto lists = stab::batch_top_k(space, queries, 10, space.vocab);
        benchmark::DoNotOptimize(lists);
    }
}

void bm_knn_serial_reference(benchmark::State& state) {
    const auto space = space_of(static_cast<std::size_t>(state.range(0)), 50, 1);
    std::vector<int> queries(space.vocab.size());
    std::iota(queries.begin(), queries.end(), 0);
    for (auto _ : state) {
        auto lists = stab::ref::batch_top_k(space, queries, 10, space.vocab);
        benchmark::DoNotOptimize(lists);
    }
}

void bm_language_stability_parallel(benchmark::State& state) {
    std::vector<stab::EmbeddingSpace> spaces;
    for (std::uint64_t s = 0; s < 5; ++s) {
        spaces.push_back(space_of(static_cast<std::size_t>(state.range(0)), 50, 10 + s));
    }
    const auto vocab = stab::common_vocabulary(spaces);
    for (auto _ : state) {
        auto report = stab::language_stability(spaces, vocab, 10);
        benchmark::DoNotOptimize(report);
    }
}

void bm_language_stability_serial_reference(benchmark::State& state) {
    std::vector<stab::EmbeddingSpace> spaces;
    for (std::uint64_t s = 0; s < 5; ++s) {
        spaces.push_back(space_of(static_cast<std::size_t>(state.range(0)), 50, 10 + s));
    }
    const auto vocab = stab::common_vocabulary(spaces);
    for (auto _ : state) {
        auto per_word = stab::ref::per_word_stability(spaces, vocab, 10);
        benchmark::DoNotOptimize(per_word);
    }
}

void bm_bootstrap_parallel(benchmark::State& state) {
    const std::size_t n = 140, p = 12;
    stab::Matrix x(n, p);
    std::vector<double> y(n);
    std::mt19937_64 gen(stab::rng::derive_seed(5, 5));
    for (double& v : x.data) v = stab::rng::unit_real(gen) < 0.3 ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) y[i] = x.at(i, 1) - x.at(i, 4) + stab::rng::gaussian(gen);
    for (auto _ : state) {
        auto result = stab::bootstrap_fit(x, y, {}, 0.1,
                                          static_cast<int>(state.range(0)), 7);
        benchmark::DoNotOptimize(result);
    }
}

}  // namespace

BENCHMARK(bm_knn_parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_knn_serial_reference)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_language_stability_parallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_language_stability_serial_reference)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bootstrap_parallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
