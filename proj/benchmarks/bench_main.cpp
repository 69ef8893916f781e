#include <benchmark/benchmark.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "galign/estimators.hpp"
#include "galign/rng.hpp"
#include "galign/score.hpp"
#include "galign/sweep.hpp"
#include "galign/synth.hpp"

namespace {

galign::ScoreMatrix random_scores(std::size_t n_u, std::size_t n_v, std::uint64_t seed) {
    galign::Rng rng(seed);
    galign::ScoreMatrix s(n_u, n_v);
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        for (Eigen::Index j = 0; j < s.cols(); ++j) s(i, j) = rng.normal();
    }
    return s;
}

void BM_AssignmentSquare(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const galign::ScoreMatrix s = random_scores(n, n, 7);
    for (auto _ : state) {
        const galign::AlignmentEstimate est = galign::max_likelihood(s, n);
        benchmark::DoNotOptimize(est.objective);
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AssignmentSquare)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_AssignmentRectangular(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const galign::ScoreMatrix s = random_scores(n, 4 * n, 11);
    for (auto _ : state) {
        const galign::AlignmentEstimate est = galign::max_likelihood(s, n);
        benchmark::DoNotOptimize(est.objective);
    }
}
BENCHMARK(BM_AssignmentRectangular)->RangeMultiplier(2)->Range(32, 256);

void BM_InfoDensityCanonical(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto dims = static_cast<std::size_t>(state.range(1));
    const std::vector<double> rho(dims, 0.2);
    galign::Rng rng(13);
    const galign::PartialMapping mapping = galign::sample_mapping(n, n, n, rng);
    const galign::DatabasePair db = galign::sample_database_pair(rho, mapping, rng);
    for (auto _ : state) {
        const galign::ScoreMatrix g = galign::info_density_canonical(db, rho);
        benchmark::DoNotOptimize(g(0, 0));
    }
}
BENCHMARK(BM_InfoDensityCanonical)->Args({128, 16})->Args({128, 64})->Args({256, 64});

void BM_PlantedTrialEndToEnd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    galign::ExperimentConfig cfg;
    cfg.mode = galign::SweepMode::planted;
    cfg.n = n;
    cfg.balanced = true;
    cfg.x_grid = {1.5};
    cfg.trials = 1;
    cfg.master_seed = 1;
    cfg.algorithms = {galign::EstimatorKind::ml};
    cfg.threads = 1;
    for (auto _ : state) {
        const galign::SweepResult result = galign::run_sweep(cfg);
        benchmark::DoNotOptimize(result.records.front().errors);
        cfg.master_seed += 1;
    }
}
BENCHMARK(BM_PlantedTrialEndToEnd)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
