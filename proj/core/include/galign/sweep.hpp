#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galign/bounds.hpp"
#include "galign/estimators.hpp"

namespace galign {

enum class SweepMode { database, planted };

std::string to_string(SweepMode mode);
SweepMode sweep_mode_from_string(const std::string& name);

// One Monte Carlo experiment: a grid of signal strengths x = zeta / log n,
// a trial count, and the estimators to run on each sampled instance.
struct ExperimentConfig {
    SweepMode mode = SweepMode::planted;
    std::size_t n = 0;
    bool balanced = true;
    double alpha = 0.0;      // ignored when balanced; n_v = n + round(n^alpha)
    std::size_t dims = 1;    // database mode only
    std::vector<double> x_grid;
    std::size_t trials = 1;
    std::uint64_t master_seed = 1;
    std::vector<EstimatorKind> algorithms;
    std::optional<double> tau;  // threshold override; default log(n_u n_v / n)
    std::size_t threads = 0;    // 0 = hardware concurrency
    bool oracle_check = false;  // cross-check ml against exhaustive search
};

// Throws ConfigError on an invalid configuration.
void validate_config(const ExperimentConfig& cfg);

std::size_t side_v_size(const ExperimentConfig& cfg);
Regime regime_of(const ExperimentConfig& cfg);

// Uniform per-dimension correlation hitting mutual information x log n:
// rho = sqrt(1 - exp(-2 x log n / dims)). Throws InfeasibleRho when the
// solution is not representable below 1.
double database_rho_for_x(std::size_t n, std::size_t dims, double x);

// Planted mean giving signal strength x log n: mu = sqrt(2 x log n).
double planted_mu_for_x(std::size_t n, double x);

// Outcome of one estimator on one sampled instance. errors counts misaligned
// users, capped at n (a threshold relation can produce more raw false
// positives than users).
struct TrialRecord {
    std::size_t x_index = 0;
    double x = 0.0;
    EstimatorKind algorithm = EstimatorKind::ml;
    std::size_t trial = 0;
    std::size_t errors = 0;
    bool exact = false;
    double wall_ms = 0.0;
};

struct SweepResult {
    ExperimentConfig config;
    std::size_t n_u = 0;
    std::size_t n_v = 0;
    // Instantiated signal parameter per grid point: rho (database mode) or
    // mu (planted mode).
    std::vector<double> signal_per_x;
    // One record per (x, trial, algorithm), ordered by those indices. All
    // algorithms within a trial score the same sampled instance, so trials
    // are paired across algorithms.
    std::vector<TrialRecord> records;
};

// Runs the full grid. Deterministic for a fixed master_seed regardless of
// thread count: every trial owns an RNG substream keyed by (master_seed,
// x-index, trial) and writes a preassigned record slot. Throws ConfigError
// and InfeasibleRho.
SweepResult run_sweep(const ExperimentConfig& cfg);

// Per (x, algorithm) summary. ci is the normal-approximation half-width on
// exact_rate; se_mean_errors is the trial-level standard error of
// mean_errors (kept out of the CSV).
struct AggregateRow {
    SweepMode mode = SweepMode::planted;
    EstimatorKind algorithm = EstimatorKind::ml;
    std::size_t n = 0;
    std::optional<double> alpha;  // empty when balanced
    double x = 0.0;
    double mean_errors = 0.0;
    double log_ratio = 0.0;  // log(mean_errors)/log n; -inf when errors are 0
    double exact_rate = 0.0;
    double ci = 0.0;
    double se_mean_errors = 0.0;
    std::optional<double> boundary_x;  // filled by emit from the overlay
};

// Deterministic fold over records in index order. Throws EmptyInput.
std::vector<AggregateRow> aggregate(const SweepResult& result);

// Writes the summary CSV (header `mode,algorithm,n,alpha,x,mean_errors,
// log_ratio,exact_rate,ci,boundary_x`) and a JSON sidecar holding the full
// config, library version, and timestamp (the timestamp is isolated there so
// the CSV is byte-reproducible). boundary_x is the theory curve of the row's
// algorithm evaluated at the empirical error exponent beta = 1 - log_ratio
// (beta = 1 for error-free rows); it is left empty when no overlay curve
// matches or the exponent is nonpositive. Throws IoError.
void emit(const SweepResult& result, const std::vector<AggregateRow>& summary,
          const std::vector<BoundaryCurve>& overlay, const std::string& path);

std::string sidecar_path(const std::string& csv_path);

// Reads back a summary CSV produced by emit. Throws IoError / ParseError.
std::vector<AggregateRow> parse_summary_csv(const std::string& path);

// Sampled boundary polylines, header `algorithm,kind,beta,x,label`.
void write_curve_csv(const std::vector<BoundaryCurve>& curves, double beta_max, double step,
                     const std::string& path);

}  // namespace galign
