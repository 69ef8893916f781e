#include "galign/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "galign/errors.hpp"
#include "galign/mismatch.hpp"
#include "galign/rng.hpp"
#include "galign/score.hpp"
#include "galign/synth.hpp"

#ifndef GALIGN_VERSION
#define GALIGN_VERSION "0.0.0-unknown"
#endif

namespace galign {

namespace {

constexpr const char* kSummaryHeader =
    "mode,algorithm,n,alpha,x,mean_errors,log_ratio,exact_rate,ci,boundary_x";

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& field, const std::string& context) {
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw ParseError("bad numeric field '" + field + "' in " + context);
    }
    return value;
}

std::size_t parse_size_field(const std::string& field, const std::string& context) {
    std::size_t value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw ParseError("bad count field '" + field + "' in " + context);
    }
    return value;
}

std::string iso_timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::database: return "database";
        case SweepMode::planted: return "planted";
    }
    throw DomainError("unknown sweep mode");
}

SweepMode sweep_mode_from_string(const std::string& name) {
    if (name == "database") return SweepMode::database;
    if (name == "planted") return SweepMode::planted;
    throw DomainError("unknown mode '" + name + "' (expected database or planted)");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("n must be at least 2 so that log n > 0");
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    if (cfg.x_grid.empty()) throw ConfigError("x grid must be nonempty");
    for (double x : cfg.x_grid) {
        if (!std::isfinite(x) || !(x > 0.0)) throw ConfigError("x values must be positive");
    }
    if (cfg.algorithms.empty()) throw ConfigError("at least one algorithm is required");
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.algorithms.size(); ++j) {
            if (cfg.algorithms[i] == cfg.algorithms[j]) {
                throw ConfigError("duplicate algorithm in the list");
            }
        }
    }
    if (cfg.mode == SweepMode::database && cfg.dims < 1) {
        throw ConfigError("database mode requires dims >= 1");
    }
    if (!cfg.balanced && (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0)) {
        throw ConfigError("alpha must be finite and nonnegative");
    }
    if (!cfg.balanced && std::pow(static_cast<double>(cfg.n), cfg.alpha) > 1e9) {
        throw ConfigError("alpha makes the v side larger than the supported scale");
    }
    if (cfg.tau && !std::isfinite(*cfg.tau)) throw ConfigError("tau must be finite");
    if (cfg.oracle_check) {
        if (cfg.n > 7) throw ConfigError("oracle cross-check supports n <= 7 only");
        ExperimentConfig probe = cfg;
        probe.oracle_check = false;
        if (side_v_size(probe) > 10) {
            throw ConfigError("oracle cross-check supports n_v <= 10 only");
        }
        if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), EstimatorKind::ml) ==
            cfg.algorithms.end()) {
            throw ConfigError("oracle cross-check requires the ml algorithm");
        }
    }
}

std::size_t side_v_size(const ExperimentConfig& cfg) {
    if (cfg.balanced) return cfg.n;
    const double excess = std::round(std::pow(static_cast<double>(cfg.n), cfg.alpha));
    return cfg.n + static_cast<std::size_t>(excess);
}

Regime regime_of(const ExperimentConfig& cfg) {
    return cfg.balanced ? Regime::make_balanced() : Regime::unbalanced(cfg.alpha);
}

double database_rho_for_x(std::size_t n, std::size_t dims, double x) {
    if (n < 2) throw DomainError("need n >= 2 so that log n > 0");
    if (dims < 1) throw DomainError("need at least one dimension");
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("x must be positive");
    const double per_dim = 2.0 * x * std::log(static_cast<double>(n)) / static_cast<double>(dims);
    const double rho = std::sqrt(-std::expm1(-per_dim));
    if (!(rho < 1.0)) {
        throw InfeasibleRho("target mutual information needs rho >= 1 at dims=" +
                            std::to_string(dims));
    }
    return rho;
}

double planted_mu_for_x(std::size_t n, double x) {
    if (n < 2) throw DomainError("need n >= 2 so that log n > 0");
    if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("x must be positive");
    return std::sqrt(2.0 * x * std::log(static_cast<double>(n)));
}

namespace {

void run_single_trial(const ExperimentConfig& cfg, SweepResult& result,
                      const std::vector<std::vector<double>>& rho_per_x, double tau,
                      std::size_t xi, std::size_t trial) {
    Rng root(cfg.master_seed);
    Rng sub = root.child(xi, trial);
    Rng map_rng = sub.child(0);
    Rng data_rng = sub.child(1);
    const PartialMapping truth = sample_mapping(result.n_u, result.n_v, result.n_u, map_rng);
    ScoreMatrix score;
    if (cfg.mode == SweepMode::planted) {
        const PlantedInstance inst = sample_planted(result.signal_per_x[xi], truth, data_rng);
        score = planted_score(inst);
    } else {
        const DatabasePair db = sample_database_pair(rho_per_x[xi], truth, data_rng);
        score = info_density_canonical(db, rho_per_x[xi]);
    }
    const std::size_t n_algo = cfg.algorithms.size();
    for (std::size_t ai = 0; ai < n_algo; ++ai) {
        const EstimatorKind alg = cfg.algorithms[ai];
        const auto t0 = std::chrono::steady_clock::now();
        AlignmentEstimate est;
        switch (alg) {
            case EstimatorKind::ml: est = max_likelihood(score, result.n_u); break;
            case EstimatorKind::max_row: est = max_row(score); break;
            case EstimatorKind::threshold: est = threshold_test(score, tau); break;
        }
        const MisalignmentReport report = count_errors(est, truth);
        const auto t1 = std::chrono::steady_clock::now();
        if (cfg.oracle_check && alg == EstimatorKind::ml) {
            const AlignmentEstimate ref = brute_force_ml(score, result.n_u);
            if (std::abs(ref.objective - est.objective) > 1e-9) {
                throw Error("assignment solver disagrees with exhaustive search at x=" +
                            fmt_double(cfg.x_grid[xi]) + " trial=" + std::to_string(trial));
            }
        }
        TrialRecord& rec = result.records[(xi * cfg.trials + trial) * n_algo + ai];
        rec.x_index = xi;
        rec.x = cfg.x_grid[xi];
        rec.algorithm = alg;
        rec.trial = trial;
        rec.errors = std::min(report.errors, result.n_u);
        rec.exact = report.errors == 0;
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg) {
    validate_config(cfg);
    SweepResult result;
    result.config = cfg;
    result.n_u = cfg.n;
    result.n_v = side_v_size(cfg);
    const std::size_t n_x = cfg.x_grid.size();
    result.signal_per_x.resize(n_x);
    std::vector<std::vector<double>> rho_per_x(n_x);
    for (std::size_t xi = 0; xi < n_x; ++xi) {
        if (cfg.mode == SweepMode::database) {
            const double rho = database_rho_for_x(cfg.n, cfg.dims, cfg.x_grid[xi]);
            result.signal_per_x[xi] = rho;
            rho_per_x[xi].assign(cfg.dims, rho);
        } else {
            result.signal_per_x[xi] = planted_mu_for_x(cfg.n, cfg.x_grid[xi]);
        }
    }
    const double tau = cfg.tau ? *cfg.tau : default_threshold(result.n_u, result.n_v, result.n_u);
    result.records.resize(n_x * cfg.trials * cfg.algorithms.size());

    const std::size_t jobs = n_x * cfg.trials;
    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max<std::size_t>(1, std::min(workers, jobs));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    auto work = [&]() {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::size_t job = next.fetch_add(1, std::memory_order_relaxed);
            if (job >= jobs) return;
            try {
                run_single_trial(cfg, result, rho_per_x, tau, job / cfg.trials,
                                 job % cfg.trials);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::vector<AggregateRow> aggregate(const SweepResult& result) {
    if (result.records.empty()) throw EmptyInput("no trial records to aggregate");
    const ExperimentConfig& cfg = result.config;
    const std::size_t n_algo = cfg.algorithms.size();
    const double log_n = std::log(static_cast<double>(result.n_u));
    std::vector<AggregateRow> rows;
    rows.reserve(cfg.x_grid.size() * n_algo);
    for (std::size_t xi = 0; xi < cfg.x_grid.size(); ++xi) {
        for (std::size_t ai = 0; ai < n_algo; ++ai) {
            double sum = 0.0;
            double sum_sq = 0.0;
            std::size_t exact_count = 0;
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                const TrialRecord& rec = result.records[(xi * cfg.trials + t) * n_algo + ai];
                const double e = static_cast<double>(rec.errors);
                sum += e;
                sum_sq += e * e;
                exact_count += rec.exact ? 1 : 0;
            }
            const double trials = static_cast<double>(cfg.trials);
            AggregateRow row;
            row.mode = cfg.mode;
            row.algorithm = cfg.algorithms[ai];
            row.n = result.n_u;
            if (!cfg.balanced) row.alpha = cfg.alpha;
            row.x = cfg.x_grid[xi];
            row.mean_errors = sum / trials;
            row.log_ratio = row.mean_errors > 0.0
                                ? std::log(row.mean_errors) / log_n
                                : -std::numeric_limits<double>::infinity();
            row.exact_rate = static_cast<double>(exact_count) / trials;
            row.ci = 1.96 * std::sqrt(row.exact_rate * (1.0 - row.exact_rate) / trials);
            const double var =
                cfg.trials > 1
                    ? std::max(0.0, (sum_sq - sum * sum / trials) / (trials - 1.0))
                    : 0.0;
            row.se_mean_errors = std::sqrt(var / trials);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

std::optional<double> overlay_boundary_x(const AggregateRow& row,
                                         const std::vector<BoundaryCurve>& overlay) {
    const double beta_hat = row.mean_errors == 0.0 ? 1.0 : 1.0 - row.log_ratio;
    if (!(beta_hat > 0.0)) return std::nullopt;
    for (const auto& curve : overlay) {
        if (curve.kind == CurveKind::error_exponent && curve.algorithm == row.algorithm) {
            return curve.evaluate(beta_hat).x;
        }
    }
    return row.boundary_x;
}

}  // namespace

std::string sidecar_path(const std::string& csv_path) {
    if (csv_path.size() > 4 && csv_path.ends_with(".csv")) {
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    }
    return csv_path + ".json";
}

void emit(const SweepResult& result, const std::vector<AggregateRow>& summary,
          const std::vector<BoundaryCurve>& overlay, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << kSummaryHeader << '\n';
    for (const AggregateRow& row : summary) {
        const std::optional<double> bx = overlay_boundary_x(row, overlay);
        out << to_string(row.mode) << ',' << to_string(row.algorithm) << ',' << row.n << ',';
        if (row.alpha) out << fmt_double(*row.alpha);
        out << ',' << fmt_double(row.x) << ',' << fmt_double(row.mean_errors) << ','
            << fmt_double(row.log_ratio) << ',' << fmt_double(row.exact_rate) << ','
            << fmt_double(row.ci) << ',';
        if (bx) out << fmt_double(*bx);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
    out.close();

    nlohmann::json side;
    side["version"] = GALIGN_VERSION;
    side["timestamp"] = iso_timestamp_utc();
    side["n_u"] = result.n_u;
    side["n_v"] = result.n_v;
    side[result.config.mode == SweepMode::database ? "rho_per_x" : "mu_per_x"] =
        result.signal_per_x;
    nlohmann::json jc;
    jc["mode"] = to_string(result.config.mode);
    jc["n"] = result.config.n;
    jc["balanced"] = result.config.balanced;
    if (!result.config.balanced) jc["alpha"] = result.config.alpha;
    if (result.config.mode == SweepMode::database) jc["dims"] = result.config.dims;
    jc["x_grid"] = result.config.x_grid;
    jc["trials"] = result.config.trials;
    jc["master_seed"] = result.config.master_seed;
    std::vector<std::string> algo_names;
    for (EstimatorKind alg : result.config.algorithms) algo_names.push_back(to_string(alg));
    jc["algorithms"] = algo_names;
    if (result.config.tau) jc["tau"] = *result.config.tau;
    jc["threads"] = result.config.threads;
    jc["oracle_check"] = result.config.oracle_check;
    side["config"] = std::move(jc);

    const std::string side_path = sidecar_path(path);
    std::ofstream side_out(side_path, std::ios::binary);
    if (!side_out) throw IoError("cannot open " + side_path + " for writing");
    side_out << side.dump(2) << '\n';
    if (!side_out) throw IoError("failed writing " + side_path);
}

std::vector<AggregateRow> parse_summary_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty summary file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSummaryHeader) throw ParseError("unexpected header in " + path);
    std::vector<AggregateRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::stringstream ss(line);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        const std::string context = path + ":" + std::to_string(line_no);
        if (fields.size() != 10) {
            throw ParseError("expected 10 fields in " + context);
        }
        AggregateRow row;
        try {
            row.mode = sweep_mode_from_string(fields[0]);
            row.algorithm = estimator_kind_from_string(fields[1]);
        } catch (const DomainError& e) {
            throw ParseError(std::string(e.what()) + " in " + context);
        }
        row.n = parse_size_field(fields[2], context);
        if (!fields[3].empty()) row.alpha = parse_double_field(fields[3], context);
        row.x = parse_double_field(fields[4], context);
        row.mean_errors = parse_double_field(fields[5], context);
        row.log_ratio = parse_double_field(fields[6], context);
        row.exact_rate = parse_double_field(fields[7], context);
        row.ci = parse_double_field(fields[8], context);
        if (!fields[9].empty()) row.boundary_x = parse_double_field(fields[9], context);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_curve_csv(const std::vector<BoundaryCurve>& curves, double beta_max, double step,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "algorithm,kind,beta,x,label\n";
    for (const BoundaryCurve& curve : curves) {
        const std::string alg = curve.kind == CurveKind::converse ? "any"
                                                                  : to_string(curve.algorithm);
        for (const CurveSample& s : sample_curve(curve, beta_max, step)) {
            out << alg << ',' << to_string(curve.kind) << ',' << fmt_double(s.beta) << ','
                << fmt_double(s.x) << ',' << s.label << '\n';
        }
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace galign
