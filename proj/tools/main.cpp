#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "galign/bounds.hpp"
#include "galign/errors.hpp"
#include "galign/model.hpp"
#include "galign/rng.hpp"
#include "galign/score.hpp"
#include "galign/sweep.hpp"
#include "galign/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

std::vector<double> parse_x_grid(const std::string& spec) {
    std::vector<double> grid;
    auto parse_one = [](const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw galign::ConfigError("bad x value '" + tok + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t pos = spec.find(':'); pos != std::string::npos;
             pos = spec.find(':', start)) {
            parts.push_back(spec.substr(start, pos - start));
            start = pos + 1;
        }
        parts.push_back(spec.substr(start));
        if (parts.size() != 3) throw galign::ConfigError("--x range must be start:stop:step");
        const double lo = parse_one(parts[0]);
        const double hi = parse_one(parts[1]);
        const double step = parse_one(parts[2]);
        if (!(step > 0.0)) throw galign::ConfigError("--x range step must be positive");
        if (hi < lo) throw galign::ConfigError("--x range must have stop >= start");
        for (int k = 0;; ++k) {
            const double v = lo + k * step;
            if (v > hi + step * 0.5) break;
            grid.push_back(std::min(v, hi));
        }
    } else {
        std::size_t start = 0;
        while (start <= spec.size()) {
            const std::size_t pos = spec.find(',', start);
            const std::string tok =
                spec.substr(start, pos == std::string::npos ? pos : pos - start);
            if (!tok.empty()) grid.push_back(parse_one(tok));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
    }
    if (grid.empty()) throw galign::ConfigError("--x produced an empty grid");
    return grid;
}

galign::Regime regime_from_flags(bool balanced, std::optional<double> alpha) {
    if (!alpha) return galign::Regime::make_balanced();
    if (balanced) throw galign::ConfigError("--balanced and --alpha are mutually exclusive");
    return galign::Regime::unbalanced(*alpha);
}

std::vector<galign::EstimatorKind> algorithms_from_flags(const std::vector<std::string>& names) {
    std::vector<galign::EstimatorKind> algos;
    if (names.empty()) {
        algos = {galign::EstimatorKind::ml, galign::EstimatorKind::max_row,
                 galign::EstimatorKind::threshold};
    } else {
        for (const std::string& name : names) {
            try {
                algos.push_back(galign::estimator_kind_from_string(name));
            } catch (const galign::Error&) {
                throw galign::ConfigError("unknown algorithm '" + name +
                                          "' (expected ml, max-row, or threshold)");
            }
        }
    }
    return algos;
}

std::string curves_path_for(const std::string& out) {
    if (out.size() > 4 && out.ends_with(".csv")) {
        return out.substr(0, out.size() - 4) + "-curves.csv";
    }
    return out + "-curves.csv";
}

int run_sweep_command(const galign::ExperimentConfig& cfg, bool overlay,
                      const std::string& out) {
    if (cfg.n > 3000) {
        std::cerr << "warning: n=" << cfg.n
                  << " is above the supported desk scale; assignment cost grows as n^3\n";
    }
    const galign::SweepResult result = galign::run_sweep(cfg);
    const std::vector<galign::AggregateRow> summary = galign::aggregate(result);
    std::vector<galign::BoundaryCurve> curves;
    if (overlay) {
        const galign::Regime regime = galign::regime_of(cfg);
        for (galign::EstimatorKind alg : cfg.algorithms) {
            curves.push_back(galign::achievability_curve(alg, regime));
        }
        curves.push_back(galign::converse_curve(regime));
    }
    galign::emit(result, summary, curves, out);

    std::cout << "mode=" << galign::to_string(cfg.mode) << " n_u=" << result.n_u
              << " n_v=" << result.n_v << " trials=" << cfg.trials
              << " seed=" << cfg.master_seed << '\n';
    for (std::size_t xi = 0; xi < cfg.x_grid.size(); ++xi) {
        std::cout << "x=" << cfg.x_grid[xi];
        if (cfg.mode == galign::SweepMode::database) {
            std::cout << " rho=" << result.signal_per_x[xi]
                      << " (condition-1 margin, rho_max)";
        } else {
            std::cout << " mu=" << result.signal_per_x[xi];
        }
        std::cout << '\n';
        for (const galign::AggregateRow& row : summary) {
            if (row.x != cfg.x_grid[xi]) continue;
            std::cout << "  " << galign::to_string(row.algorithm)
                      << ": mean_errors=" << row.mean_errors
                      << " exact_rate=" << row.exact_rate << " +-" << row.ci << '\n';
        }
    }
    std::cout << "wrote " << out << " and " << galign::sidecar_path(out) << '\n';
    if (overlay) {
        const std::string cpath = curves_path_for(out);
        galign::write_curve_csv(curves, 2.0, 0.02, cpath);
        std::cout << "wrote " << cpath << '\n';
    }
    return kExitOk;
}

int run_boundary_command(const galign::Regime& regime,
                         const std::vector<galign::EstimatorKind>& algos,
                         const std::string& kind, double beta_max, double step,
                         const std::string& out) {
    std::vector<galign::BoundaryCurve> curves;
    if (kind == "error-exponent" || kind == "all") {
        for (galign::EstimatorKind alg : algos) {
            curves.push_back(galign::achievability_curve(alg, regime));
        }
    }
    if (kind == "exact" || kind == "all") {
        for (galign::EstimatorKind alg : algos) {
            curves.push_back(galign::exact_recovery_curve(alg, regime));
        }
    }
    if (kind == "converse" || kind == "all") {
        curves.push_back(galign::converse_curve(regime));
    }
    if (curves.empty()) throw galign::ConfigError("unknown --kind '" + kind + "'");
    galign::write_curve_csv(curves, beta_max, step, out);
    std::cout << "regime: " << (regime.balanced ? "balanced" : "alpha=")
              << (regime.balanced ? "" : std::to_string(regime.alpha)) << '\n';
    for (galign::EstimatorKind alg : algos) {
        std::cout << galign::to_string(alg)
                  << ": exact=" << galign::exact_threshold_coefficient(alg, regime)
                  << " almost_exact=" << galign::almost_exact_threshold(regime);
        if (alg == galign::EstimatorKind::ml) {
            std::cout << " vertical_offset=" << galign::vertical_segment_offset(regime);
        }
        std::cout << '\n';
    }
    std::cout << "wrote " << out << '\n';
    return kExitOk;
}

int run_gen_command(const std::string& mode, std::size_t n, bool balanced,
                    std::optional<double> alpha, std::size_t dims, double x,
                    std::uint64_t seed, const std::string& out) {
    const galign::Regime regime = regime_from_flags(balanced, alpha);
    galign::ExperimentConfig shape;
    shape.n = n;
    shape.balanced = regime.balanced;
    shape.alpha = regime.alpha;
    const std::size_t n_v = galign::side_v_size(shape);
    galign::Rng rng(seed);
    const galign::PartialMapping mapping = galign::sample_mapping(n, n_v, n, rng);
    if (mode == "planted") {
        const double mu = galign::planted_mu_for_x(n, x);
        const galign::PlantedInstance inst = galign::sample_planted(mu, mapping, rng);
        galign::save_planted(out, inst);
        std::cout << "wrote " << out << " (planted, n_u=" << n << ", n_v=" << n_v
                  << ", mu=" << mu << ")\n";
    } else {
        const double rho = galign::database_rho_for_x(n, dims, x);
        const std::vector<double> spectrum(dims, rho);
        const galign::DatabasePair db = galign::sample_database_pair(spectrum, mapping, rng);
        galign::save_database_pair(out, db);
        const std::string map_path = out + ".mapping";
        std::ofstream map_out(map_path, std::ios::binary);
        if (!map_out) throw galign::IoError("cannot open " + map_path + " for writing");
        galign::write_mapping(map_out, mapping);
        std::cout << "wrote " << out << " and " << map_path << " (database, n_u=" << n
                  << ", n_v=" << n_v << ", dims=" << dims << ", rho=" << rho << ")\n";
    }
    return kExitOk;
}

int run_model_command(const std::string& path) {
    const galign::CorrelationModel model = galign::load_model(path);
    const galign::CanonicalForm form = galign::canonicalize(model);
    const galign::CanonicalCorrelation& corr = form.correlation;
    std::cout << "dims: a=" << model.sigma_a.rows() << " b=" << model.sigma_b.rows()
              << " canonical=" << corr.rho.size() << '\n';
    std::cout << "rho:";
    for (double r : corr.rho) std::cout << ' ' << r;
    std::cout << '\n';
    std::cout << "i_xy=" << corr.i_xy << " nats per user\n";
    std::cout << "rho_max=" << corr.rho_max
              << " condition1_margin=" << galign::condition1_margin(model) << '\n';
    const galign::ScorePairMoments m = galign::score_moments(corr.rho);
    std::cout << "score moments: true=(" << m.true_mean << ", " << m.true_var << ") false=("
              << m.false_mean << ", " << m.false_var << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian database alignment and planted matching simulator"};
    app.require_subcommand(0, 1);

    std::string mode = "planted";
    std::size_t n = 0;
    double alpha_value = 0.0;
    bool balanced = false;
    std::size_t dims = 1;
    std::string x_spec;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    std::vector<std::string> algo_names;
    double tau_value = 0.0;
    std::string out = "sweep.csv";
    bool overlay = false;
    bool oracle = false;
    std::size_t threads = 0;

    app.add_option("--mode", mode, "Instance family: planted or database")
        ->check(CLI::IsMember({"planted", "database"}));
    auto* n_opt = app.add_option("--n", n, "Matched users on side A");
    auto* alpha_opt =
        app.add_option("--alpha", alpha_value, "Excess exponent: n_v = n + round(n^alpha)");
    auto* balanced_opt = app.add_flag("--balanced", balanced, "Equal sides (n_v = n)");
    alpha_opt->excludes(balanced_opt);
    auto* dims_opt = app.add_option("--dims", dims, "Feature dimensions (database mode)");
    auto* x_opt = app.add_option("--x", x_spec,
                                 "Signal grid: comma list (0.5,1,2) or range start:stop:step");
    app.add_option("--trials", trials, "Monte Carlo trials per grid point");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--algo", algo_names,
                   "Estimator to run (repeatable): ml, max-row, threshold; default all three");
    auto* tau_opt = app.add_option("--tau", tau_value,
                                   "Threshold override (default log(n_u n_v / n))");
    app.add_option("--out", out, "Summary CSV path")->capture_default_str();
    app.add_flag("--overlay", overlay, "Fill boundary_x and export theory curves");
    app.add_flag("--oracle", oracle, "Cross-check ml against exhaustive search (n <= 7)");
    app.add_option("--threads", threads, "Worker threads (0 = hardware)");

    auto* boundary_cmd = app.add_subcommand("boundary", "Export theory boundary curves");
    std::string b_kind = "all";
    double b_beta_max = 2.0;
    double b_step = 0.02;
    std::string b_out = "boundary.csv";
    bool b_balanced = false;
    double b_alpha_value = 0.0;
    std::vector<std::string> b_algo_names;
    auto* b_alpha_opt = boundary_cmd->add_option("--alpha", b_alpha_value, "Excess exponent");
    auto* b_balanced_opt = boundary_cmd->add_flag("--balanced", b_balanced, "Equal sides");
    b_alpha_opt->excludes(b_balanced_opt);
    boundary_cmd->add_option("--kind", b_kind, "error-exponent, exact, converse, or all")
        ->capture_default_str();
    boundary_cmd->add_option("--beta-max", b_beta_max, "Largest error exponent to sample")
        ->capture_default_str();
    boundary_cmd->add_option("--step", b_step, "Sampling step in beta")->capture_default_str();
    boundary_cmd->add_option("--algo", b_algo_names, "Estimator (repeatable); default all");
    boundary_cmd->add_option("--out", b_out, "Curve CSV path")->capture_default_str();

    auto* gen_cmd = app.add_subcommand("gen", "Sample one instance and save it");
    std::string g_mode = "planted";
    std::size_t g_n = 0;
    bool g_balanced = false;
    double g_alpha_value = 0.0;
    std::size_t g_dims = 1;
    double g_x = 0.0;
    std::uint64_t g_seed = 1;
    std::string g_out = "instance.txt";
    gen_cmd->add_option("--mode", g_mode, "planted or database")
        ->check(CLI::IsMember({"planted", "database"}));
    gen_cmd->add_option("--n", g_n, "Matched users")->required();
    auto* g_alpha_opt = gen_cmd->add_option("--alpha", g_alpha_value, "Excess exponent");
    auto* g_balanced_opt = gen_cmd->add_flag("--balanced", g_balanced, "Equal sides");
    g_alpha_opt->excludes(g_balanced_opt);
    gen_cmd->add_option("--dims", g_dims, "Feature dimensions (database mode)");
    gen_cmd->add_option("--x", g_x, "Signal strength x = zeta / log n")->required();
    gen_cmd->add_option("--seed", g_seed, "Seed");
    gen_cmd->add_option("--out", g_out, "Output path")->capture_default_str();

    auto* model_cmd = app.add_subcommand("model", "Canonicalize a model file and report");
    std::string m_in;
    model_cmd->add_option("--in", m_in, "Model file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (boundary_cmd->parsed()) {
            const galign::Regime regime = regime_from_flags(
                b_balanced, b_alpha_opt->count() > 0 ? std::optional<double>(b_alpha_value)
                                                     : std::nullopt);
            return run_boundary_command(regime, algorithms_from_flags(b_algo_names), b_kind,
                                        b_beta_max, b_step, b_out);
        }
        if (gen_cmd->parsed()) {
            return run_gen_command(g_mode, g_n, g_balanced,
                                   g_alpha_opt->count() > 0 ? std::optional<double>(g_alpha_value)
                                                            : std::nullopt,
                                   g_dims, g_x, g_seed, g_out);
        }
        if (model_cmd->parsed()) {
            return run_model_command(m_in);
        }

        if (n_opt->count() == 0) throw galign::ConfigError("--n is required for a sweep");
        if (x_opt->count() == 0) throw galign::ConfigError("--x is required for a sweep");
        galign::ExperimentConfig cfg;
        cfg.mode = galign::sweep_mode_from_string(mode);
        cfg.n = n;
        if (alpha_opt->count() > 0) {
            cfg.balanced = false;
            cfg.alpha = alpha_value;
        } else {
            cfg.balanced = true;
        }
        if (dims_opt->count() > 0 && cfg.mode == galign::SweepMode::planted) {
            throw galign::ConfigError("--dims applies to database mode only");
        }
        cfg.dims = dims;
        cfg.x_grid = parse_x_grid(x_spec);
        cfg.trials = trials;
        cfg.master_seed = seed;
        cfg.algorithms = algorithms_from_flags(algo_names);
        if (tau_opt->count() > 0) cfg.tau = tau_value;
        cfg.threads = threads;
        cfg.oracle_check = oracle;
        return run_sweep_command(cfg, overlay, out);
    } catch (const galign::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const galign::InfeasibleRho& e) {
        std::cerr << "infeasible parameters: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const galign::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
