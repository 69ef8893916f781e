// Acceptance gate: one pass/fail line per criterion, pinned tolerances.
// Exit status is nonzero when any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "galign/assignment.hpp"
#include "galign/bounds.hpp"
#include "galign/errors.hpp"
#include "galign/estimators.hpp"
#include "galign/mismatch.hpp"
#include "galign/model.hpp"
#include "galign/rng.hpp"
#include "galign/score.hpp"
#include "galign/sweep.hpp"
#include "galign/synth.hpp"

using namespace galign;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int index, const std::string& name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++g_failures;
    std::printf("[%s] criterion %2d: %s - %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", index,
                name.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
    }
    return m;
}

CorrelationModel random_model(Rng& rng, Eigen::Index da, Eigen::Index db) {
    const Eigen::Index d = da + db;
    const Eigen::MatrixXd l = random_matrix(rng, d, d);
    const Eigen::MatrixXd joint =
        l * l.transpose() + 0.3 * Eigen::MatrixXd::Identity(d, d);
    CorrelationModel model;
    model.sigma_a = joint.topLeftCorner(da, da);
    model.sigma_b = joint.bottomRightCorner(db, db);
    model.sigma_ab = joint.topRightCorner(da, db);
    model.mu_a = random_matrix(rng, da, 1);
    model.mu_b = random_matrix(rng, db, 1);
    return model;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------- criterion 1

Outcome criterion_oracle_equivalence() {
    Rng rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        Rng sub = rng.child(static_cast<std::uint64_t>(rep));
        const Eigen::Index n_u = 1 + static_cast<Eigen::Index>(sub.below(7));
        const Eigen::Index n_v =
            n_u + static_cast<Eigen::Index>(sub.below(static_cast<std::uint64_t>(10 - n_u)));
        const Eigen::MatrixXd s = random_matrix(sub, n_u, n_v);
        const AlignmentEstimate fast = max_likelihood(s, static_cast<std::size_t>(n_u));
        const AlignmentEstimate slow = brute_force_ml(s, static_cast<std::size_t>(n_u));
        worst = std::max(worst, std::abs(fast.objective - slow.objective));
    }
    Outcome out;
    out.pass = worst <= 1e-9;
    out.detail = "max |objective delta| " + fmt(worst) + " over 500 instances (limit 1e-9)";
    return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion_canonicalization() {
    Rng rng(202);
    const int models = 50;
    const int draws = 100000;
    double worst_cov = 0.0;
    double worst_invariance = 0.0;
    for (int rep = 0; rep < models; ++rep) {
        Rng sub = rng.child(static_cast<std::uint64_t>(rep));
        const Eigen::Index da = 1 + static_cast<Eigen::Index>(sub.below(3));
        const Eigen::Index db = 1 + static_cast<Eigen::Index>(sub.below(3));
        const CorrelationModel model = random_model(sub, da, db);
        const CanonicalForm form = canonicalize(model);
        const Eigen::Index d = da + db;
        const Eigen::Index dim =
            static_cast<Eigen::Index>(form.correlation.rho.size());

        Eigen::MatrixXd joint(d, d);
        joint.topLeftCorner(da, da) = model.sigma_a;
        joint.bottomRightCorner(db, db) = model.sigma_b;
        joint.topRightCorner(da, db) = model.sigma_ab;
        joint.bottomLeftCorner(db, da) = model.sigma_ab.transpose();
        const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(joint).matrixL();

        Eigen::MatrixXd raw = random_matrix(sub, draws, d) * chol.transpose();
        Eigen::MatrixXd raw_a = raw.leftCols(da);
        Eigen::MatrixXd raw_b = raw.rightCols(db);
        raw_a.rowwise() += model.mu_a.transpose();
        raw_b.rowwise() += model.mu_b.transpose();

        const Eigen::MatrixXd ca = form.transform.t_a.apply_rows(raw_a);
        const Eigen::MatrixXd cb = form.transform.t_b.apply_rows(raw_b);

        const Eigen::VectorXd mean_a = ca.colwise().mean();
        const Eigen::VectorXd mean_b = cb.colwise().mean();
        const Eigen::MatrixXd cov_a =
            (ca.rowwise() - mean_a.transpose()).transpose() *
            (ca.rowwise() - mean_a.transpose()) / static_cast<double>(draws);
        const Eigen::MatrixXd cov_b =
            (cb.rowwise() - mean_b.transpose()).transpose() *
            (cb.rowwise() - mean_b.transpose()) / static_cast<double>(draws);
        const Eigen::MatrixXd cross =
            (ca.rowwise() - mean_a.transpose()).transpose() *
            (cb.rowwise() - mean_b.transpose()) / static_cast<double>(draws);

        Eigen::MatrixXd want_cross = Eigen::MatrixXd::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            want_cross(i, i) = form.correlation.rho[static_cast<std::size_t>(i)];
        }
        worst_cov = std::max(
            worst_cov,
            (cov_a - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff());
        worst_cov = std::max(
            worst_cov,
            (cov_b - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff());
        worst_cov = std::max(worst_cov, (cross - want_cross).cwiseAbs().maxCoeff());

        // Affine reparameterization must not move the mutual information.
        Eigen::MatrixXd lin_a = random_matrix(sub, da, da);
        Eigen::MatrixXd lin_b = random_matrix(sub, db, db);
        lin_a += 3.0 * Eigen::MatrixXd::Identity(da, da);
        lin_b += 3.0 * Eigen::MatrixXd::Identity(db, db);
        CorrelationModel moved;
        moved.sigma_a = lin_a * model.sigma_a * lin_a.transpose();
        moved.sigma_b = lin_b * model.sigma_b * lin_b.transpose();
        moved.sigma_ab = lin_a * model.sigma_ab * lin_b.transpose();
        moved.mu_a = lin_a * model.mu_a;
        moved.mu_b = lin_b * model.mu_b;
        const double base = form.correlation.i_xy;
        const double again = canonicalize(moved).correlation.i_xy;
        worst_invariance = std::max(worst_invariance, std::abs(again - base) / base);
    }
    Outcome out;
    out.pass = worst_cov <= 0.02 && worst_invariance <= 1e-9;
    out.detail = "max covariance deviation " + fmt(worst_cov) +
                 " (limit 0.02), max relative I drift " + fmt(worst_invariance) +
                 " (limit 1e-9)";
    return out;
}

// ---------------------------------------------------------------- criterion 3

Outcome criterion_moments() {
    const std::vector<double> rho(20, 0.2);
    const ScorePairMoments want = score_moments(rho);
    const std::size_t n = 100000;

    PartialMapping matched;
    matched.n_u = n;
    matched.n_v = n;
    matched.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) matched.pairs.push_back({i, i});
    Rng rng(303);
    const DatabasePair db_true = sample_database_pair(rho, matched, rng);
    const Eigen::VectorXd g_true = info_density_rowwise(db_true.a, db_true.b, rho);

    PartialMapping unmatched;
    unmatched.n_u = n;
    unmatched.n_v = n;
    const DatabasePair db_false = sample_database_pair(rho, unmatched, rng);
    const Eigen::VectorXd g_false = info_density_rowwise(db_false.a, db_false.b, rho);

    auto stats = [](const Eigen::VectorXd& v) {
        const double mean = v.mean();
        const Eigen::ArrayXd centered = v.array() - mean;
        const double var = centered.square().sum() / static_cast<double>(v.size() - 1);
        const double m4 = centered.pow(4).sum() / static_cast<double>(v.size());
        return std::array<double, 3>{mean, var, m4};
    };
    const auto [tm, tv, tm4] = stats(g_true);
    const auto [fm, fv, fm4] = stats(g_false);
    const double nd = static_cast<double>(n);

    const double z_tm = std::abs(tm - want.true_mean) / std::sqrt(want.true_var / nd);
    const double z_fm = std::abs(fm - want.false_mean) / std::sqrt(want.false_var / nd);
    const double z_tv = std::abs(tv - want.true_var) / std::sqrt((tm4 - tv * tv) / nd);
    const double z_fv = std::abs(fv - want.false_var) / std::sqrt((fm4 - fv * fv) / nd);
    const double worst = std::max({z_tm, z_fm, z_tv, z_fv});

    Outcome out;
    out.pass = worst <= 4.0;
    out.detail = "max z-score " + fmt(worst) + " over 4 moment checks (limit 4 SE)";
    return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion_generating_function() {
    const std::vector<double> rho = {0.3};
    const std::size_t samples = 1000000;
    double worst_mc = 0.0;
    Rng rng(404);

    PartialMapping truth;
    truth.n_u = 2;
    truth.n_v = 2;
    truth.pairs = {{0, 0}, {1, 1}};
    for (double theta : {0.1, 0.3}) {
        Eigen::MatrixXd big = Eigen::MatrixXd::Constant(2, 2, theta);
        const double want = generating_function_r(big, rho);
        Rng sub = rng.child(theta == 0.1 ? 1 : 3);
        double acc = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const DatabasePair db = sample_database_pair(rho, truth, sub);
            const ScoreMatrix g = info_density_canonical(db, rho);
            const double inner =
                theta * g.sum() - g(0, 0) - g(1, 1);
            acc += std::exp(inner);
        }
        const double mc = acc / static_cast<double>(samples);
        worst_mc = std::max(worst_mc, std::abs(mc - want) / want);
    }

    double worst_block = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        Rng sub = rng.child(100 + static_cast<std::uint64_t>(rep));
        Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(5, 6);
        for (Eigen::Index i = 0; i < 2; ++i) {
            for (Eigen::Index j = 0; j < 2; ++j) theta(i, j) = 0.4 * sub.uniform01();
        }
        for (Eigen::Index i = 2; i < 4; ++i) {
            for (Eigen::Index j = 2; j < 5; ++j) theta(i, j) = 0.4 * sub.uniform01();
        }
        const BlockProductCheck check = r_block_product_check(theta, {0.2, 0.5});
        worst_block =
            std::max(worst_block, std::abs(check.full - check.product) / std::abs(check.full));
    }

    double worst_gap = -1e300;
    const std::vector<std::vector<double>> spectra = {{0.3}, {0.2, 0.4}};
    for (const std::vector<double>& spec : spectra) {
        const double i_xy = mutual_information(spec);
        const double rho_max = *std::max_element(spec.begin(), spec.end());
        for (double nu : {1.0, 1.2, 1.5}) {
            for (std::size_t n = 2; n <= 4; ++n) {
                Eigen::MatrixXd m1 = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                               static_cast<Eigen::Index>(n));
                Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                           static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < n; ++i) {
                    m2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + 1) % n)) =
                        1.0;
                }
                const double direct =
                    log_generating_function_r((nu / 2.0) * (m1 + m2), spec);
                const double bound =
                    elementary_block_r_bound(ElementaryKind::cycle, n, nu, i_xy, rho_max);
                worst_gap = std::max(worst_gap, direct - bound);
            }
            for (std::size_t n = 1; n <= 4; ++n) {
                Eigen::MatrixXd path = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                             static_cast<Eigen::Index>(n + 1));
                for (std::size_t i = 0; i < n; ++i) {
                    path(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += nu / 2.0;
                    path(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) +=
                        nu / 2.0;
                }
                const double direct_path = log_generating_function_r(path, spec);
                const double bound_path =
                    elementary_block_r_bound(ElementaryKind::even_path, n, nu, i_xy, rho_max);
                worst_gap = std::max(worst_gap, direct_path - bound_path);
            }
        }
    }

    Outcome out;
    out.pass = worst_mc <= 0.05 && worst_block <= 1e-10 && worst_gap <= 1e-9;
    out.detail = "MC relative error " + fmt(worst_mc) + " (limit 0.05), block mismatch " +
                 fmt(worst_block) + " (limit 1e-10), bound slack " + fmt(worst_gap) +
                 " (limit 0 + 1e-9)";
    return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion_concentration() {
    Rng rng(505);
    const std::size_t trials = 100000;
    double worst = -1e300;
    std::string worst_case = "none";

    auto record = [&](const std::string& name, double freq, double bound) {
        const double sigma = std::sqrt(std::max(freq * (1.0 - freq), 1e-12) /
                                       static_cast<double>(trials));
        const double margin = freq - (bound + 4.0 * sigma);
        if (margin > worst) {
            worst = margin;
            worst_case = name + " freq " + fmt(freq) + " vs bound " + fmt(bound);
        }
    };

    for (double zeta : {1.0, 2.0, 4.0}) {
        const double sd = std::sqrt(2.0 * zeta);
        for (double tau : {0.0, zeta / 2.0}) {
            for (std::size_t delta : {std::size_t{1}, std::size_t{2}}) {
                Rng sub = rng.child(static_cast<std::uint64_t>(zeta * 4),
                                    static_cast<std::uint64_t>(tau * 4), delta);
                std::size_t hit_atyp = 0;
                std::size_t hit_fp = 0;
                std::size_t hit_mis = 0;
                std::size_t hit_cond = 0;
                for (std::size_t t = 0; t < trials; ++t) {
                    double sum_x = 0.0;
                    double sum_y = 0.0;
                    for (std::size_t i = 0; i < delta; ++i) {
                        sum_x += zeta + sd * sub.normal();
                        sum_y += -zeta + sd * sub.normal();
                    }
                    const double dd = static_cast<double>(delta);
                    if (sum_x <= tau * dd) ++hit_atyp;
                    if (delta == 1 && sum_y >= tau) ++hit_fp;
                    if (sum_y >= sum_x) ++hit_mis;
                    if (sum_y >= sum_x && sum_x >= tau * dd) ++hit_cond;
                }
                const double nd = static_cast<double>(trials);
                record("atypicality z=" + fmt(zeta) + " t=" + fmt(tau) + " d=" + fmt(delta),
                       hit_atyp / nd,
                       planted_tail_bound(TailKind::atypicality, zeta, tau, delta));
                if (delta == 1) {
                    record("false-positive z=" + fmt(zeta) + " t=" + fmt(tau), hit_fp / nd,
                           planted_tail_bound(TailKind::false_positive, zeta, tau, 1));
                }
                record("misalignment z=" + fmt(zeta) + " d=" + fmt(delta), hit_mis / nd,
                       planted_tail_bound(TailKind::misalignment, zeta, tau, delta));
                record("cond-misalignment z=" + fmt(zeta) + " t=" + fmt(tau) +
                           " d=" + fmt(delta),
                       hit_cond / nd,
                       planted_tail_bound(TailKind::cond_misalignment, zeta, tau, delta));
            }
        }
    }

    Outcome out;
    out.pass = worst <= 0.0;
    out.detail = "worst margin over bounds " + fmt(worst) + " (" + worst_case +
                 "; must be <= 0 at 4 binomial sigma)";
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion_counting() {
    double worst_slack = -1e300;
    bool structural_ok = true;
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t s = 0; s <= 2; ++s) {
            const std::vector<MisalignmentTally> census = misalignment_census(n, s);
            for (std::size_t delta = 1; delta <= n; ++delta) {
                const MisalignmentTally& tally = census[delta];
                const ElementaryCountBounds bounds = elementary_count_bounds(n, s, delta);
                worst_slack =
                    std::max(worst_slack, static_cast<double>(tally.type1) - bounds.type1);
                worst_slack =
                    std::max(worst_slack, static_cast<double>(tally.type2) - bounds.type2);
                for (double c : {0.5, 1.0, 2.0}) {
                    worst_slack = std::max(worst_slack,
                                           static_cast<double>(tally.mappings) -
                                               misalignment_count_bound(n, s, delta, c));
                }
                if (delta == 1 && tally.type1 != 0) structural_ok = false;
                if (tally.type3 != 0) structural_ok = false;
            }
        }
    }
    Outcome out;
    out.pass = worst_slack <= 0.0 && structural_ok;
    out.detail = "max tally excess over bounds " + fmt(worst_slack) +
                 std::string(structural_ok ? ", no type-I at distance 1, no type-III"
                                           : ", STRUCTURAL VIOLATION");
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion_phase_behavior() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.mode = SweepMode::planted;
    cfg.n = 500;
    cfg.balanced = true;
    cfg.x_grid = {0.8, 1.5, 2.5};
    cfg.trials = 50;
    cfg.master_seed = 20260816;
    cfg.algorithms = {EstimatorKind::ml, EstimatorKind::threshold};
    cfg.threads = 0;
    const SweepResult result = run_sweep(cfg);
    const std::vector<AggregateRow> rows = aggregate(result);

    auto row_of = [&](double x, EstimatorKind alg) -> const AggregateRow& {
        for (const AggregateRow& row : rows) {
            if (row.x == x && row.algorithm == alg) return row;
        }
        throw Error("missing aggregate row");
    };

    const double frac_low = row_of(0.8, EstimatorKind::ml).mean_errors / 500.0;
    const double frac_mid = row_of(1.5, EstimatorKind::ml).mean_errors / 500.0;
    const double exact_high = row_of(2.5, EstimatorKind::ml).exact_rate;

    std::size_t threshold_worse = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        std::size_t ml_err = 0;
        std::size_t th_err = 0;
        for (const TrialRecord& rec : result.records) {
            if (rec.x_index == 2 && rec.trial == trial) {
                if (rec.algorithm == EstimatorKind::ml) ml_err = rec.errors;
                if (rec.algorithm == EstimatorKind::threshold) th_err = rec.errors;
            }
        }
        if (th_err > ml_err) ++threshold_worse;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Outcome out;
    out.pass = frac_low >= 0.10 && frac_mid <= 0.05 && exact_high >= 0.90 &&
               threshold_worse >= 45 && seconds < 900.0;
    out.detail = "x=0.8 error fraction " + fmt(frac_low) + " (>= 0.10), x=1.5 fraction " +
                 fmt(frac_mid) + " (<= 0.05), x=2.5 exact rate " + fmt(exact_high) +
                 " (>= 0.90), threshold worse in " + fmt(threshold_worse) +
                 "/50 paired trials (>= 45)";
    return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion_unbalanced_coincidence() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.mode = SweepMode::planted;
    cfg.n = 200;
    cfg.balanced = false;
    cfg.alpha = 1.5;
    cfg.x_grid = {3.0};
    cfg.trials = 30;
    cfg.master_seed = 808;
    cfg.algorithms = {EstimatorKind::ml, EstimatorKind::max_row};
    cfg.threads = 0;
    const SweepResult result = run_sweep(cfg);
    const std::vector<AggregateRow> rows = aggregate(result);

    double mean_ml = 0.0;
    double se_ml = 0.0;
    double mean_mr = 0.0;
    double se_mr = 0.0;
    for (const AggregateRow& row : rows) {
        if (row.algorithm == EstimatorKind::ml) {
            mean_ml = row.mean_errors;
            se_ml = row.se_mean_errors;
        }
        if (row.algorithm == EstimatorKind::max_row) {
            mean_mr = row.mean_errors;
            se_mr = row.se_mean_errors;
        }
    }
    const double gap = std::abs(mean_ml - mean_mr);
    const double pooled = std::sqrt(se_ml * se_ml + se_mr * se_mr);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Outcome out;
    out.pass = gap <= 2.0 * pooled && seconds < 1200.0;
    out.detail = "mean errors ml " + fmt(mean_ml) + " vs max-row " + fmt(mean_mr) + ", gap " +
                 fmt(gap) + " <= 2 x pooled SE " + fmt(2.0 * pooled);
    return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion_converse_sanity() {
    ExperimentConfig cfg;
    cfg.mode = SweepMode::planted;
    cfg.n = 200;
    cfg.balanced = true;
    cfg.x_grid = {1.2};
    cfg.trials = 50;
    cfg.master_seed = 909;
    cfg.algorithms = {EstimatorKind::ml};
    cfg.threads = 0;
    const SweepResult result = run_sweep(cfg);
    const std::vector<AggregateRow> rows = aggregate(result);
    const AggregateRow& row = rows.at(0);

    const double mu = planted_mu_for_x(200, 1.2);
    const double bound = map_success_upper_bound(200, 0, mu);

    Outcome out;
    out.pass = row.exact_rate <= bound && row.mean_errors >= 1.0;
    out.detail = "exact rate " + fmt(row.exact_rate) + " <= success bound " + fmt(bound) +
                 ", mean errors " + fmt(row.mean_errors) + " >= 1";
    return out;
}

// --------------------------------------------------------------- criterion 10

Outcome criterion_boundary_anchors() {
    const Regime balanced = Regime::make_balanced();
    struct Anchor {
        std::string name;
        double got;
        double want;
    };
    const std::vector<Anchor> anchors = {
        {"threshold balanced",
         exact_threshold_coefficient(EstimatorKind::threshold, balanced),
         5.82842712474619},
        {"max-row balanced", exact_threshold_coefficient(EstimatorKind::max_row, balanced), 4.0},
        {"ml balanced", exact_threshold_coefficient(EstimatorKind::ml, balanced), 2.0},
        {"ml alpha=0.5",
         exact_threshold_coefficient(EstimatorKind::ml, Regime::unbalanced(0.5)), 3.0},
        {"ml alpha=1.5",
         exact_threshold_coefficient(EstimatorKind::ml, Regime::unbalanced(1.5)),
         4.949489742783178},
        {"ml elliptic beta=0.25",
         achievability_boundary(EstimatorKind::ml, balanced, 0.25).x,
         1.8660254037844386},
    };
    double worst = 0.0;
    std::string worst_name = "none";
    for (const Anchor& a : anchors) {
        const double err = std::abs(a.got - a.want);
        if (err > worst) {
            worst = err;
            worst_name = a.name;
        }
    }
    Outcome out;
    out.pass = worst <= 1e-6;
    out.detail = "max anchor error " + fmt(worst) + " at " + worst_name + " (limit 1e-6)";
    return out;
}

// --------------------------------------------------------------- criterion 11

Outcome criterion_determinism() {
    ExperimentConfig cfg;
    cfg.mode = SweepMode::planted;
    cfg.n = 60;
    cfg.balanced = true;
    cfg.x_grid = {1.0, 2.0};
    cfg.trials = 8;
    cfg.master_seed = 123;
    cfg.algorithms = {EstimatorKind::ml, EstimatorKind::max_row, EstimatorKind::threshold};

    const std::vector<BoundaryCurve> overlay = {
        achievability_curve(EstimatorKind::ml, Regime::make_balanced()),
        converse_curve(Regime::make_balanced())};

    cfg.threads = 1;
    const SweepResult serial = run_sweep(cfg);
    emit(serial, aggregate(serial), overlay, "acceptance_det_serial.csv");

    cfg.threads = 0;
    const SweepResult parallel = run_sweep(cfg);
    emit(parallel, aggregate(parallel), overlay, "acceptance_det_parallel.csv");

    cfg.threads = 1;
    const SweepResult repeat = run_sweep(cfg);
    emit(repeat, aggregate(repeat), overlay, "acceptance_det_repeat.csv");

    const std::string a = slurp("acceptance_det_serial.csv");
    const std::string b = slurp("acceptance_det_parallel.csv");
    const std::string c = slurp("acceptance_det_repeat.csv");

    Outcome out;
    out.pass = !a.empty() && a == b && a == c;
    out.detail = out.pass ? "serial, parallel and repeated runs emit byte-identical CSV"
                          : "CSV outputs differ across runs";
    return out;
}

}  // namespace

int main() {
    std::printf("acceptance gate: %s\n", "gaussian database alignment simulator");
    run_criterion(1, "estimator oracle equivalence", criterion_oracle_equivalence);
    run_criterion(2, "canonicalization round trip", criterion_canonicalization);
    run_criterion(3, "score moment validation", criterion_moments);
    run_criterion(4, "generating function consistency", criterion_generating_function);
    run_criterion(5, "concentration bound domination", criterion_concentration);
    run_criterion(6, "counting lemma domination", criterion_counting);
    run_criterion(7, "balanced phase behavior", criterion_phase_behavior);
    run_criterion(8, "unbalanced ml/max-row coincidence", criterion_unbalanced_coincidence);
    run_criterion(9, "converse sanity", criterion_converse_sanity);
    run_criterion(10, "boundary anchors", criterion_boundary_anchors);
    run_criterion(11, "byte-level determinism", criterion_determinism);

    if (g_failures == 0) {
        std::printf("all 11 criteria passed\n");
        return 0;
    }
    std::printf("%d of 11 criteria FAILED\n", g_failures);
    return 1;
}
