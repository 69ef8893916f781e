#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "galign/estimators.hpp"
#include "galign/mismatch.hpp"

namespace galign {

// Size relation between the two databases: |V| = n + round(n^alpha), or
// |V| = n exactly when balanced.
struct Regime {
    bool balanced = true;
    double alpha = 0.0;

    static Regime make_balanced() { return {true, 0.0}; }
    static Regime unbalanced(double alpha);

    // nu = max{alpha, 1}; 1 when balanced.
    double nu() const;
};

enum class SizeClass { equal, sublinear_excess, linear_excess };

SizeClass size_class(const Regime& regime);

enum class CurveKind { exact, almost_exact, error_exponent, converse };

std::string to_string(CurveKind kind);

// Coefficient c such that signal strength zeta >= c log n (plus lower-order
// terms) gives exact recovery for the algorithm in the given regime.
double exact_threshold_coefficient(EstimatorKind algorithm, const Regime& regime);

// Coefficient for almost-exact recovery (vanishing fraction of errors),
// common to all three algorithms: max{alpha, 1}.
double almost_exact_threshold(const Regime& regime);

// One piece of a piecewise boundary in the (beta, x) plane, valid on
// beta in (beta_lo, beta_hi].
struct BoundarySegment {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    std::string label;
    std::function<double(double)> x_of_beta;
};

struct BoundaryPoint {
    double x = 0.0;
    std::string label;
};

// Piecewise boundary curve for one algorithm (or the converse).
struct BoundaryCurve {
    EstimatorKind algorithm = EstimatorKind::ml;
    CurveKind kind = CurveKind::error_exponent;
    std::vector<BoundarySegment> segments;

    // Throws DomainError when beta falls outside every segment.
    BoundaryPoint evaluate(double beta) const;
};

// Error-exponent boundary: x(beta) such that signal x log n yields about
// n^{1-beta} errors for the algorithm. Segments labeled elliptic, parabolic,
// vertical, linear.
BoundaryCurve achievability_curve(EstimatorKind algorithm, const Regime& regime);
BoundaryPoint achievability_boundary(EstimatorKind algorithm, const Regime& regime, double beta);

// Exact-recovery coefficient packaged as a constant curve over beta in (0,1].
BoundaryCurve exact_recovery_curve(EstimatorKind algorithm, const Regime& regime);

// Necessary condition: below this curve every estimator makes order n^{1-beta}
// errors. Defined for 0 < beta <= 1.
BoundaryCurve converse_curve(const Regime& regime);
BoundaryPoint converse_boundary(const Regime& regime, double beta);

// Additive nat offset of the ml vertical segment (x = 2): 2 log((sqrt5-1)/2)
// when balanced, 2 log((3+sqrt5)/2) otherwise. Exposed separately because the
// constant is not negligible at desk-scale n.
double vertical_segment_offset(const Regime& regime);

// Tail-probability bounds for the planted model with signal strength zeta:
//   atypicality        exp(-delta (zeta - tau)^2 / (4 zeta)),  tau <= zeta
//   false-positive     exp(-(zeta + tau)^2 / (4 zeta)),        tau >= -zeta
//   misalignment       exp(-delta zeta / 2)
//   cond-misalignment  exp(-delta (tau^2 + zeta^2) / (2 zeta)), tau >= 0
// Throws DomainError on range violations.
enum class TailKind { atypicality, false_positive, misalignment, cond_misalignment };

double planted_tail_bound(TailKind kind, double zeta, double tau_g, std::size_t delta);

// Same bounds with zeta = i_xy for correlated databases; the
// cond-misalignment bound carries an extra factor exp(6 rho_max^2 delta tau).
// tau ranges: |tau| <= i_xy (atypicality, false-positive),
// 0 <= tau <= i_xy (cond-misalignment).
double database_tail_bound(TailKind kind, double i_xy, double rho_max, double tau,
                           std::size_t delta);

// The exponential-moment matrix P(theta, rho) =
//   (1-rho^2) I + [[rho^2 diag(theta 1), -rho theta],
//                  [-rho theta^T,        rho^2 diag(theta^T 1)]].
// Positive definiteness of every P(theta, rho_i) delimits the convergence
// region of the generating function.
Eigen::MatrixXd gen_func_p_matrix(const Eigen::MatrixXd& theta, double rho);

// R(theta) = prod_i [ (1-rho_i^2)^{n_u+n_v-sum(theta)} / det P(theta,rho_i) ]^{1/2},
// the expectation of exp<G, theta> over matched scores conditioned on the
// identity pairing being shifted out (E[exp<G, theta - m>] for truth m when
// evaluated at theta; see chernoff_event_bound for the shifted uses). Throws
// NotPositiveDefinite when theta lies outside the convergence region.
double generating_function_r(const Eigen::MatrixXd& theta, const std::vector<double>& rho);
double log_generating_function_r(const Eigen::MatrixXd& theta, const std::vector<double>& rho);

// Evaluates R on the full matrix and as the product over its connected
// blocks (discovered from the nonzero pattern); the two must agree.
struct BlockProductCheck {
    double full = 0.0;
    double product = 0.0;
};
BlockProductCheck r_block_product_check(const Eigen::MatrixXd& theta,
                                        const std::vector<double>& rho);

// Closed-form log upper bound on R for the canonical misalignment blocks,
// theta = (nu/2)(m1 + m2):
//   cycle (n x n):        i_xy [ -(n/2) nu (2-nu) + n rho_max^2 max(nu-1, 0) ]
//   even path (n x n+1):  i_xy [ -(n/2) nu (2-nu)
//                                + nu (nu-1) max(1 - nu^2/2, 0)
//                                + 6 n rho_max^2 (nu-1) ]
// nu in [0,2] for cycles, [1,2] for even paths (DomainError outside). The
// corrections vanish at nu = 1, leaving exp(-(n/2) I_XY) for both kinds.
double elementary_block_r_bound(ElementaryKind kind, std::size_t n_block, double nu, double i_xy,
                                double rho_max);

// Chernoff bounds on score-sum events expressed through R; m1, m2 are 0/1
// mapping matrices of equal shape, theta > 0, nu > 1 where used:
//   atypicality        exp(theta tau |m1|) R((1-theta) m1)
//   misalignment       R((1-theta) m1 + theta m2)
//   cond-misalignment  exp(-tau |m1| (nu-1)) R(nu (1-theta) m1 + nu theta m2)
enum class ChernoffEvent { atypicality, misalignment, cond_misalignment };

double chernoff_event_bound(ChernoffEvent event, const std::vector<double>& rho,
                            const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2, double theta,
                            double nu, double tau);

// Upper bound on the probability that the maximum-likelihood (MAP) rule
// recovers the planted mapping exactly, with n matched users, s extra
// candidates and signal mu:
//   inf_gamma sum_k C(n,k) s!/(k+s)! Phi((1-gamma) mu)^{n-k}
//                   Phi(gamma mu)^{k(k+s)} e^{k (2 gamma - 1) mu^2 / 2}
// minimized over the supplied gamma grid plus the analytic candidates
// (1 + sqrt(1/a - 1))/2 with a = mu^2/(4 log n), and sqrt(2 log s / mu^2),
// whenever they land in [0,1]; evaluated in log space and clamped to [0,1].
double map_success_upper_bound(std::size_t n, std::size_t s, double mu,
                               const std::vector<double>& gamma_grid);
// Default 101-point grid on [0,1].
double map_success_upper_bound(std::size_t n, std::size_t s, double mu);

// Log of the covering sum at a single gamma, before clamping.
double map_success_log_term_sum(std::size_t n, std::size_t s, double mu, double gamma);

// Sampled polyline export hook: (beta, x, label) triples on a uniform beta
// grid within each segment.
struct CurveSample {
    double beta = 0.0;
    double x = 0.0;
    std::string label;
};
std::vector<CurveSample> sample_curve(const BoundaryCurve& curve, double beta_max,
                                      double step = 0.02);

}  // namespace galign
