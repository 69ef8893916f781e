#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace galign {

// Joint Gaussian model for one user: x in R^{d_a} with covariance sigma_a,
// y in R^{d_b} with covariance sigma_b, cross-covariance sigma_ab = Cov(x, y).
struct CorrelationModel {
    Eigen::VectorXd mu_a;
    Eigen::VectorXd mu_b;
    Eigen::MatrixXd sigma_a;
    Eigen::MatrixXd sigma_b;
    Eigen::MatrixXd sigma_ab;
};

// Spectrum left after reduction to canonical coordinates: identity marginals
// and cross-covariance diag(rho), rho sorted descending in [0, 1).
struct CanonicalCorrelation {
    std::vector<double> rho;
    double i_xy = 0.0;     // mutual information per user, nats
    double rho_max = 0.0;  // largest canonical correlation
};

// Affine map z -> linear*z + offset.
struct AffineMap {
    Eigen::MatrixXd linear;
    Eigen::VectorXd offset;

    Eigen::VectorXd operator()(const Eigen::VectorXd& z) const { return linear * z + offset; }

    // Apply to each row of a samples-by-dims matrix.
    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;
};

// Pair of affine maps taking raw coordinates into the shared canonical space.
struct CanonicalTransformPair {
    AffineMap t_a;
    AffineMap t_b;
};

struct CanonicalForm {
    CanonicalCorrelation correlation;
    CanonicalTransformPair transform;
};

// Reduce a model to canonical correlations and the transforms realizing them.
// Singular directions below 1e-12 of the largest are dropped. Throws
// NotPositiveDefinite if a marginal covariance is not positive definite,
// NotValidJoint if the joint covariance has a negative eigenvalue beyond
// tolerance or a correlation at or beyond 1, DimensionMismatch on shape
// inconsistencies.
CanonicalForm canonicalize(const CorrelationModel& model);

// Spectral norm of sigma_a^{-1/2} sigma_ab sigma_b^{-1/2}, computed without
// going through canonicalize. Must equal the canonical rho_max; values below
// 1 certify the weak-correlation regime the canonical form requires.
double condition1_margin(const CorrelationModel& model);

// I(X;Y) = -1/2 sum_i log(1 - rho_i^2), in nats. Throws DomainError if any
// |rho_i| >= 1.
double mutual_information(const std::vector<double>& rho);

// Mean and variance of the per-user information density under the matched and
// unmatched distributions.
struct ScorePairMoments {
    double true_mean = 0.0;
    double true_var = 0.0;
    double false_mean = 0.0;
    double false_var = 0.0;
};

ScorePairMoments score_moments(const std::vector<double>& rho);

// Load a model from the key-value text format (see README). Throws IoError if
// the file cannot be read, ParseError on malformed content.
CorrelationModel load_model(const std::string& path);
CorrelationModel parse_model(std::istream& in);

}  // namespace galign
