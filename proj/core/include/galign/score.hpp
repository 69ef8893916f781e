#pragma once

#include <Eigen/Dense>
#include <vector>

#include "galign/model.hpp"
#include "galign/synth.hpp"

namespace galign {

// Pairwise score matrix in nats; entry (u, v) scores the hypothesis that row u
// of side A and row v of side B belong to the same user.
using ScoreMatrix = Eigen::MatrixXd;

// Log-likelihood ratio of matched vs independent for canonical-coordinate
// databases:
//   G(x, y) = sum_i [ -log(1-rho_i^2)/2
//                     - (rho_i^2 (x_i^2 + y_i^2) - 2 rho_i x_i y_i)
//                       / (2 (1 - rho_i^2)) ].
// Accumulates each entry in extended precision across dimensions. Throws
// DimensionMismatch unless both sides have exactly |rho| columns, DomainError
// if any |rho_i| >= 1.
ScoreMatrix info_density_canonical(const DatabasePair& db, const std::vector<double>& rho);

// Same statistic for one row pair per index: x_rows and y_rows must have equal
// shape; returns the per-row scores. Used when only matched (or only false)
// pairs are needed and the full matrix would be wasteful.
Eigen::VectorXd info_density_rowwise(const Eigen::MatrixXd& x_rows, const Eigen::MatrixXd& y_rows,
                                     const std::vector<double>& rho);

// Log-likelihood ratio computed directly from raw coordinates and the model,
// without canonicalizing:
//   G(x, y) = [logdet sigma_a + logdet sigma_b - logdet sigma_joint] / 2
//           + [q_a(x) + q_b(y) - q_joint(x, y)] / 2
// with q the centered quadratic form of each covariance. Agrees with the
// canonical route. Throws NotPositiveDefinite if a required covariance is not
// positive definite, DimensionMismatch on shape errors.
ScoreMatrix info_density_raw(const Eigen::MatrixXd& a_raw, const Eigen::MatrixXd& b_raw,
                             const CorrelationModel& model);

// Planted-case score: mu * w - mu^2 / 2 entrywise.
ScoreMatrix planted_score(const PlantedInstance& inst);

}  // namespace galign
