#pragma once

#include <string>
#include <utility>
#include <vector>

#include "galign/score.hpp"

namespace galign {

enum class EstimatorKind { ml, max_row, threshold };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

// Result of one estimator run. pairs are sorted by (u, v).
//   ml:        exactly one v per u, injective on both sides
//   max-row:   exactly one v per u, v may repeat
//   threshold: arbitrary relation
// objective is the achieved score sum in nats.
struct AlignmentEstimate {
    EstimatorKind kind = EstimatorKind::ml;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double objective = 0.0;
};

// Exact maximizer of sum_u s(u, m(u)) over injective full maps of the rows.
// size must equal n_u and n_u <= n_v (ShapeError otherwise). Runs in
// O(n_u^2 n_v). Among tied optima the result is deterministic with smaller v
// preferred; brute_force_ml realizes the exact lexicographic minimum.
AlignmentEstimate max_likelihood(const ScoreMatrix& s, std::size_t size);

// Row-wise argmax; ties take the smallest v. The v side may repeat.
AlignmentEstimate max_row(const ScoreMatrix& s);

// All pairs with s(u, v) strictly above tau.
AlignmentEstimate threshold_test(const ScoreMatrix& s, double tau);

// Threshold making the pairwise prior odds even: log(n_u n_v / size).
// Throws DomainError unless size >= 1.
double default_threshold(std::size_t n_u, std::size_t n_v, std::size_t size);

// Exhaustive maximization over all injective full maps; the reference oracle.
// Guarded to n_u <= 8 and n_v <= 10 (TooLarge beyond). Ties resolve to the
// lexicographically smallest assignment.
AlignmentEstimate brute_force_ml(const ScoreMatrix& s, std::size_t size);

}  // namespace galign
