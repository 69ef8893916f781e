#include "galign/estimators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "galign/assignment.hpp"
#include "galign/errors.hpp"

namespace galign {

namespace {

double pair_sum(const ScoreMatrix& s,
                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    long double acc = 0.0L;
    for (const auto& [u, v] : pairs) {
        acc += s(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
    }
    return static_cast<double>(acc);
}

void check_full_injective_shape(const ScoreMatrix& s, std::size_t size) {
    const auto n_u = static_cast<std::size_t>(s.rows());
    const auto n_v = static_cast<std::size_t>(s.cols());
    if (size != n_u) {
        std::ostringstream msg;
        msg << "size " << size << " must equal the row count " << n_u;
        throw ShapeError(msg.str());
    }
    if (n_u > n_v) {
        std::ostringstream msg;
        msg << "need n_u <= n_v, got " << n_u << "x" << n_v;
        throw ShapeError(msg.str());
    }
}

}  // namespace

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::ml: return "ml";
        case EstimatorKind::max_row: return "max-row";
        case EstimatorKind::threshold: return "threshold";
    }
    return "?";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
    if (name == "ml") return EstimatorKind::ml;
    if (name == "max-row") return EstimatorKind::max_row;
    if (name == "threshold") return EstimatorKind::threshold;
    throw DomainError("unknown estimator '" + name + "' (expected ml, max-row or threshold)");
}

AlignmentEstimate max_likelihood(const ScoreMatrix& s, std::size_t size) {
    check_full_injective_shape(s, size);
    auto col_of_row = solve_max_assignment(s);

    AlignmentEstimate est;
    est.kind = EstimatorKind::ml;
    est.pairs.reserve(col_of_row.size());
    for (std::size_t u = 0; u < col_of_row.size(); ++u) est.pairs.emplace_back(u, col_of_row[u]);
    est.objective = pair_sum(s, est.pairs);
    return est;
}

AlignmentEstimate max_row(const ScoreMatrix& s) {
    AlignmentEstimate est;
    est.kind = EstimatorKind::max_row;
    est.pairs.reserve(static_cast<std::size_t>(s.rows()));
    for (Eigen::Index u = 0; u < s.rows(); ++u) {
        Eigen::Index best = 0;
        for (Eigen::Index v = 1; v < s.cols(); ++v) {
            if (s(u, v) > s(u, best)) best = v;
        }
        est.pairs.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(best));
    }
    est.objective = pair_sum(s, est.pairs);
    return est;
}

AlignmentEstimate threshold_test(const ScoreMatrix& s, double tau) {
    AlignmentEstimate est;
    est.kind = EstimatorKind::threshold;
    for (Eigen::Index u = 0; u < s.rows(); ++u) {
        for (Eigen::Index v = 0; v < s.cols(); ++v) {
            if (s(u, v) > tau) {
                est.pairs.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
            }
        }
    }
    est.objective = pair_sum(s, est.pairs);
    return est;
}

double default_threshold(std::size_t n_u, std::size_t n_v, std::size_t size) {
    if (size < 1) throw DomainError("mapping size must be at least 1");
    return std::log(static_cast<double>(n_u) * static_cast<double>(n_v) /
                    static_cast<double>(size));
}

AlignmentEstimate brute_force_ml(const ScoreMatrix& s, std::size_t size) {
    const auto n_u = static_cast<std::size_t>(s.rows());
    const auto n_v = static_cast<std::size_t>(s.cols());
    if (n_u > 8 || n_v > 10) {
        std::ostringstream msg;
        msg << "brute force guarded to 8x10, got " << n_u << "x" << n_v;
        throw TooLarge(msg.str());
    }
    check_full_injective_shape(s, size);

    std::vector<std::size_t> current(n_u, 0), best(n_u, 0);
    std::vector<bool> used(n_v, false);
    long double best_value = -std::numeric_limits<long double>::infinity();
    bool found = false;

    // Depth-first over columns in ascending order: the first optimum seen is
    // the lexicographically smallest.
    auto recurse = [&](auto&& self, std::size_t u, long double acc) -> void {
        if (u == n_u) {
            if (!found || acc > best_value) {
                best_value = acc;
                best = current;
                found = true;
            }
            return;
        }
        for (std::size_t v = 0; v < n_v; ++v) {
            if (used[v]) continue;
            used[v] = true;
            current[u] = v;
            self(self, u + 1,
                 acc + s(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)));
            used[v] = false;
        }
    };
    recurse(recurse, 0, 0.0L);

    AlignmentEstimate est;
    est.kind = EstimatorKind::ml;
    if (found) {
        est.pairs.reserve(n_u);
        for (std::size_t u = 0; u < n_u; ++u) est.pairs.emplace_back(u, best[u]);
    }
    est.objective = pair_sum(s, est.pairs);
    return est;
}

}  // namespace galign
