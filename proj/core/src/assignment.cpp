#include "galign/assignment.hpp"

#include <limits>
#include <sstream>

#include "galign/errors.hpp"

namespace galign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

std::vector<std::size_t> solve_min_assignment(const Eigen::MatrixXd& cost) {
    const auto n_rows = static_cast<std::size_t>(cost.rows());
    const auto n_cols = static_cast<std::size_t>(cost.cols());
    if (n_rows > n_cols) {
        std::ostringstream msg;
        msg << "assignment needs rows <= cols, got " << n_rows << "x" << n_cols;
        throw ShapeError(msg.str());
    }
    if (n_rows == 0) return {};

    std::vector<double> u(n_rows, 0.0), v(n_cols, 0.0);
    std::vector<std::size_t> col_of_row(n_rows, kNone), row_of_col(n_cols, kNone);

    std::vector<double> path_cost(n_cols);
    std::vector<std::size_t> came_from(n_cols);
    std::vector<bool> scanned_row(n_rows), scanned_col(n_cols);
    std::vector<std::size_t> remaining(n_cols);

    for (std::size_t cur_row = 0; cur_row < n_rows; ++cur_row) {
        std::fill(path_cost.begin(), path_cost.end(), kInf);
        std::fill(came_from.begin(), came_from.end(), kNone);
        std::fill(scanned_row.begin(), scanned_row.end(), false);
        std::fill(scanned_col.begin(), scanned_col.end(), false);
        for (std::size_t j = 0; j < n_cols; ++j) remaining[j] = j;
        std::size_t num_remaining = n_cols;

        // Dijkstra over reduced costs from cur_row to the nearest free column.
        double min_val = 0.0;
        std::size_t row = cur_row;
        std::size_t sink = kNone;
        while (sink == kNone) {
            scanned_row[row] = true;
            std::size_t best_it = kNone;
            double lowest = kInf;
            for (std::size_t it = 0; it < num_remaining; ++it) {
                std::size_t j = remaining[it];
                double reduced = min_val + cost(static_cast<Eigen::Index>(row),
                                                static_cast<Eigen::Index>(j)) -
                                 u[row] - v[j];
                if (reduced < path_cost[j]) {
                    path_cost[j] = reduced;
                    came_from[j] = row;
                }
                // Ascending scan; on ties keep the earliest candidate, except
                // that a free column displaces an occupied one.
                if (path_cost[j] < lowest ||
                    (path_cost[j] == lowest && best_it != kNone && row_of_col[j] == kNone &&
                     row_of_col[remaining[best_it]] != kNone)) {
                    lowest = path_cost[j];
                    best_it = it;
                }
            }

            min_val = lowest;
            std::size_t col = remaining[best_it];
            if (row_of_col[col] == kNone) {
                sink = col;
            } else {
                row = row_of_col[col];
            }
            scanned_col[col] = true;
            // Order-preserving removal keeps the scan ascending in j.
            for (std::size_t it = best_it + 1; it < num_remaining; ++it) {
                remaining[it - 1] = remaining[it];
            }
            --num_remaining;
        }

        u[cur_row] += min_val;
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (scanned_row[i] && i != cur_row) {
                u[i] += min_val - path_cost[col_of_row[i]];
            }
        }
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (scanned_col[j]) v[j] -= min_val - path_cost[j];
        }

        // Walk the augmenting path back from the sink, flipping assignments.
        std::size_t j = sink;
        while (true) {
            std::size_t i = came_from[j];
            row_of_col[j] = i;
            std::swap(col_of_row[i], j);
            if (i == cur_row) break;
        }
    }
    return col_of_row;
}

std::vector<std::size_t> solve_max_assignment(const Eigen::MatrixXd& score) {
    return solve_min_assignment(-score);
}

}  // namespace galign
