#pragma once

#include <Eigen/Dense>
#include <vector>

namespace galign {

// Exact rectangular linear assignment (rows <= cols) minimizing total cost by
// shortest augmenting paths with dual potentials. Returns row_to_col, one
// column per row, all distinct. Deterministic: columns are scanned in
// ascending index order and equal-cost candidates prefer the earlier
// unassigned column. Throws ShapeError if rows exceed cols.
std::vector<std::size_t> solve_min_assignment(const Eigen::MatrixXd& cost);

// Same, maximizing total score.
std::vector<std::size_t> solve_max_assignment(const Eigen::MatrixXd& score);

}  // namespace galign
