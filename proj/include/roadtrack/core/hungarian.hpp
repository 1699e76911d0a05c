#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace roadtrack {

/// Minimum-cost assignment on a rectangular cost matrix. Returns, for each
/// row, the assigned column or -1 (only when rows > cols).
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Maximum total weight matching restricted to pairs with weight >= min_weight.
/// Unmatched rows/columns are free. Returns (row, col) pairs sorted by row.
std::vector<std::pair<int, int>> max_weight_matching(const Eigen::MatrixXd& weight,
                                                     double min_weight);

}  // namespace roadtrack
