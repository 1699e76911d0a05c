#include "roadtrack/core/hungarian.hpp"

#include <algorithm>
#include <limits>

namespace roadtrack {

namespace {

// Shortest augmenting path with potentials; requires n <= m.
std::vector<int> solve_rows_le_cols(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n == 0) return {};
  if (m == 0) return std::vector<int>(n, -1);
  if (n <= m) return solve_rows_le_cols(cost);
  const std::vector<int> col_to_row = solve_rows_le_cols(cost.transpose());
  std::vector<int> row_to_col(n, -1);
  for (int j = 0; j < m; ++j) {
    if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = j;
  }
  return row_to_col;
}

std::vector<std::pair<int, int>> max_weight_matching(const Eigen::MatrixXd& weight,
                                                     double min_weight) {
  std::vector<std::pair<int, int>> out;
  if (weight.rows() == 0 || weight.cols() == 0) return out;
  // Invalid pairs cost the same as leaving both ends free, so dropping them
  // afterwards keeps the optimum.
  Eigen::MatrixXd cost(weight.rows(), weight.cols());
  for (Eigen::Index i = 0; i < weight.rows(); ++i) {
    for (Eigen::Index j = 0; j < weight.cols(); ++j) {
      cost(i, j) = weight(i, j) >= min_weight ? -weight(i, j) : 0.0;
    }
  }
  const std::vector<int> assign = solve_assignment(cost);
  for (int i = 0; i < static_cast<int>(assign.size()); ++i) {
    const int j = assign[i];
    if (j >= 0 && weight(i, j) >= min_weight) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace roadtrack
