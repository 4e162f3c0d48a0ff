#include "gaitscore/hungarian.hpp"

#include <algorithm>
#include <limits>

#include "gaitscore/error.hpp"

namespace gaitscore {

namespace {

// Rows <= cols. Returns col index for each row.
std::vector<int> solve_wide(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials; column 0 is the virtual start.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
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
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

Assignment hungarian_assign(const Eigen::MatrixXd& cost) {
  if (!cost.allFinite()) throw InputError("hungarian_assign: costs must be finite");
  Assignment pairs;
  if (cost.rows() == 0 || cost.cols() == 0) return pairs;

  if (cost.rows() <= cost.cols()) {
    const auto cols = solve_wide(cost);
    for (int r = 0; r < static_cast<int>(cols.size()); ++r) pairs.emplace_back(r, cols[r]);
  } else {
    const Eigen::MatrixXd transposed = cost.transpose();
    const auto rows = solve_wide(transposed);
    for (int c = 0; c < static_cast<int>(rows.size()); ++c) pairs.emplace_back(rows[c], c);
    std::sort(pairs.begin(), pairs.end());
  }
  return pairs;
}

double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& pairs) {
  double total = 0.0;
  for (const auto& [r, c] : pairs) total += cost(r, c);
  return total;
}

}  // namespace gaitscore
