#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gaitscore {

using Assignment = std::vector<std::pair<int, int>>;

/// Minimum-cost assignment for a rectangular m x n cost matrix using the
/// shortest-augmenting-path (Kuhn-Munkres with potentials) method. Returns
/// min(m, n) (row, col) pairs sorted by row; every row and column is used at
/// most once. Throws InputError on non-finite costs.
Assignment hungarian_assign(const Eigen::MatrixXd& cost);

/// Sum of cost(row, col) over an assignment.
double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& pairs);

}  // namespace gaitscore
