#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace fleetsup::detail {

/// Marker for a forbidden cell; any assignment using one is reported infeasible.
inline constexpr double kForbidden = 1e12;

struct Assignment {
  /// col_of_row[r] = column assigned to row r.
  std::vector<std::size_t> col_of_row;
  double cost = 0.0;
  bool feasible = false;
};

/// Minimum-cost perfect matching on a square k x k row-major cost table (Hungarian method, O(k^3)).
Assignment solve_assignment(std::span<const double> cost, std::size_t k);

}  // namespace fleetsup::detail
