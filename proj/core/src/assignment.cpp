#include "assignment.hpp"

#include <algorithm>

namespace fleetsup::detail {

Assignment solve_assignment(std::span<const double> cost, std::size_t k) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with potentials; rows/cols are 1-based, 0 is a sentinel column.
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  std::vector<double> minv(k + 1);
  std::vector<char> used(k + 1);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
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
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.col_of_row.assign(k, 0);
  out.feasible = true;
  for (std::size_t j = 1; j <= k; ++j) out.col_of_row[p[j] - 1] = j - 1;
  for (std::size_t r = 0; r < k; ++r) {
    const double c = cost[r * k + out.col_of_row[r]];
    if (c >= kForbidden) out.feasible = false;
    out.cost += c;
  }
  return out;
}

}  // namespace fleetsup::detail
