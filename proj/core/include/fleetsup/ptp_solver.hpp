/**
 * @file ptp_solver.hpp
 * @brief Exact profitable-tour solvers for the time-frozen traversal problem.
 *
 * solve_bnb() is the production solver: branch-and-bound over the
 * prize-collecting assignment relaxation of the degree constraints, with
 * subtour-elimination cuts separated lazily from integral candidates.
 * solve_dp() is an independent Held-Karp style oracle used to cross-check it.
 */

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fleetsup/errors.hpp"
#include "fleetsup/graph.hpp"

namespace fleetsup {

/// Binary arc variables x_ij over an (n+2)-vertex graph.
class ArcSelection {
 public:
  ArcSelection() = default;
  explicit ArcSelection(std::size_t vertex_count)
      : m_(vertex_count), bits_(vertex_count * vertex_count, 0) {}

  std::size_t vertex_count() const { return m_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * m_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true) { bits_[i * m_ + j] = on ? 1 : 0; }
  std::size_t count() const;

  friend bool operator==(const ArcSelection&, const ArcSelection&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct SolverStats {
  std::size_t nodes_explored = 0;
  std::size_t cuts_added = 0;
  std::chrono::microseconds wall_time{0};
};

struct PtpSolution {
  Path path;
  double objective = 0.0;
  /// y_i for every vertex; the supervisor and control center are always 1.
  std::vector<std::uint8_t> node_flags;
  ArcSelection arc_flags;
  SolverStats stats;
};

enum class Fixing : std::uint8_t { kFree, kZero, kOne };

/// Branch-and-bound subproblem: variable fixings plus the parent's bound.
struct BnbNode {
  /// Fixing of y_i per vertex (supervisor/control center entries unused).
  std::vector<Fixing> visit;
  /// x_ij fixed to 0, row-major (n+2)x(n+2).
  std::vector<std::uint8_t> arc_zero;
  /// x_ij fixed to 1, stored as forced successor / predecessor (npos if none).
  std::vector<std::size_t> forced_succ;
  std::vector<std::size_t> forced_pred;
  double bound = 0.0;
  std::size_t depth = 0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static BnbNode root(std::size_t vertex_count);
};

/**
 * Admissible bound: for every robot that may still be visited, its reward
 * minus its cheapest admissible incoming arc; free robots contribute only
 * when that net gain is positive. The control center's cheapest incoming
 * arc is always paid.
 */
double net_gain_bound(const StaticSnapshot& snapshot, const BnbNode& node);

/// Largest robot count solve_bnb accepts.
inline constexpr std::size_t kMaxBnbRobots = 62;
/// Largest robot count solve_dp accepts.
inline constexpr std::size_t kMaxDpRobots = 20;

/// Globally optimal path. Throws InfeasibleError if the control center is unreachable.
PtpSolution solve_bnb(const StaticSnapshot& snapshot);

/// Held-Karp oracle over (visited subset, last robot). Throws SizingError above kMaxDpRobots.
PtpSolution solve_dp(const StaticSnapshot& snapshot);

/**
 * Cycle components of an integral, degree-feasible arc selection that do not
 * contain vertex 0. Each component is sorted; components are ordered by their
 * smallest vertex.
 */
std::vector<std::vector<std::size_t>> detect_subtours(const ArcSelection& arcs);

/// Follows selected arcs from vertex 0 to vertex n+1. Throws std::logic_error on a revisit or dead end.
Path extract_path(const ArcSelection& arcs, const StaticSnapshot& snapshot);

/// Arc and node flags describing `path`.
ArcSelection arcs_of(const Path& path);
std::vector<std::uint8_t> nodes_of(const Path& path);

/// Strict preference used to break ties: better objective, then fewer arcs, then lexicographic.
bool preferred(double value, const Path& path, double other_value, const Path& other);

}  // namespace fleetsup
