/**
 * @file graph.hpp
 * @brief Supervisor/robot/control-center graph model and path values.
 *
 * Vertex 0 is the supervisor, vertices 1..n are robots and vertex n+1 is the
 * control center. A path always starts at the supervisor, ends at the
 * control center and never repeats a vertex.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace fleetsup {

/// Absolute tolerance used for floating-point comparisons of path values.
inline constexpr double kTolerance = 1e-9;

struct VertexId {
  std::size_t index = 0;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::size_t i) : index(i) {}

  constexpr bool is_supervisor() const { return index == 0; }
  constexpr bool is_control_center(std::size_t n) const { return index == n + 1; }
  constexpr bool is_robot(std::size_t n) const { return index >= 1 && index <= n; }

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

constexpr VertexId supervisor_vertex() { return VertexId{0}; }
constexpr VertexId control_center_vertex(std::size_t n) { return VertexId{n + 1}; }

/// A valid, loop-free path from the supervisor to the control center.
class Path {
 public:
  /// Throws std::invalid_argument unless the sequence is valid for n robots.
  Path(std::size_t n, std::vector<VertexId> vertices);
  Path(std::size_t n, std::initializer_list<std::size_t> vertices);

  /// The path (0, n+1) that visits no robot.
  static Path direct(std::size_t n);

  std::size_t robot_count() const { return n_; }
  std::span<const VertexId> vertices() const { return vertices_; }
  VertexId operator[](std::size_t k) const { return vertices_[k]; }

  /// Number of arcs.
  std::size_t length() const { return vertices_.size() - 1; }

  /// First robot on the path, or the control center when none is visited.
  VertexId first_target() const { return vertices_[1]; }

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::size_t n_;
  std::vector<VertexId> vertices_;
};

/// A scalar function of time, evaluated exactly at arbitrary t >= 0.
using TimeFunction = std::function<double(double)>;

namespace timefn {
TimeFunction constant(double value);
/// value0 + slope * t, clamped below at zero.
TimeFunction linear(double value0, double slope);
}  // namespace timefn

/**
 * Time-varying rewards r_i(t) on robots and raw travel times c_ij(t) on arcs.
 *
 * The supervisor and control center rewards are zero by construction, so only
 * the n robot reward functions are supplied. Costs are supplied as an
 * (n+2)x(n+2) row-major table whose diagonal is ignored.
 */
class DynamicGraph {
 public:
  DynamicGraph(std::size_t n, std::vector<TimeFunction> robot_rewards,
               std::vector<TimeFunction> arc_costs, double lambda, double mu);

  std::size_t robot_count() const { return n_; }
  std::size_t vertex_count() const { return n_ + 2; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  /// r_i(t); zero for the supervisor and the control center.
  double reward(VertexId v, double t) const;
  /// Raw travel time c_ij(t).
  double travel_time(VertexId from, VertexId to, double t) const;

 private:
  std::size_t n_;
  std::vector<TimeFunction> rewards_;
  std::vector<TimeFunction> costs_;
  double lambda_;
  double mu_;
};

/**
 * Time-frozen rewards and mu-scaled, priority-modified arc costs.
 *
 * An infinite cost marks an absent arc; complete snapshots have none.
 */
class StaticSnapshot {
 public:
  StaticSnapshot(std::size_t n, std::vector<double> rewards, std::vector<double> costs);

  std::size_t robot_count() const { return n_; }
  std::size_t vertex_count() const { return n_ + 2; }

  double reward(std::size_t v) const { return rewards_[v]; }
  double cost(std::size_t from, std::size_t to) const { return costs_[from * (n_ + 2) + to]; }
  bool has_arc(std::size_t from, std::size_t to) const;

  std::span<const double> rewards() const { return rewards_; }
  /// Row-major (n+2)x(n+2) table; diagonal entries are zero and unused.
  std::span<const double> costs() const { return costs_; }

  friend bool operator==(const StaticSnapshot&, const StaticSnapshot&) = default;

 private:
  std::size_t n_;
  std::vector<double> rewards_;
  std::vector<double> costs_;
};

/// Priority weighting of robot-to-robot arcs by traversed distance.
struct PriorityParams {
  double weight = 0.0;
  /// d_i for robots 1..n, stored at index i-1.
  std::vector<double> traversed;
};

/// Arrival times t_k at each vertex of the path using raw travel times.
std::vector<double> arrival_times(const Path& path, const DynamicGraph& graph);

/// Discounted dynamic path value: sum of e^{-lambda t_k}(r(t_k)) minus mu-scaled arc costs.
double dynamic_value(const Path& path, const DynamicGraph& graph);

/// Collected rewards minus traversed arc costs.
double static_value(const Path& path, const StaticSnapshot& snapshot);

/**
 * Freezes the graph at `at_time`.
 *
 * Costs become mu * c_ij(at_time); robot-to-robot arcs additionally carry
 * weight * max(0, d_i - d_j), so leaving a further-progressed robot for a
 * less-progressed one is penalized.
 */
StaticSnapshot make_snapshot(const DynamicGraph& graph, const PriorityParams& priority,
                             double at_time);

/// Adds weight * max(0, d_i - d_j) to every robot-to-robot arc of `costs`.
void apply_priority(std::size_t n, const PriorityParams& priority, std::span<double> costs);

}  // namespace fleetsup
