/**
 * @file farm_sim.hpp
 * @brief Seeded grid-farm simulator for one supervisor and a robot fleet.
 *
 * The farm is a block of vertical crop rows surrounded by a free margin.
 * Inside a crop row only vertical moves are possible; the margin is freely
 * 4-connected. Each robot covers its own contiguous block of rows with a
 * boustrophedon plan and may fail on entering a cell with that cell's
 * failure probability. The supervisor rescues a failed robot by walking to
 * its cell. Everything is a pure function of (config, trial seed, the
 * sequence of supervisor targets).
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fleetsup/graph.hpp"

namespace fleetsup {

enum class FieldPattern : std::uint8_t {
  kUniformNoise = 1,
  kCornerHotspot = 2,
  kCenterRidge = 3,
  kDiagonalHotspots = 4,
  kBandedGradient = 5,
};

inline constexpr FieldPattern kAllPatterns[] = {FieldPattern::kUniformNoise, FieldPattern::kCornerHotspot,
                                                FieldPattern::kCenterRidge, FieldPattern::kDiagonalHotspots,
                                                FieldPattern::kBandedGradient};

FieldPattern pattern_from_index(int index);
int pattern_index(FieldPattern pattern);

struct FarmConfig {
  std::size_t rows = 36;
  std::size_t row_length = 40;
  std::size_t free_margin = 2;
  std::size_t n_robots = 6;
  double p_min = 0.01;
  double p_max = 0.20;
  FieldPattern field_pattern = FieldPattern::kUniformNoise;
  /// Seed of the failure field (not of the failure draws).
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

struct Cell {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
};

/**
 * Farm layout and all-pairs shortest-path lengths under the movement rules.
 *
 * Width is rows + 2 * margin, height is row_length + 2 * margin. Crop row k
 * occupies column margin + k between y = margin and y = margin + row_length - 1.
 */
class FarmGeometry {
 public:
  FarmGeometry(std::size_t rows, std::size_t row_length, std::size_t margin);

  /// Shared, immutable geometry for the given dimensions (built once, thread-safe).
  static std::shared_ptr<const FarmGeometry> shared(std::size_t rows, std::size_t row_length, std::size_t margin);

  std::size_t rows() const { return rows_; }
  std::size_t row_length() const { return row_length_; }
  std::size_t margin() const { return margin_; }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t cell_count() const { return width_ * height_; }
  std::size_t in_row_cell_count() const { return rows_ * row_length_; }

  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + static_cast<std::size_t>(c.x); }
  Cell cell(std::size_t index) const {
    return {static_cast<std::int32_t>(index % width_), static_cast<std::int32_t>(index / width_)};
  }
  bool contains(Cell c) const;
  bool in_row(Cell c) const;
  Cell control_center() const { return {0, 0}; }

  /// Cells reachable in one move, in the fixed order up, down, left, right.
  std::vector<Cell> neighbors(Cell c) const;

  /// Shortest path length in moves (breadth-first search, cached for all pairs).
  std::uint32_t distance(Cell a, Cell b) const { return dist_[index(a) * cell_count() + index(b)]; }
  /// Largest finite distance on the grid.
  std::uint32_t diameter() const { return diameter_; }

 private:
  std::size_t rows_, row_length_, margin_, width_, height_;
  std::vector<std::uint16_t> dist_;
  std::uint32_t diameter_ = 0;
};

/// Per-cell failure probability; margin cells are zero.
struct FailureField {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> probability;

  double at(Cell c) const { return probability[static_cast<std::size_t>(c.y) * width + static_cast<std::size_t>(c.x)]; }
};

/// Normalized [0,1]^2 box that contains the dominant hotspot of a pattern.
struct HotspotRegion {
  double u_lo, u_hi, v_lo, v_hi;
};
/// Hotspot box of kCornerHotspot.
HotspotRegion corner_hotspot_region();

/// Mixture-of-bivariate-normals field, min-max rescaled into [p_min, p_max] on crop cells.
FailureField generate_field(const FarmConfig& config);

/// Serpentine cover of crop rows [first_row, first_row + row_count): down, cross via the margin, up, ...
std::vector<Cell> boustrophedon_plan(const FarmGeometry& geometry, std::size_t first_row, std::size_t row_count);

enum class RobotStatus : std::uint8_t { kNavigating, kFailed, kDone };
std::string_view to_string(RobotStatus status);

struct RobotState {
  std::size_t id = 0;  ///< 1-based, equals the robot's vertex index
  Cell position;
  std::shared_ptr<const std::vector<Cell>> plan;
  /// Cells traversed so far (d_i); plan[progress] is the next cell.
  std::size_t progress = 0;
  RobotStatus status = RobotStatus::kNavigating;

  std::size_t remaining() const { return plan->size() - progress; }
};

/**
 * Full simulator state of one trial.
 *
 * Failure draws use a counter-based stream keyed by (trial seed, robot id,
 * plan index), so a robot's k-th cell fails or not independently of the
 * supervisor's behavior.
 */
class WorldState {
 public:
  WorldState(const FarmConfig& config, std::uint64_t trial_seed);

  const FarmConfig& config() const { return config_; }
  const FarmGeometry& geometry() const { return *geometry_; }
  const FailureField& field() const { return *field_; }
  std::uint64_t trial_seed() const { return trial_seed_; }

  std::size_t robot_count() const { return robots_.size(); }
  const std::vector<RobotState>& robots() const { return robots_; }
  const RobotState& robot(std::size_t id) const { return robots_.at(id - 1); }

  Cell supervisor() const { return supervisor_; }
  VertexId supervisor_target() const { return target_; }
  std::uint64_t clock() const { return clock_; }
  std::uint64_t human_working_time() const { return working_; }
  std::size_t covered_cells() const { return covered_; }
  double coverage_percent() const;

  bool all_robots_done() const;
  /// All robots done and the supervisor back at the control center.
  bool complete() const;
  /// Robot ids with status failed, ascending.
  std::vector<std::size_t> failed_robots() const;
  bool any_navigating() const;

  /// Grid cell of a vertex: 0 is the supervisor, 1..n robots, n+1 the control center.
  Cell cell_of(VertexId v) const;

  /// Expected cells traversed after rescue before the next failure (0 unless failed).
  double robot_reward(std::size_t id) const;

  /**
   * Advances one time step toward `supervisor_target`, which must be a
   * failed robot or the control center.
   */
  void step(VertexId supervisor_target);

  /// Appends `t, entity, x, y, status` lines for the current state.
  void write_trace(std::ostream& out) const;

 private:
  FarmConfig config_;
  std::shared_ptr<const FarmGeometry> geometry_;
  std::shared_ptr<const FailureField> field_;
  std::uint64_t trial_seed_;
  std::vector<RobotState> robots_;
  /// Per robot: expected_after[s] = expected cells traversed starting with plan index s.
  std::vector<std::shared_ptr<const std::vector<double>>> expected_after_;
  Cell supervisor_;
  VertexId target_;
  std::uint64_t clock_ = 0;
  std::uint64_t working_ = 0;
  std::size_t covered_ = 0;
};

/// Functional form of WorldState::step.
WorldState step(WorldState world, VertexId supervisor_target);

/// Shortest movement-constrained travel time between two vertices.
std::uint32_t travel_cost(const WorldState& world, VertexId from, VertexId to);

/// Same as WorldState::robot_reward.
double robot_reward(const WorldState& world, std::size_t robot_id);

/// Expected cells traversed before the first failure over the given cell probabilities.
double expected_progress(const std::vector<double>& probabilities);

/// Planning graph over the supervisor, the failed robots and the control center.
struct PlanningGraph {
  StaticSnapshot snapshot;
  /// Robot id of each planning vertex 1..k (index 0 unused).
  std::vector<std::size_t> robot_of_vertex;

  /// Maps a planning vertex back to the world's vertex numbering.
  VertexId to_world(VertexId planning_vertex, std::size_t n_robots) const;
};

/**
 * Builds the static snapshot from the current world: rewards from
 * robot_reward, costs mu * travel_cost plus priority_weight * max(0, d_i - d_j)
 * between failed robots. Navigating and finished robots are left out since
 * their reward is zero.
 */
PlanningGraph build_planning_graph(const WorldState& world, double mu, double priority_weight);

}  // namespace fleetsup
