#include "fleetsup/farm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "fleetsup/random.hpp"

namespace fleetsup {

FieldPattern pattern_from_index(int index) {
  if (index < 1 || index > 5) throw std::invalid_argument("field pattern must be in 1..5");
  return static_cast<FieldPattern>(index);
}

int pattern_index(FieldPattern pattern) { return static_cast<int>(pattern); }

void FarmConfig::validate() const {
  if (rows == 0 || row_length == 0) throw std::invalid_argument("farm needs at least one row and one cell per row");
  if (free_margin == 0) throw std::invalid_argument("farm needs a free margin of at least one cell");
  if (n_robots == 0) throw std::invalid_argument("farm needs at least one robot");
  if (rows % n_robots != 0) {
    throw std::invalid_argument("rows (" + std::to_string(rows) + ") must divide evenly among " +
                                std::to_string(n_robots) + " robots");
  }
  if (!(0.0 <= p_min && p_min <= p_max && p_max <= 1.0)) {
    throw std::invalid_argument("failure clamps must satisfy 0 <= p_min <= p_max <= 1");
  }
  pattern_from_index(pattern_index(field_pattern));
}

// ---------------------------------------------------------------------------
// Geometry

FarmGeometry::FarmGeometry(std::size_t rows, std::size_t row_length, std::size_t margin)
    : rows_(rows),
      row_length_(row_length),
      margin_(margin),
      width_(rows + 2 * margin),
      height_(row_length + 2 * margin) {
  const std::size_t cells = cell_count();
  if (cells > 0xffff) throw std::invalid_argument("farm too large for the distance table");
  constexpr std::uint16_t unreachable = 0xffff;
  dist_.assign(cells * cells, unreachable);
  std::vector<std::vector<std::size_t>> adjacency(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    for (Cell nb : neighbors(cell(i))) adjacency[i].push_back(index(nb));
  }
  std::vector<std::size_t> queue(cells);
  for (std::size_t src = 0; src < cells; ++src) {
    std::uint16_t* row = &dist_[src * cells];
    std::size_t head = 0, tail = 0;
    row[src] = 0;
    queue[tail++] = src;
    while (head < tail) {
      const std::size_t u = queue[head++];
      for (std::size_t v : adjacency[u]) {
        if (row[v] != unreachable) continue;
        row[v] = static_cast<std::uint16_t>(row[u] + 1);
        diameter_ = std::max<std::uint32_t>(diameter_, row[v]);
        queue[tail++] = v;
      }
    }
  }
}

std::shared_ptr<const FarmGeometry> FarmGeometry::shared(std::size_t rows, std::size_t row_length,
                                                         std::size_t margin) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::shared_ptr<const FarmGeometry>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{rows, row_length, margin}];
  if (!slot) slot = std::make_shared<const FarmGeometry>(rows, row_length, margin);
  return slot;
}

bool FarmGeometry::contains(Cell c) const {
  return c.x >= 0 && c.y >= 0 && static_cast<std::size_t>(c.x) < width_ && static_cast<std::size_t>(c.y) < height_;
}

bool FarmGeometry::in_row(Cell c) const {
  const auto x = static_cast<std::size_t>(c.x);
  const auto y = static_cast<std::size_t>(c.y);
  return contains(c) && x >= margin_ && x < margin_ + rows_ && y >= margin_ && y < margin_ + row_length_;
}

std::vector<Cell> FarmGeometry::neighbors(Cell c) const {
  std::vector<Cell> out;
  out.reserve(4);
  for (Cell nb : {Cell{c.x, c.y - 1}, Cell{c.x, c.y + 1}}) {
    if (contains(nb)) out.push_back(nb);
  }
  if (!in_row(c)) {
    for (Cell nb : {Cell{c.x - 1, c.y}, Cell{c.x + 1, c.y}}) {
      if (contains(nb) && !in_row(nb)) out.push_back(nb);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Failure field

namespace {

struct Bump {
  double u, v;        // mean in normalized field coordinates
  double su, sv;      // standard deviations
  double rho;         // correlation
  double weight;
};

double density(const Bump& b, double u, double v) {
  const double du = (u - b.u) / b.su;
  const double dv = (v - b.v) / b.sv;
  const double one_minus = 1.0 - b.rho * b.rho;
  const double q = (du * du - 2.0 * b.rho * du * dv + dv * dv) / one_minus;
  return b.weight * std::exp(-0.5 * q) / (2.0 * std::numbers::pi * b.su * b.sv * std::sqrt(one_minus));
}

std::vector<Bump> pattern_bumps(FieldPattern pattern, std::uint64_t seed) {
  Engine rng(hash_combine(seed, static_cast<std::uint64_t>(pattern)));
  auto jitter = [&](double x) { return x + uniform(rng, -0.05, 0.05); };
  std::vector<Bump> bumps;
  switch (pattern) {
    case FieldPattern::kUniformNoise:
      for (int k = 0; k < 30; ++k) {
        bumps.push_back({uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.02, 0.05),
                         uniform(rng, 0.02, 0.05), 0.0, uniform(rng, 0.5, 1.0)});
      }
      break;
    case FieldPattern::kCornerHotspot: {
      const HotspotRegion r = corner_hotspot_region();
      const double cu = 0.5 * (r.u_lo + r.u_hi) + 0.05, cv = 0.5 * (r.v_lo + r.v_hi) + 0.05;
      bumps.push_back({jitter(cu), jitter(cv), 0.075, 0.075, 0.0, 1.0});
      bumps.push_back({0.5, 0.5, 0.25, 0.25, 0.0, 0.3});
      break;
    }
    case FieldPattern::kCenterRidge:
      bumps.push_back({jitter(0.5), 0.5, 0.04, 0.225, 0.0, 1.0});
      bumps.push_back({jitter(0.5), jitter(0.5), 0.1, 0.1, 0.0, 0.2});
      break;
    case FieldPattern::kDiagonalHotspots:
      bumps.push_back({jitter(0.25), jitter(0.25), 0.06, 0.06, 0.0, 1.0});
      bumps.push_back({jitter(0.75), jitter(0.75), 0.06, 0.06, 0.0, 1.0});
      break;
    case FieldPattern::kBandedGradient:
      bumps.push_back({jitter(0.5), jitter(0.85), 0.35, 0.125, jitter(0.3), 1.0});
      break;
  }
  return bumps;
}

}  // namespace

HotspotRegion corner_hotspot_region() { return {0.6, 1.0, 0.6, 1.0}; }

FailureField generate_field(const FarmConfig& config) {
  config.validate();
  const std::size_t m = config.free_margin;
  FailureField field{config.rows + 2 * m, config.row_length + 2 * m, {}};
  field.probability.assign(field.width * field.height, 0.0);

  const auto bumps = pattern_bumps(config.field_pattern, config.seed);
  std::vector<double> raw(config.rows * config.row_length, 0.0);
  for (std::size_t r = 0; r < config.rows; ++r) {
    for (std::size_t k = 0; k < config.row_length; ++k) {
      const double u = (static_cast<double>(r) + 0.5) / static_cast<double>(config.rows);
      const double v = (static_cast<double>(k) + 0.5) / static_cast<double>(config.row_length);
      double sum = 0.0;
      for (const auto& b : bumps) sum += density(b, u, v);
      raw[r * config.row_length + k] = sum;
    }
  }
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  for (std::size_t r = 0; r < config.rows; ++r) {
    for (std::size_t k = 0; k < config.row_length; ++k) {
      const double unit = span > 0.0 ? (raw[r * config.row_length + k] - lo) / span : 0.0;
      const double p = std::clamp(config.p_min + unit * (config.p_max - config.p_min), config.p_min, config.p_max);
      field.probability[(m + k) * field.width + (m + r)] = p;
    }
  }
  return field;
}

// ---------------------------------------------------------------------------
// Plans and robots

std::vector<Cell> boustrophedon_plan(const FarmGeometry& g, std::size_t first_row, std::size_t row_count) {
  if (first_row + row_count > g.rows()) throw std::invalid_argument("plan region exceeds the farm");
  const auto m = static_cast<std::int32_t>(g.margin());
  const auto len = static_cast<std::int32_t>(g.row_length());
  std::vector<Cell> plan;
  plan.reserve(row_count * (g.row_length() + 2));
  for (std::size_t k = 0; k < row_count; ++k) {
    const auto x = static_cast<std::int32_t>(g.margin() + first_row + k);
    const bool downward = k % 2 == 0;
    if (k > 0) {
      // Cross from the previous row through the margin at the end it finished on.
      const std::int32_t y = downward ? m - 1 : m + len;
      plan.push_back({x - 1, y});
      plan.push_back({x, y});
    }
    for (std::int32_t i = 0; i < len; ++i) plan.push_back({x, downward ? m + i : m + len - 1 - i});
  }
  return plan;
}

std::string_view to_string(RobotStatus status) {
  switch (status) {
    case RobotStatus::kNavigating: return "navigating";
    case RobotStatus::kFailed: return "failed";
    case RobotStatus::kDone: return "done";
  }
  return "unknown";
}

double expected_progress(const std::vector<double>& probabilities) {
  double total = 0.0, survive = 1.0;
  for (double p : probabilities) {
    survive *= 1.0 - p;
    total += survive;
  }
  return total;
}

namespace {

std::shared_ptr<const FailureField> cached_field(const FarmConfig& config) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t, double, double, int, std::uint64_t>,
                  std::shared_ptr<const FailureField>>
      cache;
  const auto key = std::make_tuple(config.rows, config.row_length, config.free_margin, config.p_min, config.p_max,
                                   pattern_index(config.field_pattern), config.seed);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto field = std::make_shared<const FailureField>(generate_field(config));
  std::lock_guard lock(mutex);
  if (cache.size() > 256) cache.clear();
  return cache.emplace(key, std::move(field)).first->second;
}

}  // namespace

WorldState::WorldState(const FarmConfig& config, std::uint64_t trial_seed)
    : config_(config), trial_seed_(trial_seed) {
  config_.validate();
  geometry_ = FarmGeometry::shared(config_.rows, config_.row_length, config_.free_margin);
  field_ = cached_field(config_);
  supervisor_ = geometry_->control_center();
  target_ = control_center_vertex(config_.n_robots);

  const std::size_t block = config_.rows / config_.n_robots;
  for (std::size_t r = 0; r < config_.n_robots; ++r) {
    auto plan = std::make_shared<const std::vector<Cell>>(boustrophedon_plan(*geometry_, r * block, block));
    RobotState robot;
    robot.id = r + 1;
    robot.position = {static_cast<std::int32_t>(config_.free_margin + r * block),
                      static_cast<std::int32_t>(config_.free_margin) - 1};
    robot.plan = plan;

    std::vector<double> after(plan->size() + 1, 0.0);
    for (std::size_t s = plan->size(); s-- > 0;) after[s] = (1.0 - field_->at((*plan)[s])) * (1.0 + after[s + 1]);
    expected_after_.push_back(std::make_shared<const std::vector<double>>(std::move(after)));
    robots_.push_back(std::move(robot));
  }
}

double WorldState::coverage_percent() const {
  return 100.0 * static_cast<double>(covered_) / static_cast<double>(geometry_->in_row_cell_count());
}

bool WorldState::all_robots_done() const {
  return std::all_of(robots_.begin(), robots_.end(), [](const RobotState& r) { return r.status == RobotStatus::kDone; });
}

bool WorldState::complete() const { return all_robots_done() && supervisor_ == geometry_->control_center(); }

std::vector<std::size_t> WorldState::failed_robots() const {
  std::vector<std::size_t> ids;
  for (const auto& r : robots_) {
    if (r.status == RobotStatus::kFailed) ids.push_back(r.id);
  }
  return ids;
}

bool WorldState::any_navigating() const {
  return std::any_of(robots_.begin(), robots_.end(),
                     [](const RobotState& r) { return r.status == RobotStatus::kNavigating; });
}

Cell WorldState::cell_of(VertexId v) const {
  const std::size_t n = robots_.size();
  if (v.is_supervisor()) return supervisor_;
  if (v.is_control_center(n)) return geometry_->control_center();
  if (v.is_robot(n)) return robots_[v.index - 1].position;
  throw std::out_of_range("vertex " + std::to_string(v.index) + " does not exist");
}

double WorldState::robot_reward(std::size_t id) const {
  const RobotState& r = robot(id);
  if (r.status != RobotStatus::kFailed) return 0.0;
  return (*expected_after_[id - 1])[r.progress];
}

void WorldState::step(VertexId supervisor_target) {
  const std::size_t n = robots_.size();
  if (complete()) throw std::logic_error("step called on a completed world");
  if (!supervisor_target.is_control_center(n)) {
    if (!supervisor_target.is_robot(n)) {
      throw std::invalid_argument("supervisor target must be a failed robot or the control center");
    }
    if (robots_[supervisor_target.index - 1].status != RobotStatus::kFailed) {
      throw std::invalid_argument("supervisor target robot " + std::to_string(supervisor_target.index) +
                                  " has not failed");
    }
  }
  target_ = supervisor_target;

  for (auto& r : robots_) {
    if (r.status != RobotStatus::kNavigating) continue;
    const Cell next = (*r.plan)[r.progress];
    ++r.progress;
    r.position = next;
    if (geometry_->in_row(next)) ++covered_;
    if (r.progress == r.plan->size()) {
      r.status = RobotStatus::kDone;
    } else if (counter_uniform(trial_seed_, r.id, r.progress - 1) <= field_->at(next)) {
      r.status = RobotStatus::kFailed;
    }
  }

  const Cell goal = cell_of(supervisor_target);
  if (supervisor_ != goal) {
    const auto here = geometry_->distance(supervisor_, goal);
    for (Cell nb : geometry_->neighbors(supervisor_)) {
      if (geometry_->distance(nb, goal) + 1 == here) {
        supervisor_ = nb;
        break;
      }
    }
  }

  for (auto& r : robots_) {
    if (r.status == RobotStatus::kFailed && r.position == supervisor_) r.status = RobotStatus::kNavigating;
  }

  ++clock_;
  if (supervisor_ != geometry_->control_center()) ++working_;
}

void WorldState::write_trace(std::ostream& out) const {
  const bool home = supervisor_ == geometry_->control_center();
  out << clock_ << ",supervisor," << supervisor_.x << ',' << supervisor_.y << ',' << (home ? "home" : "away")
      << '\n';
  for (const auto& r : robots_) {
    out << clock_ << ",robot" << r.id << ',' << r.position.x << ',' << r.position.y << ',' << to_string(r.status)
        << '\n';
  }
}

WorldState step(WorldState world, VertexId supervisor_target) {
  world.step(supervisor_target);
  return world;
}

std::uint32_t travel_cost(const WorldState& world, VertexId from, VertexId to) {
  return world.geometry().distance(world.cell_of(from), world.cell_of(to));
}

double robot_reward(const WorldState& world, std::size_t robot_id) { return world.robot_reward(robot_id); }

VertexId PlanningGraph::to_world(VertexId planning_vertex, std::size_t n_robots) const {
  const std::size_t k = snapshot.robot_count();
  if (planning_vertex.is_supervisor()) return supervisor_vertex();
  if (planning_vertex.is_control_center(k)) return control_center_vertex(n_robots);
  return VertexId{robot_of_vertex.at(planning_vertex.index)};
}

PlanningGraph build_planning_graph(const WorldState& world, double mu, double priority_weight) {
  const auto failed = world.failed_robots();
  const std::size_t k = failed.size();
  const std::size_t m = k + 2;
  std::vector<Cell> cells(m);
  std::vector<std::size_t> ids(m, 0);
  cells[0] = world.supervisor();
  for (std::size_t i = 0; i < k; ++i) {
    ids[i + 1] = failed[i];
    cells[i + 1] = world.robot(failed[i]).position;
  }
  cells[m - 1] = world.geometry().control_center();

  std::vector<double> rewards(m, 0.0);
  PriorityParams priority{priority_weight, std::vector<double>(k, 0.0)};
  for (std::size_t i = 1; i <= k; ++i) {
    rewards[i] = world.robot_reward(ids[i]);
    priority.traversed[i - 1] = static_cast<double>(world.robot(ids[i]).progress);
  }
  std::vector<double> costs(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) costs[i * m + j] = mu * world.geometry().distance(cells[i], cells[j]);
    }
  }
  apply_priority(k, priority, costs);
  return {StaticSnapshot(k, std::move(rewards), std::move(costs)), std::move(ids)};
}

}  // namespace fleetsup
