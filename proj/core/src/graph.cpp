#include "fleetsup/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fleetsup {

Path::Path(std::size_t n, std::vector<VertexId> vertices) : n_(n), vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) {
    throw std::invalid_argument("path needs at least two vertices");
  }
  if (!vertices_.front().is_supervisor() || !vertices_.back().is_control_center(n_)) {
    throw std::invalid_argument("path must start at vertex 0 and end at vertex n+1");
  }
  std::vector<bool> seen(n_ + 2, false);
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const auto v = vertices_[k].index;
    if (v > n_ + 1) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
    }
    if (seen[v]) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " repeats on path");
    }
    seen[v] = true;
  }
}

Path::Path(std::size_t n, std::initializer_list<std::size_t> vertices)
    : Path(n, [&] {
        std::vector<VertexId> v;
        v.reserve(vertices.size());
        for (auto i : vertices) v.emplace_back(i);
        return v;
      }()) {}

Path Path::direct(std::size_t n) { return Path(n, {supervisor_vertex(), control_center_vertex(n)}); }

namespace timefn {

TimeFunction constant(double value) {
  return [value](double) { return value; };
}

TimeFunction linear(double value0, double slope) {
  return [value0, slope](double t) { return std::max(0.0, value0 + slope * t); };
}

}  // namespace timefn

DynamicGraph::DynamicGraph(std::size_t n, std::vector<TimeFunction> robot_rewards,
                           std::vector<TimeFunction> arc_costs, double lambda, double mu)
    : n_(n), rewards_(std::move(robot_rewards)), costs_(std::move(arc_costs)), lambda_(lambda), mu_(mu) {
  if (rewards_.size() != n_) {
    throw std::invalid_argument("expected one reward function per robot");
  }
  if (costs_.size() != (n_ + 2) * (n_ + 2)) {
    throw std::invalid_argument("expected an (n+2)x(n+2) cost table");
  }
  if (!(lambda_ >= 0.0) || !(mu_ >= 0.0)) {
    throw std::invalid_argument("lambda and mu must be nonnegative");
  }
}

double DynamicGraph::reward(VertexId v, double t) const {
  if (!v.is_robot(n_)) return 0.0;
  return rewards_[v.index - 1](t);
}

double DynamicGraph::travel_time(VertexId from, VertexId to, double t) const {
  if (from == to) return 0.0;
  return costs_[from.index * (n_ + 2) + to.index](t);
}

StaticSnapshot::StaticSnapshot(std::size_t n, std::vector<double> rewards, std::vector<double> costs)
    : n_(n), rewards_(std::move(rewards)), costs_(std::move(costs)) {
  const std::size_t m = n_ + 2;
  if (rewards_.size() != m) {
    throw std::invalid_argument("snapshot needs n+2 rewards");
  }
  if (costs_.size() != m * m) {
    throw std::invalid_argument("snapshot needs an (n+2)x(n+2) cost table");
  }
  if (rewards_.front() != 0.0 || rewards_.back() != 0.0) {
    throw std::invalid_argument("supervisor and control-center rewards must be zero");
  }
  for (double r : rewards_) {
    if (!(r >= 0.0) || std::isinf(r)) throw std::invalid_argument("rewards must be finite and nonnegative");
  }
  for (std::size_t i = 0; i < m; ++i) {
    costs_[i * m + i] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(costs_[i * m + j] >= 0.0)) throw std::invalid_argument("arc costs must be nonnegative");
    }
  }
}

bool StaticSnapshot::has_arc(std::size_t from, std::size_t to) const {
  return from != to && std::isfinite(cost(from, to));
}

std::vector<double> arrival_times(const Path& path, const DynamicGraph& graph) {
  const auto vs = path.vertices();
  std::vector<double> t(vs.size(), 0.0);
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    t[k + 1] = t[k] + graph.travel_time(vs[k], vs[k + 1], t[k]);
  }
  return t;
}

double dynamic_value(const Path& path, const DynamicGraph& graph) {
  const auto vs = path.vertices();
  const auto t = arrival_times(path, graph);
  double value = 0.0;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const double discount = std::exp(-graph.lambda() * t[k]);
    value += discount * graph.reward(vs[k], t[k]);
    if (k + 1 < vs.size()) {
      value -= discount * graph.mu() * graph.travel_time(vs[k], vs[k + 1], t[k]);
    }
  }
  return value;
}

double static_value(const Path& path, const StaticSnapshot& snapshot) {
  const auto vs = path.vertices();
  double value = 0.0;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    value += snapshot.reward(vs[k].index);
    if (k + 1 < vs.size()) value -= snapshot.cost(vs[k].index, vs[k + 1].index);
  }
  return value;
}

void apply_priority(std::size_t n, const PriorityParams& priority, std::span<double> costs) {
  if (priority.weight == 0.0) return;
  if (priority.traversed.size() != n) {
    throw std::invalid_argument("priority needs one traversed distance per robot");
  }
  const std::size_t m = n + 2;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (i == j) continue;
      const double lead = priority.traversed[i - 1] - priority.traversed[j - 1];
      costs[i * m + j] += priority.weight * std::max(0.0, lead);
    }
  }
}

StaticSnapshot make_snapshot(const DynamicGraph& graph, const PriorityParams& priority, double at_time) {
  if (!(at_time >= 0.0)) throw std::invalid_argument("snapshot time must be nonnegative");
  if (priority.weight < 0.0) throw std::invalid_argument("priority weight must be nonnegative");
  const std::size_t n = graph.robot_count();
  const std::size_t m = n + 2;
  std::vector<double> rewards(m, 0.0);
  for (std::size_t i = 1; i <= n; ++i) rewards[i] = graph.reward(VertexId{i}, at_time);
  std::vector<double> costs(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) costs[i * m + j] = graph.mu() * graph.travel_time(VertexId{i}, VertexId{j}, at_time);
    }
  }
  apply_priority(n, priority, costs);
  return StaticSnapshot(n, std::move(rewards), std::move(costs));
}

}  // namespace fleetsup
