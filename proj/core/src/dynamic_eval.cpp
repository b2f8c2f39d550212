#include "fleetsup/dynamic_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "fleetsup/instance_io.hpp"
#include "fleetsup/ptp_solver.hpp"

namespace fleetsup {

LinearDynamicGraph::LinearDynamicGraph(StaticSnapshot base, std::vector<double> reward_slopes,
                                       std::vector<double> cost_slopes, double alpha, double beta, double lambda)
    : base_(std::move(base)),
      reward_slopes_(std::move(reward_slopes)),
      cost_slopes_(std::move(cost_slopes)),
      alpha_(alpha),
      beta_(beta),
      lambda_(lambda) {
  const std::size_t m = base_.vertex_count();
  if (reward_slopes_.size() != m || cost_slopes_.size() != m * m) {
    throw std::invalid_argument("slope tables do not match the snapshot size");
  }
  if (reward_slopes_.front() != 0.0 || reward_slopes_.back() != 0.0) {
    throw std::invalid_argument("supervisor and control-center rewards cannot drift");
  }
  if (!(alpha_ >= 0.0) || !(beta_ >= 0.0) || !(lambda_ >= 0.0)) {
    throw std::invalid_argument("alpha, beta and lambda must be nonnegative");
  }
  for (double s : reward_slopes_) {
    if (std::abs(s) > alpha_) throw std::invalid_argument("reward slope exceeds alpha");
  }
  for (double q : cost_slopes_) {
    if (std::abs(q) > beta_) throw std::invalid_argument("cost slope exceeds beta");
  }
}

double LinearDynamicGraph::reward(std::size_t v, double t) const {
  return std::max(0.0, base_.reward(v) + reward_slopes_[v] * t);
}

double LinearDynamicGraph::cost(std::size_t i, std::size_t j, double t) const {
  if (i == j) return 0.0;
  return std::max(0.0, base_.cost(i, j) + cost_slope(i, j) * t);
}

DynamicGraph LinearDynamicGraph::to_dynamic() const {
  const std::size_t n = robot_count();
  const std::size_t m = n + 2;
  std::vector<TimeFunction> rewards;
  for (std::size_t i = 1; i <= n; ++i) rewards.push_back(timefn::linear(base_.reward(i), reward_slopes_[i]));
  std::vector<TimeFunction> costs;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      costs.push_back(i == j ? timefn::constant(0.0) : timefn::linear(base_.cost(i, j), cost_slope(i, j)));
    }
  }
  return DynamicGraph(n, std::move(rewards), std::move(costs), lambda_, 1.0);
}

namespace {

struct Enumerator {
  const LinearDynamicGraph& g;
  std::size_t n;
  std::vector<VertexId> stack;
  std::vector<bool> used;
  std::optional<Path> best_path;
  double best_value = -std::numeric_limits<double>::infinity();

  // Arrived at the top of the stack at time t with everything before it accounted for.
  void visit(double t, double value) {
    const std::size_t v = stack.back().index;
    const double discount = std::exp(-g.lambda() * t);
    value += discount * g.reward(v, t);
    for (std::size_t next = 1; next <= n + 1; ++next) {
      if (used[next]) continue;
      const double c = g.cost(v, next, t);
      const double after = value - discount * c;
      stack.emplace_back(next);
      if (next == n + 1) {
        Path path(n, stack);
        if (!best_path || preferred(after, path, best_value, *best_path)) {
          best_path = std::move(path);
          best_value = after;
        }
      } else {
        used[next] = true;
        visit(t + c, after);
        used[next] = false;
      }
      stack.pop_back();
    }
  }
};

double max_traversal_time(const Path& path, const DynamicGraph& g) {
  const auto t = arrival_times(path, g);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) worst = std::max(worst, t[k + 1] - t[k]);
  return worst;
}

}  // namespace

DynamicOptimum solve_dynamic_exact(const LinearDynamicGraph& graph) {
  const std::size_t n = graph.robot_count();
  if (n > kMaxDynamicRobots) {
    throw SizingError("exhaustive dynamic search supports at most " + std::to_string(kMaxDynamicRobots) +
                      " robots");
  }
  Enumerator e{graph, n, {VertexId{0}}, std::vector<bool>(n + 2, false), std::nullopt};
  e.used[0] = true;
  e.visit(0.0, 0.0);
  return {*e.best_path, e.best_value};
}

double theorem1_bound(const BoundParams& p) {
  const double drift = p.alpha + p.beta;
  if (p.lambda == 0.0) {
    return drift > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  double bound = drift * static_cast<double>(p.n + 1) / (p.lambda * std::numbers::e);
  for (std::size_t k = 0; k <= p.n; ++k) {
    bound += (1.0 - std::exp(-p.lambda * static_cast<double>(k) * p.dt_max)) * p.epsilon;
  }
  return bound;
}

double estimate_epsilon(const StaticSnapshot& snapshot) {
  double eps = 0.0;
  for (std::size_t i = 0; i < snapshot.vertex_count(); ++i) {
    for (std::size_t j = 0; j < snapshot.vertex_count(); ++j) {
      if (snapshot.has_arc(i, j)) eps = std::max(eps, std::abs(snapshot.reward(i) - snapshot.cost(i, j)));
    }
  }
  return eps;
}

double travel_time_bound(const LinearDynamicGraph& graph) {
  const std::size_t m = graph.robot_count() + 2;
  const double horizon_arcs = static_cast<double>(graph.robot_count());
  double bound = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double growth = std::max(0.0, graph.cost_slope(i, j)) * horizon_arcs;
      if (growth >= 1.0) return std::numeric_limits<double>::infinity();
      bound = std::max(bound, graph.base().cost(i, j) / (1.0 - growth));
    }
  }
  return bound;
}

BoundReport check_bound(const LinearDynamicGraph& graph, double dt_max) {
  if (graph.robot_count() > kMaxVerifyRobots) {
    throw SizingError("bound verification supports at most " + std::to_string(kMaxVerifyRobots) + " robots");
  }
  const DynamicGraph dyn = graph.to_dynamic();
  const PtpSolution stat = solve_dp(graph.base());
  const DynamicOptimum best = solve_dynamic_exact(graph);

  for (const Path* p : {&stat.path, &best.path}) {
    if (max_traversal_time(*p, dyn) > dt_max + kTolerance) {
      throw std::invalid_argument("an optimal path traverses an arc slower than dt_max");
    }
  }

  BoundParams params{graph.alpha(), graph.beta(), estimate_epsilon(graph.base()), graph.lambda(), dt_max,
                     graph.robot_count()};
  const double gap = std::abs(stat.objective - best.value);
  const double bound = theorem1_bound(params);
  return {stat.path, stat.objective, best.path, best.value, gap, bound, params, gap <= bound + kBoundSlack};
}

BoundReport verify_bound(const LinearDynamicGraph& graph, double dt_max) {
  BoundReport report = check_bound(graph, dt_max);
  if (!report.holds) {
    std::ostringstream msg;
    msg << "approximation bound violated: gap " << format_double(report.gap) << " > bound "
        << format_double(report.bound) << "\n"
        << dump_instance(graph);
    throw BoundViolation(msg.str(), std::move(report));
  }
  return report;
}

std::string dump_instance(const LinearDynamicGraph& graph) {
  std::ostringstream out;
  write_instance(out, graph.base());
  const std::size_t m = graph.robot_count() + 2;
  out << "alpha " << format_double(graph.alpha()) << " beta " << format_double(graph.beta()) << " lambda "
      << format_double(graph.lambda()) << '\n';
  for (std::size_t v = 0; v < m; ++v) out << "rslope " << v << ' ' << format_double(graph.reward_slope(v)) << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out << "cslope " << i << ' ' << j << ' ' << format_double(graph.cost_slope(i, j)) << '\n';
    }
  }
  return out.str();
}

LinearDynamicGraph random_linear_instance(std::size_t n, double alpha, double beta, double lambda, Engine& rng) {
  const std::size_t m = n + 2;
  std::vector<double> rewards(m, 0.0), rslopes(m, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    rewards[i] = uniform(rng, 0.0, 20.0);
    rslopes[i] = uniform(rng, -alpha, alpha);
  }
  std::vector<double> costs(m * m, 0.0), cslopes(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      costs[i * m + j] = uniform(rng, 1.0, 10.0);
      cslopes[i * m + j] = uniform(rng, -beta, beta);
    }
  }
  return LinearDynamicGraph(StaticSnapshot(n, std::move(rewards), std::move(costs)), std::move(rslopes),
                            std::move(cslopes), alpha, beta, lambda);
}

}  // namespace fleetsup
