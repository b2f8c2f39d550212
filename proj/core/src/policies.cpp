#include "fleetsup/policies.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fleetsup/ptp_solver.hpp"

namespace fleetsup {

std::string_view policy_name(PolicyType type) {
  switch (type) {
    case PolicyType::kGreedyHR: return "greedy-hr";
    case PolicyType::kGreedyFTG: return "greedy-ftg";
    case PolicyType::kGreedyCR: return "greedy-cr";
    case PolicyType::kGittinsIndex: return "gittins";
    case PolicyType::kPTP: return "ptp";
  }
  return "unknown";
}

std::optional<PolicyType> parse_policy(std::string_view name) {
  for (PolicyType t : kAllPolicies) {
    if (policy_name(t) == name) return t;
  }
  return std::nullopt;
}

void PolicyKind::validate() const {
  if (!(mu >= 0.0) || !(gamma_p >= 0.0) || !(lambda >= 0.0)) {
    throw std::invalid_argument("mu, lambda and gamma_p must be nonnegative");
  }
  if (!(gamma_g > 0.0 && gamma_g < 1.0)) throw std::invalid_argument("gamma_g must lie in (0, 1)");
}

PolicyKind make_policy(PolicyType type) {
  PolicyKind p;
  p.type = type;
  return p;
}

double gittins_index(double reward, std::uint32_t travel_time, double gamma) {
  const double c = static_cast<double>(travel_time);
  const double discounted = std::pow(gamma, c) * reward;
  const double horizon = (1.0 - std::pow(gamma, c + 1.0)) / (1.0 - gamma);
  return discounted / horizon;
}

namespace {

template <typename Score>
VertexId best_failed(const std::vector<std::size_t>& failed, Score score) {
  std::size_t best = failed.front();
  double best_score = score(best);
  for (std::size_t k = 1; k < failed.size(); ++k) {
    const double s = score(failed[k]);
    if (s > best_score) {
      best = failed[k];
      best_score = s;
    }
  }
  return VertexId{best};
}

StaticSnapshot without_direct_return(const StaticSnapshot& s) {
  const std::size_t m = s.vertex_count();
  std::vector<double> costs(s.costs().begin(), s.costs().end());
  costs[m - 1] = std::numeric_limits<double>::infinity();
  return StaticSnapshot(s.robot_count(), std::vector<double>(s.rewards().begin(), s.rewards().end()),
                        std::move(costs));
}

VertexId decide_ptp(const PolicyKind& policy, const WorldState& world) {
  const std::size_t n = world.robot_count();
  const PlanningGraph graph = build_planning_graph(world, policy.mu, policy.gamma_p);
  PtpSolution sol = solve_bnb(graph.snapshot);
  if (sol.path.length() == 1 && !world.any_navigating()) {
    sol = solve_bnb(without_direct_return(graph.snapshot));
  }
  return graph.to_world(sol.path.first_target(), n);
}

}  // namespace

VertexId decide(const PolicyKind& policy, const WorldState& world) {
  const std::size_t n = world.robot_count();
  const auto failed = world.failed_robots();
  if (failed.empty()) return control_center_vertex(n);

  const VertexId sup = supervisor_vertex();
  switch (policy.type) {
    case PolicyType::kGreedyHR:
      return best_failed(failed, [&](std::size_t id) {
        return world.robot_reward(id) - policy.mu * travel_cost(world, sup, VertexId{id});
      });
    case PolicyType::kGreedyFTG:
      return best_failed(failed, [&](std::size_t id) { return -static_cast<double>(world.robot(id).progress); });
    case PolicyType::kGreedyCR:
      return best_failed(failed, [&](std::size_t id) { return -static_cast<double>(travel_cost(world, sup, VertexId{id})); });
    case PolicyType::kGittinsIndex:
      return best_failed(failed, [&](std::size_t id) {
        return gittins_index(world.robot_reward(id), travel_cost(world, sup, VertexId{id}), policy.gamma_g);
      });
    case PolicyType::kPTP:
      return decide_ptp(policy, world);
  }
  throw std::logic_error("unknown policy");
}

TrialRecord run_policy_trial(const PolicyKind& policy, const FarmConfig& config, std::uint64_t seed,
                             const TrialOptions& options) {
  policy.validate();
  WorldState world(config, seed);
  TrialRecord record;
  record.policy = std::string(policy_name(policy.type));
  record.field = pattern_index(config.field_pattern);
  record.seed = seed;
  record.coverage_series.push_back({0, world.coverage_percent()});
  if (options.trace) {
    *options.trace << "t,entity,x,y,status\n";
    world.write_trace(*options.trace);
  }

  while (!world.complete()) {
    if (world.clock() >= options.step_cap) {
      throw TrialAborted("trial exceeded " + std::to_string(options.step_cap) + " steps (policy " + record.policy +
                         ", seed " + std::to_string(seed) + ", coverage " +
                         std::to_string(world.coverage_percent()) + "%)");
    }
    world.step(decide(policy, world));
    record.coverage_series.push_back({world.clock(), world.coverage_percent()});
    if (options.trace) world.write_trace(*options.trace);
  }
  record.task_completion_time = world.clock();
  record.human_working_time = world.human_working_time();
  return record;
}

}  // namespace fleetsup
