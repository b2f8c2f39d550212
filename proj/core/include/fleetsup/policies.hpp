/**
 * @file policies.hpp
 * @brief Supervisor policies: four one-step baselines and the receding-horizon PTP policy.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fleetsup/farm_sim.hpp"
#include "fleetsup/graph.hpp"

namespace fleetsup {

enum class PolicyType : std::uint8_t { kGreedyHR, kGreedyFTG, kGreedyCR, kGittinsIndex, kPTP };

inline constexpr PolicyType kAllPolicies[] = {PolicyType::kGreedyHR, PolicyType::kGreedyFTG, PolicyType::kGreedyCR,
                                              PolicyType::kGittinsIndex, PolicyType::kPTP};

/// Stable CLI names: greedy-hr, greedy-ftg, greedy-cr, gittins, ptp.
std::string_view policy_name(PolicyType type);
std::optional<PolicyType> parse_policy(std::string_view name);

struct PolicyKind {
  PolicyType type = PolicyType::kPTP;
  /// Weight of travel time against rewards (Greedy-HR and PTP).
  double mu = 0.1;
  /// Discount of the dynamic model. The PTP policy plans on the time-frozen graph and does not use it.
  double lambda = 0.01;
  /// Priority weight on robot-to-robot arcs (PTP).
  double gamma_p = 0.1;
  /// Gittins discount, in (0, 1).
  double gamma_g = 0.9;

  void validate() const;
};

PolicyKind make_policy(PolicyType type);

/**
 * Supervisor target for the current world: a failed robot, or the control
 * center when nothing is worth (or needs) a visit. Ties go to the lowest id.
 *
 * The PTP policy solves the planning graph exactly and heads for the first
 * robot on the optimal path. If the fleet is stalled (no robot navigating)
 * and that path visits nobody, it re-solves without the direct arc to the
 * control center, since the task cannot finish otherwise.
 */
VertexId decide(const PolicyKind& policy, const WorldState& world);

/// Gittins index gamma^c r / sum_{k=0}^{c} gamma^k for integral travel time c.
double gittins_index(double reward, std::uint32_t travel_time, double gamma);

struct CoveragePoint {
  std::uint64_t step;
  double percent;
};

struct TrialRecord {
  std::string policy;
  int field = 0;
  std::string autonomy;
  std::string fleet;
  std::uint64_t seed = 0;
  std::uint64_t task_completion_time = 0;
  std::uint64_t human_working_time = 0;
  std::vector<CoveragePoint> coverage_series;
};

class TrialAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialOptions {
  std::uint64_t step_cap = 1'000'000;
  /// When set, receives a header and one block of trace lines per step.
  std::ostream* trace = nullptr;
};

/// Replans every step until all robots are done and the supervisor is home.
TrialRecord run_policy_trial(const PolicyKind& policy, const FarmConfig& config, std::uint64_t seed,
                             const TrialOptions& options = {});

}  // namespace fleetsup
