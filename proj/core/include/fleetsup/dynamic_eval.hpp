/**
 * @file dynamic_eval.hpp
 * @brief Exhaustive dynamic-problem solver and the static-vs-dynamic gap bound.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetsup/errors.hpp"
#include "fleetsup/graph.hpp"
#include "fleetsup/random.hpp"

namespace fleetsup {

/**
 * Dynamic graph whose rewards and costs drift linearly from a base snapshot,
 * clamped below at zero. Travel times equal the base costs (mu = 1).
 *
 * Reward slopes are indexed by vertex (entries 0 and n+1 must be zero);
 * cost slopes form an (n+2)x(n+2) row-major table.
 */
class LinearDynamicGraph {
 public:
  LinearDynamicGraph(StaticSnapshot base, std::vector<double> reward_slopes, std::vector<double> cost_slopes,
                     double alpha, double beta, double lambda);

  const StaticSnapshot& base() const { return base_; }
  std::size_t robot_count() const { return base_.robot_count(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double lambda() const { return lambda_; }
  double reward_slope(std::size_t v) const { return reward_slopes_[v]; }
  double cost_slope(std::size_t i, std::size_t j) const { return cost_slopes_[i * (robot_count() + 2) + j]; }

  double reward(std::size_t v, double t) const;
  double cost(std::size_t i, std::size_t j, double t) const;

  DynamicGraph to_dynamic() const;

 private:
  StaticSnapshot base_;
  std::vector<double> reward_slopes_;
  std::vector<double> cost_slopes_;
  double alpha_;
  double beta_;
  double lambda_;
};

struct BoundParams {
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double dt_max = 0.0;
  std::size_t n = 0;
};

struct DynamicOptimum {
  Path path;
  double value;
};

/// Largest robot count solve_dynamic_exact enumerates.
inline constexpr std::size_t kMaxDynamicRobots = 9;
/// Largest robot count verify_bound accepts.
inline constexpr std::size_t kMaxVerifyRobots = 7;

/// Maximizes the dynamic path value over every loop-free valid path.
DynamicOptimum solve_dynamic_exact(const LinearDynamicGraph& graph);

/**
 * (alpha+beta)(n+1)/(lambda e) + sum_{k=0}^{n} (1 - e^{-lambda k dt_max}) epsilon.
 *
 * At lambda = 0 the first term takes its limit: +inf when alpha+beta > 0,
 * otherwise 0; every summand of the second term is 0.
 */
double theorem1_bound(const BoundParams& p);

/// max over arcs (i, j) of |r_i - c_ij|.
double estimate_epsilon(const StaticSnapshot& snapshot);

/**
 * Smallest D with c_ij(0) + q_ij^+ n D <= D for every arc, i.e. an upper
 * bound on any traversal time that can occur on a loop-free path. Infinite
 * when some positive cost slope makes n q_ij >= 1.
 */
double travel_time_bound(const LinearDynamicGraph& graph);

struct BoundReport {
  Path static_path;
  double static_value;
  Path dynamic_path;
  double dynamic_value;
  double gap;
  double bound;
  BoundParams params;
  bool holds;
};

/// Thrown by verify_bound when the gap exceeds the bound; carries the instance dump.
class BoundViolation : public std::runtime_error {
 public:
  BoundViolation(const std::string& msg, BoundReport report)
      : std::runtime_error(msg), report_(std::move(report)) {}
  const BoundReport& report() const { return report_; }

 private:
  BoundReport report_;
};

/// Float slack allowed on top of the bound.
inline constexpr double kBoundSlack = 1e-9;

/**
 * Computes both optima and the bound without throwing on a violation.
 * Throws std::invalid_argument if an optimal path traverses an arc slower
 * than dt_max allows.
 */
BoundReport check_bound(const LinearDynamicGraph& graph, double dt_max);

/// As check_bound, but throws BoundViolation when the bound does not hold.
BoundReport verify_bound(const LinearDynamicGraph& graph, double dt_max);

/// Plain-text dump of a linear instance: the snapshot format followed by slopes.
std::string dump_instance(const LinearDynamicGraph& graph);

/**
 * Random linear instance: rewards U[0,20], base costs U[1,10], reward slopes
 * U[-alpha, alpha], cost slopes U[-beta, beta].
 */
LinearDynamicGraph random_linear_instance(std::size_t n, double alpha, double beta, double lambda, Engine& rng);

}  // namespace fleetsup
