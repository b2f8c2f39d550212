#include <gtest/gtest.h>

#include <cmath>

#include "fleetsup/graph.hpp"
#include "fleetsup/random.hpp"
#include "oracles.hpp"

using namespace fleetsup;

namespace {

// Complete graph with every arc cost given by one function.
DynamicGraph uniform_graph(std::size_t n, TimeFunction reward, TimeFunction cost, double lambda, double mu) {
  const std::size_t m = n + 2;
  return DynamicGraph(n, std::vector<TimeFunction>(n, reward), std::vector<TimeFunction>(m * m, cost), lambda, mu);
}

}  // namespace

TEST(Path, RejectsInvalidSequences) {
  EXPECT_NO_THROW(Path(2, {0, 3}));
  EXPECT_THROW(Path(2, {1, 3}), std::invalid_argument);
  EXPECT_THROW(Path(2, {0, 1}), std::invalid_argument);
  EXPECT_THROW(Path(2, {0, 1, 1, 3}), std::invalid_argument);
  EXPECT_THROW(Path(2, {0, 4}), std::invalid_argument);
  EXPECT_THROW(Path(2, {0}), std::invalid_argument);
}

TEST(Path, LengthAndFirstTarget) {
  const Path p(3, {0, 2, 1, 4});
  EXPECT_EQ(p.length(), 3u);
  EXPECT_EQ(p.first_target(), VertexId{2});
  EXPECT_EQ(Path::direct(3), Path(3, {0, 4}));
}

TEST(ArrivalTimes, SingleArc) {
  const auto g = uniform_graph(0, timefn::constant(0), timefn::constant(5), 0.0, 1.0);
  EXPECT_EQ(arrival_times(Path(0, {0, 1}), g), (std::vector<double>{0, 5}));
}

TEST(ArrivalTimes, ConstantCosts) {
  std::vector<TimeFunction> costs(9, timefn::constant(1));
  costs[0 * 3 + 1] = timefn::constant(3);
  costs[1 * 3 + 2] = timefn::constant(4);
  const DynamicGraph g(1, {timefn::constant(0)}, costs, 0.0, 1.0);
  EXPECT_EQ(arrival_times(Path(1, {0, 1, 2}), g), (std::vector<double>{0, 3, 7}));
}

TEST(ArrivalTimes, TimeVaryingCostsFollowRecursion) {
  std::vector<TimeFunction> costs(9, timefn::constant(1));
  costs[0 * 3 + 1] = timefn::linear(2, 1);
  costs[1 * 3 + 2] = timefn::linear(1, 1);
  const DynamicGraph g(1, {timefn::constant(0)}, costs, 0.0, 0.5);
  // Step by step: t1 = 0 + (2 + 0) = 2, t2 = 2 + (1 + 2) = 5; mu does not scale time.
  double t = 0.0;
  t += 2.0 + t;
  const double t1 = t;
  t += 1.0 + t;
  EXPECT_EQ(arrival_times(Path(1, {0, 1, 2}), g), (std::vector<double>{0, t1, t}));
  EXPECT_DOUBLE_EQ(t, 5.0);
}

TEST(DynamicValue, PureCostPath) {
  const auto g = uniform_graph(0, timefn::constant(0), timefn::constant(5), 0.0, 1.0);
  EXPECT_DOUBLE_EQ(dynamic_value(Path(0, {0, 1}), g), -5.0);
}

TEST(DynamicValue, DecayingRewardTermByTerm) {
  const std::size_t n = 2, m = 4;
  std::vector<TimeFunction> costs(m * m, timefn::constant(1));
  costs[0 * m + 2] = timefn::constant(2);
  costs[2 * m + 3] = timefn::constant(3);
  const DynamicGraph g(n, {timefn::constant(0), timefn::linear(10, -1)}, costs, 0.1, 1.0);
  const double expected = std::exp(-0.2) * 8.0 - (2.0 + std::exp(-0.2) * 3.0);
  EXPECT_NEAR(dynamic_value(Path(n, {0, 2, 3}), g), expected, 1e-12);
}

TEST(StaticValue, Examples) {
  {
    const StaticSnapshot s(0, {0, 0}, {0, 4, 4, 0});
    EXPECT_DOUBLE_EQ(static_value(Path(0, {0, 1}), s), -4.0);
  }
  {
    const StaticSnapshot s(1, {0, 10, 0}, {0, 3, 9, 9, 0, 2, 9, 9, 0});
    EXPECT_DOUBLE_EQ(static_value(Path(1, {0, 1, 2}), s), 5.0);
  }
}

TEST(StaticValue, MatchesNaiveSummationOnRandomPaths) {
  Engine rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const auto s = oracle::random_snapshot(n, rng);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(rng() % (n + 1));
    std::vector<std::size_t> seq{0};
    seq.insert(seq.end(), order.begin(), order.end());
    seq.push_back(n + 1);
    std::vector<VertexId> ids;
    for (auto v : seq) ids.emplace_back(v);
    EXPECT_NEAR(static_value(Path(n, ids), s), oracle::path_value(s, seq), 1e-9);
  }
}

TEST(StaticValue, PermutationSensitiveOnAsymmetricCosts) {
  Engine rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_snapshot(3, rng);
    EXPECT_NE(static_value(Path(3, {0, 1, 2, 4}), s), static_value(Path(3, {0, 2, 1, 4}), s));
  }
}

TEST(MakeSnapshot, PriorityExample) {
  const std::size_t n = 2, m = 4;
  const DynamicGraph g(n, {timefn::constant(1), timefn::constant(1)}, std::vector<TimeFunction>(m * m, timefn::constant(12)),
                       0.0, 0.5);
  const auto s = make_snapshot(g, {0.5, {10.0, 4.0}}, 0.0);
  EXPECT_DOUBLE_EQ(s.cost(1, 2), 9.0);
  EXPECT_DOUBLE_EQ(s.cost(2, 1), 6.0);
  EXPECT_DOUBLE_EQ(s.cost(0, 1), 6.0);
  EXPECT_DOUBLE_EQ(s.cost(1, 3), 6.0);
}

TEST(MakeSnapshot, ZeroWeightIsScaledCost) {
  Engine rng(3);
  const std::size_t n = 4, m = 6;
  std::vector<TimeFunction> costs;
  std::vector<double> base;
  for (std::size_t k = 0; k < m * m; ++k) {
    base.push_back(uniform(rng, 0, 10));
    costs.push_back(timefn::linear(base.back(), 0.5));
  }
  const DynamicGraph g(n, std::vector<TimeFunction>(n, timefn::constant(3)), costs, 0.0, 0.25);
  const auto s = make_snapshot(g, {0.0, {1, 2, 3, 4}}, 2.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) EXPECT_DOUBLE_EQ(s.cost(i, j), 0.25 * (base[i * m + j] + 1.0));
    }
  }
}

TEST(MakeSnapshot, EqualProgressKeepsSymmetry) {
  const std::size_t n = 3, m = 5;
  const DynamicGraph g(n, std::vector<TimeFunction>(n, timefn::constant(1)),
                       std::vector<TimeFunction>(m * m, timefn::constant(2)), 0.0, 1.0);
  const auto s = make_snapshot(g, {3.0, {7, 7, 7}}, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) EXPECT_EQ(s.cost(i, j), s.cost(j, i));
  }
}

TEST(MakeSnapshot, WeightIsMonotoneAndNonnegative) {
  Engine rng(9);
  const std::size_t n = 5, m = 7;
  std::vector<TimeFunction> costs;
  for (std::size_t k = 0; k < m * m; ++k) costs.push_back(timefn::constant(uniform(rng, 0, 5)));
  const DynamicGraph g(n, std::vector<TimeFunction>(n, timefn::linear(2, -1)), costs, 0.1, 1.0);
  std::vector<double> d(n);
  for (auto& x : d) x = uniform(rng, 0, 50);
  StaticSnapshot prev = make_snapshot(g, {0.0, d}, 4.0);
  for (double w : {0.1, 0.5, 2.0}) {
    const auto s = make_snapshot(g, {w, d}, 4.0);
    for (std::size_t k = 0; k < m * m; ++k) {
      EXPECT_GE(s.costs()[k], prev.costs()[k]);
      EXPECT_GE(s.costs()[k], 0.0);
    }
    for (double r : s.rewards()) EXPECT_GE(r, 0.0);
    prev = s;
  }
}

TEST(Property, TimeConstantUndiscountedDynamicEqualsStatic) {
  Engine rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng() % 7, m = n + 2;
    std::vector<TimeFunction> rewards, costs;
    for (std::size_t i = 0; i < n; ++i) rewards.push_back(timefn::constant(uniform(rng, 0, 20)));
    for (std::size_t k = 0; k < m * m; ++k) costs.push_back(timefn::constant(uniform(rng, 1, 10)));
    const double mu = uniform(rng, 0.1, 2.0);
    const DynamicGraph g(n, rewards, costs, 0.0, mu);
    const auto s = make_snapshot(g, {0.0, std::vector<double>(n, 0.0)}, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(rng() % (n + 1));
    std::vector<VertexId> ids{VertexId{0}};
    for (auto v : order) ids.emplace_back(v);
    ids.emplace_back(n + 1);
    const Path p(n, ids);
    EXPECT_NEAR(dynamic_value(p, g), static_value(p, s), 1e-12);
    const auto times = arrival_times(p, g);
    ASSERT_EQ(times.size(), p.length() + 1);
    EXPECT_TRUE(std::is_sorted(times.begin(), times.end()));
  }
}

TEST(StaticSnapshot, ValidatesInput) {
  EXPECT_THROW(StaticSnapshot(1, {0, -1, 0}, std::vector<double>(9, 1)), std::invalid_argument);
  EXPECT_THROW(StaticSnapshot(1, {1, 1, 0}, std::vector<double>(9, 1)), std::invalid_argument);
  EXPECT_THROW(StaticSnapshot(1, {0, 1, 0}, std::vector<double>(8, 1)), std::invalid_argument);
}
