#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fleetsup/experiment.hpp"
#include "oracles.hpp"

using namespace fleetsup;

namespace {

std::vector<PolicyKind> all_policies() {
  std::vector<PolicyKind> out;
  for (auto t : kAllPolicies) out.push_back(make_policy(t));
  return out;
}

ExperimentGrid tiny_grid() {
  ExperimentGrid g;
  g.autonomy = {kLowAutonomy};
  g.fleets = {kSmallFleet};
  g.fields = {FieldPattern::kCenterRidge};
  g.trials = 1;
  g.rows = 8;
  g.row_length = 10;
  return g;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fleetsup_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TrialRecord record(const std::string& policy, const std::string& autonomy, const std::string& fleet,
                   std::uint64_t completion, std::uint64_t working) {
  TrialRecord r;
  r.policy = policy;
  r.field = 1;
  r.autonomy = autonomy;
  r.fleet = fleet;
  r.seed = completion * 7;
  r.task_completion_time = completion;
  r.human_working_time = working;
  r.coverage_series = {{0, 0.0}, {completion, 100.0}};
  return r;
}

}  // namespace

TEST(Grid, TablesAreExact) {
  EXPECT_EQ(kLowAutonomy.p_min, 0.01);
  EXPECT_EQ(kLowAutonomy.p_max, 0.20);
  EXPECT_EQ(kMidAutonomy.p_min, 0.01);
  EXPECT_EQ(kMidAutonomy.p_max, 0.15);
  EXPECT_EQ(kHighAutonomy.p_min, 0.0);
  EXPECT_EQ(kHighAutonomy.p_max, 0.15);
  EXPECT_EQ(kSmallFleet.robots, 4u);
  EXPECT_EQ(kMidFleet.robots, 6u);
  EXPECT_EQ(kLargeFleet.robots, 9u);
  ExperimentGrid g;
  EXPECT_EQ(g.trials, 10u);
  EXPECT_EQ(g.cell_count(), 15u);
  EXPECT_THROW(autonomy_by_name("medium"), std::invalid_argument);
  EXPECT_EQ(fleet_by_name("large").robots, 9u);
}

TEST(RunGrid, OneCellSharesOneSeed) {
  const auto records = run_grid(tiny_grid(), all_policies());
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(records[k].seed, records[0].seed);
    EXPECT_EQ(records[k].policy, policy_name(kAllPolicies[k]));
    EXPECT_EQ(records[k].autonomy, "low");
    EXPECT_EQ(records[k].fleet, "small");
    EXPECT_EQ(records[k].field, 3);
  }
}

TEST(RunGrid, DeterministicAcrossRunsAndWorkerCounts) {
  auto g = tiny_grid();
  g.autonomy = {kLowAutonomy, kHighAutonomy};
  g.fields = {FieldPattern::kUniformNoise, FieldPattern::kBandedGradient};
  g.trials = 3;
  std::ostringstream a, b, c;
  write_trials_csv(a, run_grid(g, all_policies(), {1, 1'000'000, {}}));
  write_trials_csv(b, run_grid(g, all_policies(), {1, 1'000'000, {}}));
  write_trials_csv(c, run_grid(g, all_policies(), {3, 1'000'000, {}}));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
}

TEST(RunGrid, AbortNamesTheCell) {
  auto g = tiny_grid();
  try {
    run_grid(g, {make_policy(PolicyType::kGreedyCR)}, {1, 3, {}});
    FAIL() << "expected abort";
  } catch (const TrialAborted& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("field 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("low"), std::string::npos) << msg;
    EXPECT_NE(msg.find("small"), std::string::npos) << msg;
    EXPECT_NE(msg.find("trial 0"), std::string::npos) << msg;
  }
}

TEST(SeedDiscipline, FirstFailuresMatchNoRescueProbe) {
  const auto g = tiny_grid();
  const auto cfg = cell_config(g, g.fields[0], g.autonomy[0], g.fleets[0]);
  const auto seed = trial_seed(g.base_seed, g.fields[0], g.autonomy[0], g.fleets[0], 0);
  auto first_failures = [&](auto choose) {
    WorldState w(cfg, seed);
    std::vector<std::uint64_t> first(cfg.n_robots, 0);
    while (!w.complete() && w.any_navigating()) {
      w.step(choose(w));
      for (const auto& r : w.robots()) {
        if (r.status == RobotStatus::kFailed && first[r.id - 1] == 0) first[r.id - 1] = w.clock();
      }
    }
    return first;
  };
  const auto probe = first_failures([&](const WorldState& w) { return control_center_vertex(w.robot_count()); });
  EXPECT_GT(std::count_if(probe.begin(), probe.end(), [](auto t) { return t > 0; }), 0);
  for (const auto& p : all_policies()) {
    EXPECT_EQ(first_failures([&](const WorldState& w) { return decide(p, w); }), probe) << policy_name(p.type);
  }
}

TEST(MeanSd, Examples) {
  EXPECT_EQ(mean_sd({5.0}).mean, 5.0);
  EXPECT_EQ(mean_sd({5.0}).sd, 0.0);
  EXPECT_EQ(mean_sd({3.0, 3.0}).sd, 0.0);
  EXPECT_THROW(mean_sd({}), std::invalid_argument);
}

TEST(Summarize, MatchesNaiveStatistics) {
  Engine rng(4);
  std::vector<TrialRecord> records;
  std::map<std::pair<std::string, std::string>, std::vector<double>> completion, working;
  for (int k = 0; k < 200; ++k) {
    const std::string policy(policy_name(kAllPolicies[rng() % 5]));
    const std::string level = std::vector<std::string>{"low", "mid", "high"}[rng() % 3];
    const std::uint64_t c = 100 + rng() % 900, w = rng() % 100;
    records.push_back(record(policy, level, "mid", c, w));
    completion[{policy, level}].push_back(double(c));
    working[{policy, level}].push_back(double(w));
  }
  for (const auto& row : summarize(records)) {
    if (row.group != "autonomy") {
      EXPECT_EQ(row.level, "mid");
      continue;
    }
    const auto& c = completion.at({row.policy, row.level});
    const auto& w = working.at({row.policy, row.level});
    EXPECT_EQ(row.count, c.size());
    EXPECT_NEAR(row.completion_mean, oracle::naive_mean(c), 1e-9);
    EXPECT_NEAR(row.completion_sd, oracle::naive_sd(c), 1e-9);
    EXPECT_NEAR(row.working_mean, oracle::naive_mean(w), 1e-9);
    EXPECT_NEAR(row.working_sd, oracle::naive_sd(w), 1e-9);
  }
}

TEST(Summarize, PermutationInvariant) {
  std::vector<TrialRecord> records;
  Engine rng(8);
  for (int k = 0; k < 60; ++k) {
    records.push_back(record(k % 2 ? "ptp" : "gittins", k % 3 ? "low" : "high", k % 4 ? "mid" : "small",
                             100 + rng() % 1000, rng() % 100));
  }
  const auto ref = summarize(records);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(records.begin(), records.end(), rng);
    EXPECT_EQ(summarize(records), ref);
  }
}

TEST(Summarize, CanonicalOrder) {
  std::vector<TrialRecord> records{record("ptp", "high", "large", 10, 1), record("greedy-hr", "low", "small", 20, 2),
                                   record("ptp", "low", "small", 30, 3)};
  const auto rows = summarize(records);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].group, "autonomy");
  EXPECT_EQ(rows[0].policy, "greedy-hr");
  EXPECT_EQ(rows[1].level, "low");
  EXPECT_EQ(rows[2].level, "high");
  EXPECT_EQ(rows[3].group, "fleet");
  EXPECT_THROW(summarize({}), std::invalid_argument);
}

TEST(Csv, GoldenHeaders) {
  EXPECT_STREQ(kTrialsHeader, "policy,field,autonomy,fleet,seed,completion,working");
  EXPECT_STREQ(kSummaryHeader, "group,policy,level,count,completion_mean,completion_sd,working_mean,working_sd");
  std::ostringstream out;
  write_trials_csv(out, {record("ptp", "low", "mid", 905, 893)});
  EXPECT_EQ(out.str(), "policy,field,autonomy,fleet,seed,completion,working\nptp,1,low,mid,6335,905,893\n");
}

TEST(Csv, EmptyRecordsGiveHeaderOnlyFiles) {
  const auto dir = temp_dir("empty");
  emit_csv({}, dir);
  EXPECT_EQ(slurp(dir / "trials.csv"), std::string(kTrialsHeader) + "\n");
  EXPECT_EQ(slurp(dir / "summary.csv"), std::string(kSummaryHeader) + "\n");
  std::filesystem::remove_all(dir);
}

TEST(Csv, RoundTripReproducesSummary) {
  auto g = tiny_grid();
  g.trials = 4;
  g.autonomy = {kLowAutonomy, kMidAutonomy};
  const auto records = run_grid(g, all_policies());
  const auto dir = temp_dir("roundtrip");
  emit_csv(records, dir);
  std::ifstream in(dir / "trials.csv");
  const auto parsed = read_trials_csv(in);
  ASSERT_EQ(parsed.size(), records.size());
  std::ostringstream again;
  write_summary_csv(again, summarize(parsed));
  EXPECT_EQ(again.str(), slurp(dir / "summary.csv"));
  for (auto t : kAllPolicies) {
    const auto cov = slurp(dir / ("coverage_" + std::string(policy_name(t)) + ".csv"));
    EXPECT_EQ(cov.rfind(std::string(kCoverageHeader) + "\n", 0), 0u);
    const auto last = cov.substr(cov.rfind('\n', cov.size() - 2) + 1);
    EXPECT_NE(last.find(",100"), std::string::npos) << last;
  }
  std::filesystem::remove_all(dir);
}

TEST(Csv, CoverageIsDownsampled) {
  TrialRecord r = record("ptp", "low", "mid", 10'000, 1);
  r.coverage_series.clear();
  for (std::uint64_t s = 0; s <= 10'000; ++s) r.coverage_series.push_back({s, s / 100.0});
  std::ostringstream out;
  write_coverage_csv(out, {&r});
  const auto text = out.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  EXPECT_LE(lines, static_cast<long>(kMaxCoveragePoints) + 1);
  EXPECT_NE(text.find("\n10000,100\n"), std::string::npos);
}

TEST(Csv, ReadRejectsMalformedInput) {
  std::istringstream bad_header("policy,field\n");
  EXPECT_THROW(read_trials_csv(bad_header), std::runtime_error);
  std::istringstream bad_row(std::string(kTrialsHeader) + "\nptp,1,low,mid,x,1,1\n");
  EXPECT_THROW(read_trials_csv(bad_row), std::runtime_error);
}

TEST(Csv, UnwritableDestinationNamesPath) {
  const auto dir = temp_dir("blocked");
  std::filesystem::create_directories(dir.parent_path());
  std::ofstream(dir.string()) << "not a directory";
  try {
    emit_csv({}, dir / "sub");
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("fleetsup_test_blocked"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
