#include "fleetsup/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fleetsup/instance_io.hpp"
#include "fleetsup/random.hpp"

namespace fleetsup {

AutonomyLevel autonomy_by_name(const std::string& name) {
  for (const auto& a : {kLowAutonomy, kMidAutonomy, kHighAutonomy}) {
    if (a.name == name) return a;
  }
  throw std::invalid_argument("unknown autonomy level '" + name + "' (expected low, mid or high)");
}

FleetSize fleet_by_name(const std::string& name) {
  for (const auto& f : {kSmallFleet, kMidFleet, kLargeFleet}) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("unknown fleet size '" + name + "' (expected small, mid or large)");
}

void ExperimentGrid::validate() const {
  if (autonomy.empty() || fleets.empty() || fields.empty()) {
    throw std::invalid_argument("experiment grid needs at least one autonomy level, fleet and field");
  }
  if (trials == 0) throw std::invalid_argument("experiment grid needs at least one trial per cell");
  for (const auto& f : fleets) {
    for (const auto& a : autonomy) {
      FarmConfig c{rows, row_length, free_margin, f.robots, a.p_min, a.p_max, fields.front(), 0};
      c.validate();
    }
  }
}

std::uint64_t field_seed(std::uint64_t base_seed, FieldPattern pattern) {
  return hash_combine(hash_combine(base_seed, 0x6669656c64ULL), static_cast<std::uint64_t>(pattern));
}

namespace {

std::uint64_t string_key(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, FieldPattern pattern, const AutonomyLevel& autonomy,
                         const FleetSize& fleet, std::size_t trial) {
  std::uint64_t h = hash_combine(base_seed, static_cast<std::uint64_t>(pattern));
  h = hash_combine(h, string_key(autonomy.name));
  h = hash_combine(h, fleet.robots);
  return hash_combine(h, trial);
}

FarmConfig cell_config(const ExperimentGrid& grid, FieldPattern pattern, const AutonomyLevel& autonomy,
                       const FleetSize& fleet) {
  return FarmConfig{grid.rows,     grid.row_length, grid.free_margin, fleet.robots, autonomy.p_min,
                    autonomy.p_max, pattern,         field_seed(grid.base_seed, pattern)};
}

std::vector<TrialRecord> run_grid(const ExperimentGrid& grid, const std::vector<PolicyKind>& policies,
                                  const GridOptions& options) {
  grid.validate();
  if (policies.empty()) throw std::invalid_argument("no policies to run");
  for (const auto& p : policies) p.validate();

  struct Task {
    FieldPattern field;
    const AutonomyLevel* autonomy;
    const FleetSize* fleet;
    std::size_t trial;
    const PolicyKind* policy;
  };
  std::vector<Task> tasks;
  for (FieldPattern field : grid.fields) {
    for (const auto& a : grid.autonomy) {
      for (const auto& f : grid.fleets) {
        for (std::size_t t = 0; t < grid.trials; ++t) {
          for (const auto& p : policies) tasks.push_back({field, &a, &f, t, &p});
        }
      }
    }
  }

  if (!options.trace_dir.empty()) std::filesystem::create_directories(options.trace_dir);

  std::vector<TrialRecord> records(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      try {
        const FarmConfig config = cell_config(grid, task.field, *task.autonomy, *task.fleet);
        const std::uint64_t seed = trial_seed(grid.base_seed, task.field, *task.autonomy, *task.fleet, task.trial);
        TrialOptions topt;
        topt.step_cap = options.step_cap;
        std::ofstream trace;
        if (!options.trace_dir.empty()) {
          const auto path = options.trace_dir / ("trace_" + std::string(policy_name(task.policy->type)) + "_f" +
                                                 std::to_string(pattern_index(task.field)) + "_" +
                                                 task.autonomy->name + "_" + task.fleet->name + "_t" +
                                                 std::to_string(task.trial) + ".csv");
          trace.open(path);
          if (!trace) throw std::runtime_error("cannot write trace file " + path.string());
          topt.trace = &trace;
        }
        TrialRecord rec = run_policy_trial(*task.policy, config, seed, topt);
        rec.autonomy = task.autonomy->name;
        rec.fleet = task.fleet->name;
        records[i] = std::move(rec);
      } catch (...) {
        errors[i] = std::current_exception();
        next = tasks.size();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i]) continue;
    const Task& task = tasks[i];
    std::string where = "field " + std::to_string(pattern_index(task.field)) + ", autonomy " + task.autonomy->name +
                        ", fleet " + task.fleet->name + ", trial " + std::to_string(task.trial) + ", policy " +
                        std::string(policy_name(task.policy->type));
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw TrialAborted(where + ": " + e.what());
    }
  }
  return records;
}

MeanSd mean_sd(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("mean of no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

std::size_t policy_rank(const std::string& name) {
  for (std::size_t k = 0; k < std::size(kAllPolicies); ++k) {
    if (policy_name(kAllPolicies[k]) == name) return k;
  }
  return std::size(kAllPolicies);
}

std::size_t level_rank(const std::string& group, const std::string& level) {
  static const std::vector<std::string> autonomy{"low", "mid", "high"};
  static const std::vector<std::string> fleet{"small", "mid", "large"};
  const auto& order = group == "autonomy" ? autonomy : fleet;
  const auto it = std::find(order.begin(), order.end(), level);
  return static_cast<std::size_t>(it - order.begin());
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize an empty record set");
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : records) {
    for (const auto& [group, level] : {std::pair{std::string("autonomy"), r.autonomy}, std::pair{std::string("fleet"), r.fleet}}) {
      auto& g = groups[{group, r.policy, level}];
      g.first.push_back(static_cast<double>(r.task_completion_time));
      g.second.push_back(static_cast<double>(r.human_working_time));
    }
  }
  std::vector<SummaryRow> rows;
  for (auto& [key, values] : groups) {
    const auto& [group, policy, level] = key;
    const auto c = mean_sd(values.first);
    const auto w = mean_sd(values.second);
    rows.push_back({group, policy, level, values.first.size(), c.mean, c.sd, w.mean, w.sd});
  }
  std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::make_tuple(a.group, policy_rank(a.policy), a.policy, level_rank(a.group, a.level), a.level) <
           std::make_tuple(b.group, policy_rank(b.policy), b.policy, level_rank(b.group, b.level), b.level);
  });
  return rows;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kTrialsHeader << '\n';
  for (const auto& r : records) {
    out << r.policy << ',' << r.field << ',' << r.autonomy << ',' << r.fleet << ',' << r.seed << ','
        << r.task_completion_time << ',' << r.human_working_time << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << kSummaryHeader << '\n';
  for (const auto& s : summary) {
    out << s.group << ',' << s.policy << ',' << s.level << ',' << s.count << ',' << format_double(s.completion_mean)
        << ',' << format_double(s.completion_sd) << ',' << format_double(s.working_mean) << ','
        << format_double(s.working_sd) << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const std::vector<const TrialRecord*>& records) {
  out << kCoverageHeader << '\n';
  if (records.empty()) return;
  std::uint64_t horizon = 0;
  for (const auto* r : records) {
    if (!r->coverage_series.empty()) horizon = std::max(horizon, r->coverage_series.back().step);
  }
  const std::uint64_t points = horizon + 1;
  const std::uint64_t stride = (points + kMaxCoveragePoints - 2) / (kMaxCoveragePoints - 1);
  auto percent_at = [](const TrialRecord& r, std::uint64_t step) {
    const auto& s = r.coverage_series;
    if (s.empty()) return 100.0;
    if (step >= s.back().step) return s.back().percent;
    auto it = std::upper_bound(s.begin(), s.end(), step,
                               [](std::uint64_t v, const CoveragePoint& p) { return v < p.step; });
    return it == s.begin() ? s.front().percent : std::prev(it)->percent;
  };
  for (std::uint64_t step = 0;; step += std::max<std::uint64_t>(stride, 1)) {
    if (step > horizon) step = horizon;
    double sum = 0.0;
    for (const auto* r : records) sum += percent_at(*r, step);
    out << step << ',' << format_double(sum / static_cast<double>(records.size())) << '\n';
    if (step == horizon) break;
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrialsHeader) throw std::runtime_error("trials.csv: unexpected header");
  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string col; std::getline(ss, col, ',');) cols.push_back(col);
    if (cols.size() != 7) throw std::runtime_error("trials.csv line " + std::to_string(line_no) + ": expected 7 columns");
    try {
      TrialRecord r;
      r.policy = cols[0];
      r.field = std::stoi(cols[1]);
      r.autonomy = cols[2];
      r.fleet = cols[3];
      r.seed = std::stoull(cols[4]);
      r.task_completion_time = std::stoull(cols[5]);
      r.human_working_time = std::stoull(cols[6]);
      records.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("trials.csv line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return records;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream trials;
  write_trials_csv(trials, records);
  write_file(dir / "trials.csv", trials.str());

  std::ostringstream summary;
  if (records.empty()) {
    summary << kSummaryHeader << '\n';
  } else {
    write_summary_csv(summary, summarize(records));
  }
  write_file(dir / "summary.csv", summary.str());

  std::map<std::string, std::vector<const TrialRecord*>> coverage;
  for (const auto& r : records) coverage[r.policy].push_back(&r);
  for (const auto& [policy, recs] : coverage) {
    std::ostringstream cov;
    write_coverage_csv(cov, recs);
    write_file(dir / ("coverage_" + policy + ".csv"), cov.str());
  }
}

}  // namespace fleetsup
