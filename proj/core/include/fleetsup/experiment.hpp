/**
 * @file experiment.hpp
 * @brief Experiment grid over fields, autonomy levels and fleet sizes; aggregation and CSV output.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fleetsup/farm_sim.hpp"
#include "fleetsup/policies.hpp"

namespace fleetsup {

/// Failure-probability clamps of one autonomy level.
struct AutonomyLevel {
  std::string name;
  double p_min;
  double p_max;
};

struct FleetSize {
  std::string name;
  std::size_t robots;
};

inline const AutonomyLevel kLowAutonomy{"low", 0.01, 0.20};
inline const AutonomyLevel kMidAutonomy{"mid", 0.01, 0.15};
inline const AutonomyLevel kHighAutonomy{"high", 0.0, 0.15};

inline const FleetSize kSmallFleet{"small", 4};
inline const FleetSize kMidFleet{"mid", 6};
inline const FleetSize kLargeFleet{"large", 9};

AutonomyLevel autonomy_by_name(const std::string& name);
FleetSize fleet_by_name(const std::string& name);

struct ExperimentGrid {
  std::vector<AutonomyLevel> autonomy{kLowAutonomy, kMidAutonomy, kHighAutonomy};
  std::vector<FleetSize> fleets{kMidFleet};
  std::vector<FieldPattern> fields{std::begin(kAllPatterns), std::end(kAllPatterns)};
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  std::size_t rows = 36;
  std::size_t row_length = 40;
  std::size_t free_margin = 2;

  void validate() const;
  std::size_t cell_count() const { return autonomy.size() * fleets.size() * fields.size(); }
};

/// Seed of a field pattern's failure map, shared by every autonomy level and fleet size.
std::uint64_t field_seed(std::uint64_t base_seed, FieldPattern pattern);

/// Environment seed of one trial in one grid cell; every policy in that cell reuses it.
std::uint64_t trial_seed(std::uint64_t base_seed, FieldPattern pattern, const AutonomyLevel& autonomy,
                         const FleetSize& fleet, std::size_t trial);

FarmConfig cell_config(const ExperimentGrid& grid, FieldPattern pattern, const AutonomyLevel& autonomy,
                       const FleetSize& fleet);

struct GridOptions {
  std::size_t jobs = 1;
  std::uint64_t step_cap = 1'000'000;
  /// Writes one trace file per trial into this directory when non-empty.
  std::filesystem::path trace_dir;
};

/**
 * One record per (policy, field, autonomy, fleet, trial), ordered by field,
 * autonomy, fleet, trial and then policy regardless of how many workers ran.
 */
std::vector<TrialRecord> run_grid(const ExperimentGrid& grid, const std::vector<PolicyKind>& policies,
                                  const GridOptions& options = {});

struct SummaryRow {
  std::string group;  ///< "autonomy" or "fleet"
  std::string policy;
  std::string level;
  std::size_t count = 0;
  double completion_mean = 0.0;
  double completion_sd = 0.0;
  double working_mean = 0.0;
  double working_sd = 0.0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Mean and sample standard deviation (0 for a single value); independent of input order.
struct MeanSd {
  double mean;
  double sd;
};
MeanSd mean_sd(std::vector<double> values);

/**
 * Groups by (policy, autonomy) and by (policy, fleet), in canonical policy
 * and level order. Throws std::invalid_argument on an empty input.
 */
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

inline constexpr const char* kTrialsHeader = "policy,field,autonomy,fleet,seed,completion,working";
inline constexpr const char* kSummaryHeader =
    "group,policy,level,count,completion_mean,completion_sd,working_mean,working_sd";
inline constexpr const char* kCoverageHeader = "step,mean_percent";
/// Coverage files hold at most this many rows.
inline constexpr std::size_t kMaxCoveragePoints = 2000;

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
/// Mean coverage percent over the given records per step (finished trials count as 100%), downsampled.
void write_coverage_csv(std::ostream& out, const std::vector<const TrialRecord*>& records);

/// Parses trials.csv back into records (without coverage series).
std::vector<TrialRecord> read_trials_csv(std::istream& in);

/**
 * Writes trials.csv, summary.csv and coverage_<policy>.csv into `dir`,
 * creating it if needed. With no records, trials.csv and summary.csv hold
 * only their headers. I/O failures throw std::runtime_error naming the path.
 */
void emit_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& dir);

}  // namespace fleetsup
