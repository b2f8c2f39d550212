#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fleetsup/experiment.hpp"

namespace fleetsup::cli {

/// `solve FILE`: one tab-separated line: path, objective, nodes explored, cuts added, microseconds.
int solve_command(const std::string& instance_path, std::ostream& out, std::ostream& err);

struct VerifyBoundArgs {
  std::size_t instances = 200;
  std::size_t n = 5;
  double alpha = 0.05;
  double beta = 0.05;
  double lambda = 0.1;
  std::uint64_t seed = 1;
};

/// `verify-bound`: CSV rows `instance,n,gap,bound,holds` and a trailing `# summary` line.
int verify_bound_command(const VerifyBoundArgs& args, std::ostream& out, std::ostream& err);

struct RunArgs {
  ExperimentGrid grid;
  std::vector<PolicyKind> policies;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = "results";
  bool trace = false;
  std::uint64_t step_cap = 1'000'000;
};

/// Returns false if a record breaks a metric invariant; reasons go to `err`.
bool check_records(const std::vector<TrialRecord>& records, std::ostream& err);

/// `run`: executes the grid and writes the CSV files. Exit code 0 only if every trial and check passed.
int run_command(const RunArgs& args, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, char** argv);

}  // namespace fleetsup::cli
