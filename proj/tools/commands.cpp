#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>

#include "fleetsup/dynamic_eval.hpp"
#include "fleetsup/instance_io.hpp"
#include "fleetsup/ptp_solver.hpp"

namespace fleetsup::cli {

int solve_command(const std::string& instance_path, std::ostream& out, std::ostream& err) {
  try {
    const StaticSnapshot snapshot = read_instance_file(instance_path);
    const PtpSolution sol = solve_bnb(snapshot);
    std::string path;
    for (auto v : sol.path.vertices()) path += (path.empty() ? "" : ",") + std::to_string(v.index);
    out << path << '\t' << format_double(sol.objective) << '\t' << sol.stats.nodes_explored << '\t'
        << sol.stats.cuts_added << '\t' << sol.stats.wall_time.count() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << '\n';
    return 1;
  }
}

int verify_bound_command(const VerifyBoundArgs& args, std::ostream& out, std::ostream& err) {
  try {
    Engine rng(args.seed);
    out << "instance,n,gap,bound,holds\n";
    std::size_t held = 0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < args.instances; ++i) {
      const auto graph = random_linear_instance(args.n, args.alpha, args.beta, args.lambda, rng);
      const BoundReport r = check_bound(graph, travel_time_bound(graph));
      held += r.holds ? 1 : 0;
      if (r.bound > 0.0 && std::isfinite(r.bound)) worst_ratio = std::max(worst_ratio, r.gap / r.bound);
      out << i << ',' << args.n << ',' << format_double(r.gap) << ',' << format_double(r.bound) << ','
          << (r.holds ? 1 : 0) << '\n';
      if (!r.holds) err << "bound violated on instance " << i << ":\n" << dump_instance(graph);
    }
    out << "# summary: instances=" << args.instances << " holds=" << held << " violations=" << args.instances - held
        << " max_gap_to_bound=" << format_double(worst_ratio) << '\n';
    return held == args.instances ? 0 : 2;
  } catch (const std::exception& e) {
    err << "verify-bound: " << e.what() << '\n';
    return 1;
  }
}

bool check_records(const std::vector<TrialRecord>& records, std::ostream& err) {
  bool ok = true;
  for (const auto& r : records) {
    if (r.human_working_time > r.task_completion_time) {
      err << "invariant: working time exceeds completion time (" << r.policy << ", seed " << r.seed << ")\n";
      ok = false;
    }
    if (r.coverage_series.empty() || r.coverage_series.back().percent != 100.0) {
      err << "invariant: coverage does not end at 100% (" << r.policy << ", seed " << r.seed << ")\n";
      ok = false;
    }
  }
  return ok;
}

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err) {
  try {
    GridOptions options;
    options.jobs = args.jobs;
    options.step_cap = args.step_cap;
    if (args.trace) options.trace_dir = args.out_dir / "traces";
    const auto start = std::chrono::steady_clock::now();
    const auto records = run_grid(args.grid, args.policies, options);
    const auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_csv(records, args.out_dir);
    const bool ok = check_records(records, err);
    out << "ran " << records.size() << " trials in " << seconds << " s; results in " << args.out_dir.string()
        << '\n';
    for (const auto& row : summarize(records)) {
      out << "  " << row.group << '=' << row.level << "  " << row.policy << "  completion " << row.completion_mean
          << " (sd " << row.completion_sd << ")  working " << row.working_mean << " (sd " << row.working_sd << ")\n";
    }
    return ok ? 0 : 3;
  } catch (const std::exception& e) {
    err << "run: " << e.what() << '\n';
    return 1;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Supervisor planning for multi-robot rescue on a grid farm"};
  app.require_subcommand(1);
  // Keys for `run` live under a [run] section; the option may follow the subcommand.
  app.set_config("--config", "", "TOML/INI settings file; command-line flags override it");
  app.fallthrough();

  std::string instance;
  auto* solve = app.add_subcommand("solve", "Solve a snapshot instance file exactly");
  solve->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);

  VerifyBoundArgs vb;
  auto* verify = app.add_subcommand("verify-bound", "Check the static-vs-dynamic gap bound on random instances");
  verify->add_option("--instances", vb.instances, "Number of random instances")->capture_default_str();
  verify->add_option("--n", vb.n, "Robots per instance")->capture_default_str()->check(CLI::Range(0, 7));
  verify->add_option("--alpha", vb.alpha, "Reward drift bound")->capture_default_str()->check(CLI::NonNegativeNumber);
  verify->add_option("--beta", vb.beta, "Cost drift bound")->capture_default_str()->check(CLI::NonNegativeNumber);
  verify->add_option("--lambda", vb.lambda, "Discount factor")->capture_default_str()->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", vb.seed, "Random seed")->capture_default_str();

  RunArgs run;
  PolicyKind params;
  std::vector<std::string> policy_names{"greedy-hr", "greedy-ftg", "greedy-cr", "gittins", "ptp"};
  std::vector<int> fields{1, 2, 3, 4, 5};
  std::vector<std::string> autonomy{"low", "mid", "high"};
  std::vector<std::string> fleets{"mid"};
  std::string out_dir = "results";
  auto* runcmd = app.add_subcommand("run", "Run the policy comparison grid and write CSV results");
  runcmd->add_option("--policies", policy_names, "Policies to run")->delimiter(',')->capture_default_str();
  runcmd->add_option("--seed", run.grid.base_seed, "Base seed")->capture_default_str();
  runcmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  runcmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  runcmd->add_flag("--trace", run.trace, "Write per-trial trace logs under OUT/traces");
  runcmd->add_option("--trials", run.grid.trials, "Trials per grid cell")->capture_default_str();
  runcmd->add_option("--fields", fields, "Field patterns (1-5)")->delimiter(',')->capture_default_str()
      ->check(CLI::Range(1, 5));
  runcmd->add_option("--autonomy", autonomy, "Autonomy levels (low, mid, high)")->delimiter(',')
      ->capture_default_str();
  runcmd->add_option("--fleets", fleets, "Fleet sizes (small, mid, large)")->delimiter(',')->capture_default_str();
  runcmd->add_option("--rows", run.grid.rows, "Crop rows")->capture_default_str();
  runcmd->add_option("--row-length", run.grid.row_length, "Cells per crop row")->capture_default_str();
  runcmd->add_option("--margin", run.grid.free_margin, "Free margin width")->capture_default_str();
  runcmd->add_option("--mu", params.mu, "Travel-time weight")->capture_default_str();
  runcmd->add_option("--lambda", params.lambda, "Discount factor")->capture_default_str();
  runcmd->add_option("--gamma-p", params.gamma_p, "Priority weight on robot-to-robot arcs")->capture_default_str();
  runcmd->add_option("--gamma-g", params.gamma_g, "Gittins discount")->capture_default_str();
  runcmd->add_option("--step-cap", run.step_cap, "Abort a trial after this many steps")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (solve->parsed()) return solve_command(instance, std::cout, std::cerr);
  if (verify->parsed()) return verify_bound_command(vb, std::cout, std::cerr);

  try {
    run.grid.fields.clear();
    for (int f : fields) run.grid.fields.push_back(pattern_from_index(f));
    run.grid.autonomy.clear();
    for (const auto& a : autonomy) run.grid.autonomy.push_back(autonomy_by_name(a));
    run.grid.fleets.clear();
    for (const auto& f : fleets) run.grid.fleets.push_back(fleet_by_name(f));
    for (const auto& name : policy_names) {
      const auto type = parse_policy(name);
      if (!type) throw std::invalid_argument("unknown policy '" + name + "'");
      PolicyKind p = params;
      p.type = *type;
      run.policies.push_back(p);
    }
    run.out_dir = out_dir;
  } catch (const std::exception& e) {
    std::cerr << "run: " << e.what() << '\n';
    return 2;
  }
  return run_command(run, std::cout, std::cerr);
}

}  // namespace fleetsup::cli
