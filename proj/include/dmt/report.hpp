#pragma once

// Run configuration, JSON verdicts and benchmark rows for the command line.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmt/analyzer.hpp"
#include "dmt/frontend.hpp"
#include "dmt/product.hpp"

namespace dmt {

struct RunConfig {
  SolverConfig solver;
  ProductBudget budget;
  unsigned jobs = 1;
  ClassifyOptions classify;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key = value lines; '#' starts a comment. Keys: solver, solver_args,
// solver_timeout_ms, budget_nodes, budget_edges, budget_time_ms, max_depth,
// jobs, k, depth.
void apply_config(RunConfig& cfg, const std::string& text);
void load_config(RunConfig& cfg, const std::string& path);
// SOLVER_BIN / SOLVER_ARGS from the environment.
void apply_env(RunConfig& cfg);

nlohmann::json verdict_json(const Dmt& d, const Property& psi, const Verdict& v);
nlohmann::json stats_json(const SolverStats& s);
nlohmann::json classify_json(const ClassReport& r);

struct BenchRow {
  std::string id;
  std::string cls;  // decidable class, "none", or "error"
  std::size_t transitions = 0;  // T
  std::size_t guard_size = 0;   // D, literal occurrences
  std::size_t relations = 0, functions = 0, constants = 0;
  std::size_t properties = 0;
  std::vector<std::string> outcomes;
  double time_total = 0, time_avg = 0, time_max = 0;  // seconds
  std::uint64_t checks_total = 0, checks_avg = 0, checks_max = 0;
  std::string error;
};

// A bundle is a directory holding spec.dmt and one or more *.ltl files.
// Errors are recorded in the row, never thrown.
BenchRow bench_bundle(const std::string& dir, const RunConfig& cfg);
// One row per bundle subdirectory, sorted by name; bundles run on cfg.jobs
// threads, each with its own solver.
std::vector<BenchRow> run_bench(const std::string& dir, const RunConfig& cfg);

std::string bench_header_csv();
std::string to_csv(const BenchRow& r);
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace dmt
