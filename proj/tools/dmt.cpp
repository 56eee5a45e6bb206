// Command line front end: verify, classify, bench, dump.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dmt/report.hpp"

namespace {

using namespace dmt;

// Exit codes.
constexpr int kWitness = 0;
constexpr int kNoWitness = 1;
constexpr int kBudget = 2;
constexpr int kInputError = 3;

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::WitnessFound: return kWitness;
    case Outcome::NoWitness: return kNoWitness;
    case Outcome::BudgetExceeded: return kBudget;
  }
  return kBudget;
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Flags {
  std::string config;
  std::optional<std::size_t> nodes, edges, depth_budget;
  std::optional<long> time_ms;
  bool exhaustive = false;
  bool no_merge = false;
  std::optional<unsigned> jobs, k, depth;
  bool locally_finite = false;
};

void budget_flags(CLI::App* c, Flags& f) {
  c->add_option("--budget-nodes", f.nodes, "Maximum product nodes");
  c->add_option("--budget-edges", f.edges, "Maximum product edges");
  c->add_option("--budget-time", f.time_ms, "Time budget in milliseconds");
  c->add_option("--max-depth", f.depth_budget, "Maximum product depth");
  c->add_flag("--exhaustive", f.exhaustive, "Build the whole product instead of stopping at the first witness");
  c->add_flag("--no-merge", f.no_merge, "Disable merging of equivalent product nodes");
}

void classify_flags(CLI::App* c, Flags& f) {
  c->add_option("--k", f.k, "Lookback bound k");
  c->add_option("--depth", f.depth, "Longest transition sequence L probed for bounded lookback");
  c->add_flag("--locally-finite", f.locally_finite, "Assert that the data theory is locally finite (class III)");
}

RunConfig make_config(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) load_config(cfg, f.config);
  apply_env(cfg);
  if (f.nodes) cfg.budget.max_nodes = *f.nodes;
  if (f.edges) cfg.budget.max_edges = *f.edges;
  if (f.depth_budget) cfg.budget.max_depth = *f.depth_budget;
  if (f.time_ms) cfg.budget.time = std::chrono::milliseconds(*f.time_ms);
  if (f.exhaustive) cfg.budget.exhaustive = true;
  if (f.no_merge) cfg.budget.merge = false;
  if (f.jobs) cfg.jobs = std::max(1u, *f.jobs);
  if (f.k) cfg.classify.k = *f.k;
  if (f.depth) cfg.classify.limit = *f.depth;
  if (f.locally_finite) cfg.classify.locally_finite = true;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Model checker for data-aware processes modulo theories"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "key = value configuration file")->check(CLI::ExistingFile);

  std::string spec_path, prop_path, dot_out, json_out, bench_dir, csv_out, what, out = "-";
  std::string format = "text";

  auto* verify = app.add_subcommand("verify", "Search for a witness of a property");
  verify->add_option("spec", spec_path, "Process spec")->required();
  verify->add_option("property", prop_path, "Property file")->required();
  verify->add_option("--dot", dot_out, "Write the product graph as DOT");
  verify->add_option("--json", json_out, "Write the verdict JSON to a file");
  budget_flags(verify, f);

  auto* classify_cmd = app.add_subcommand("classify", "Place a process and property in a decidable class");
  classify_cmd->add_option("spec", spec_path, "Process spec")->required();
  classify_cmd->add_option("property", prop_path, "Property file (default: true)");
  classify_cmd->add_option("--json", json_out, "Write the report JSON to a file");
  classify_flags(classify_cmd, f);

  auto* bench = app.add_subcommand("bench", "Run every spec/property bundle of a directory");
  bench->add_option("dir", bench_dir, "Directory of bundles")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--csv", csv_out, "Write CSV rows to a file");
  bench->add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "csv"}));
  bench->add_option("--jobs", f.jobs, "Bundles run in parallel");
  budget_flags(bench, f);
  classify_flags(bench, f);

  auto* dump = app.add_subcommand("dump", "Render the property NFA or the product graph as DOT");
  dump->add_option("what", what, "nfa or product")->required()->check(CLI::IsMember({"nfa", "product"}));
  dump->add_option("spec", spec_path, "Process spec")->required();
  dump->add_option("property", prop_path, "Property file")->required();
  dump->add_option("-o,--out", out, "Output file (default stdout)");
  budget_flags(dump, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    RunConfig cfg = make_config(f);

    if (*bench) {
      auto rows = run_bench(bench_dir, cfg);
      std::string csv = bench_header_csv();
      for (const auto& r : rows) csv += to_csv(r);
      if (!csv_out.empty()) write_file(csv_out, csv);
      std::cout << (format == "csv" ? csv : bench_table(rows));
      return 0;
    }

    SpecFile spec = load_spec(spec_path);
    const Dmt& d = spec.dmt;
    Property psi = prop_path.empty() ? Property::top() : load_property(prop_path, spec);
    Gateway gw(d.ctx, cfg.solver);

    if (*classify_cmd) {
      ClassReport r = classify(d, psi, gw, cfg.classify);
      nlohmann::json j = classify_json(r);
      j["process"] = d.name;
      j["stats"] = stats_json(gw.stats());
      if (!json_out.empty()) write_file(json_out, j.dump(2) + "\n");
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*dump) {
      if (what == "nfa") {
        write_file(out, nfa_to_dot(simplify_nfa(build_nfa(psi, gw))));
        return 0;
      }
      cfg.budget.exhaustive = true;
      ProductResult r = model_check(d, psi, gw, cfg.budget);
      write_file(out, product_to_dot(r.graph, r.nfa));
      if (r.verdict.outcome == Outcome::BudgetExceeded) {
        std::cerr << "warning: " << r.verdict.diagnostic << "; the graph is partial\n";
        return kBudget;
      }
      return 0;
    }

    ProductResult r = model_check(d, psi, gw, cfg.budget);
    nlohmann::json j = verdict_json(d, psi, r.verdict);
    if (!json_out.empty()) write_file(json_out, j.dump(2) + "\n");
    if (!dot_out.empty()) write_file(dot_out, product_to_dot(r.graph, r.nfa));
    std::cout << j.dump(2) << "\n";
    return exit_code(r.verdict.outcome);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
