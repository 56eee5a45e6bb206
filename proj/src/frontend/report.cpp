#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dmt/report.hpp"

namespace dmt {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

unsigned long number(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t used = 0;
    unsigned long n = std::stoul(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw ConfigError("config line " + std::to_string(line) + ": " + key + " expects a nonnegative integer");
}

double ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

nlohmann::json values(const std::vector<Value>& vs) {
  auto a = nlohmann::json::array();
  for (const auto& v : vs) a.push_back(to_string(v));
  return a;
}

}  // namespace

void apply_config(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  int line = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string l = trim(raw);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line) + ": expected key = value");
    std::string key = trim(l.substr(0, eq)), val = trim(l.substr(eq + 1));
    if (key == "solver") {
      cfg.solver.binary = val;
    } else if (key == "solver_args") {
      cfg.solver.args.clear();
      std::istringstream ws(val);
      for (std::string w; ws >> w;) cfg.solver.args.push_back(w);
    } else if (key == "solver_timeout_ms") {
      cfg.solver.timeout = std::chrono::milliseconds(number(key, val, line));
    } else if (key == "budget_nodes") {
      cfg.budget.max_nodes = number(key, val, line);
    } else if (key == "budget_edges") {
      cfg.budget.max_edges = number(key, val, line);
    } else if (key == "budget_time_ms") {
      cfg.budget.time = std::chrono::milliseconds(number(key, val, line));
    } else if (key == "max_depth") {
      cfg.budget.max_depth = number(key, val, line);
    } else if (key == "jobs") {
      cfg.jobs = std::max(1ul, number(key, val, line));
    } else if (key == "k") {
      cfg.classify.k = number(key, val, line);
    } else if (key == "depth") {
      cfg.classify.limit = number(key, val, line);
    } else {
      throw ConfigError("config line " + std::to_string(line) + ": unknown key " + key);
    }
  }
}

void load_config(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  apply_config(cfg, os.str());
}

void apply_env(RunConfig& cfg) { cfg.solver.apply_env(); }

nlohmann::json stats_json(const SolverStats& s) {
  nlohmann::json j;
  j["checks"] = s.checks;
  j["solverMs"] = ms(s.wall);
  auto phases = nlohmann::json::object();
  for (const auto& [name, p] : s.phases) phases[name] = {{"checks", p.count}, {"timeMs", ms(p.time)}};
  j["phases"] = phases;
  return j;
}

nlohmann::json verdict_json(const Dmt& d, const Property& psi, const Verdict& v) {
  nlohmann::json j;
  j["process"] = d.name;
  j["outcome"] = to_string(v.outcome);
  j["property"] = to_string(psi);
  auto trace = nlohmann::json::array();
  auto facts = nlohmann::json{{"relations", nlohmann::json::object()},
                              {"functions", nlohmann::json::object()},
                              {"constants", nlohmann::json::object()}};
  if (v.witness) {
    const Run& r = *v.witness;
    for (std::size_t i = 0; i < r.states.size(); ++i) {
      nlohmann::json step;
      step["transition"] = i == 0 ? nlohmann::json(nullptr) : nlohmann::json(r.transitions[i - 1]);
      auto a = nlohmann::json::object();
      for (const auto& var : d.variables())
        if (auto it = r.states[i].find(var); it != r.states[i].end()) a[var.name] = to_string(it->second);
      step["assignment"] = a;
      trace.push_back(step);
    }
    for (const auto& [name, tuples] : r.model.relations) {
      auto ts = nlohmann::json::array();
      for (const auto& t : tuples) ts.push_back(values(t));
      facts["relations"][name] = ts;
    }
    for (const auto& [name, table] : r.model.functions) {
      auto es = nlohmann::json::array();
      for (const auto& [args, val] : table) es.push_back({{"args", values(args)}, {"value", to_string(val)}});
      facts["functions"][name] = es;
    }
    for (const auto& [name, val] : r.model.constants) facts["constants"][name] = to_string(val);
  }
  j["trace"] = trace;
  j["modelFacts"] = facts;
  nlohmann::json st = stats_json(v.stats);
  st["nodes"] = v.nodes;
  st["edges"] = v.edges;
  st["merges"] = v.merges;
  st["elapsedMs"] = v.elapsed.count();
  j["stats"] = st;
  if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
  return j;
}

nlohmann::json classify_json(const ClassReport& r) {
  nlohmann::json j;
  j["class"] = to_string(r.decidable);
  j["candidate"] = r.candidate ? nlohmann::json(to_string(*r.candidate)) : nlohmann::json(nullptr);
  j["acyclic"] = r.acyclic.acyclic;
  if (!r.acyclic.acyclic) j["cycle"] = r.acyclic.cycle;
  j["tame"] = r.tame;
  j["arithmetic"] = r.arithmetic;
  j["mc"] = r.mc.mc;
  if (!r.mc.mc) j["nonMcAtoms"] = r.mc.offending;
  j["locallyFiniteAsserted"] = r.locally_finite_asserted;
  if (r.lookback) {
    const LookbackResult& l = *r.lookback;
    nlohmann::json lb{{"status", to_string(l.status)}, {"k", l.k}, {"limit", l.limit}, {"probes", l.probes}};
    if (l.status == LookbackResult::Status::Violated) {
      lb["sigma"] = l.sigma;
      lb["pathLength"] = l.path_length;
      lb["path"] = l.path;
    }
    j["lookback"] = lb;
  }
  return j;
}

std::string bench_header_csv() {
  return "id,class,T,D,R,F,C,properties,outcomes,time_total_s,time_avg_s,time_max_s,checks_total,checks_avg,"
         "checks_max,error\n";
}

std::string to_csv(const BenchRow& r) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string outs;
  for (const auto& o : r.outcomes) outs += (outs.empty() ? "" : " ") + o;
  char times[96];
  std::snprintf(times, sizeof times, "%.3f,%.3f,%.3f", r.time_total, r.time_avg, r.time_max);
  std::ostringstream os;
  os << quote(r.id) << ',' << r.cls << ',' << r.transitions << ',' << r.guard_size << ',' << r.relations << ','
     << r.functions << ',' << r.constants << ',' << r.properties << ',' << quote(outs) << ',' << times << ','
     << r.checks_total << ',' << r.checks_avg << ',' << r.checks_max << ',' << quote(r.error) << '\n';
  return os.str();
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-5s %4s %4s %3s %3s %3s  %9s %9s %9s  %7s %7s %7s\n", "problem", "class",
                "T", "D", "R", "F", "C", "time", "avg", "max", "checks", "avg", "max");
  os << buf;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      os << r.id << ": error: " << r.error << '\n';
      continue;
    }
    std::snprintf(buf, sizeof buf, "%-16s %-5s %4zu %4zu %3zu %3zu %3zu  %9.3f %9.3f %9.3f  %7llu %7llu %7llu\n",
                  r.id.c_str(), r.cls.c_str(), r.transitions, r.guard_size, r.relations, r.functions, r.constants,
                  r.time_total, r.time_avg, r.time_max, static_cast<unsigned long long>(r.checks_total),
                  static_cast<unsigned long long>(r.checks_avg), static_cast<unsigned long long>(r.checks_max));
    os << buf;
  }
  return os.str();
}

}  // namespace dmt
