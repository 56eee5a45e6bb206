#pragma once

// Syntactic and bounded semantic checks placing a (process, property) pair in
// a decidable class: acyclic signature (I), tame monotonicity constraints
// (II), asserted local finiteness (III) and bounded lookback (IV).

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmt/dmt.hpp"
#include "dmt/nfa.hpp"
#include "dmt/smt.hpp"

namespace dmt {

// s -> s' for every function with an argument of sort s and result s'.
struct SortGraph {
  std::vector<std::string> sorts;
  std::set<std::pair<std::string, std::string>> edges;
};

SortGraph sort_graph(const Signature& sig);

struct AcyclicReport {
  bool acyclic = true;
  SortGraph graph;
  std::vector<std::string> cycle;  // sorts on a cycle, when one exists
};

AcyclicReport check_acyclic(const Signature& sig);
// The rational sort is a leaf of the sort graph.
bool check_tame(const Signature& sig);

struct McReport {
  bool mc = true;
  std::vector<std::string> offending;  // printed atoms
};

// Every arithmetic atom in guards and property constraints compares two
// terms, or a term and a numeral, without arithmetic combination.
McReport check_mc(const Dmt& d, const Property& psi);

// Nodes are v_i for the process variables (in declaration order) and
// 0 <= i <= length; node id = i * |V| + position of v.
struct ComputationGraph {
  std::vector<Var> variables;
  unsigned length = 0;
  std::set<std::pair<int, int>> edges;           // all edges, a < b
  std::set<std::pair<int, int>> equality_edges;  // subset of edges

  int node(std::size_t var, unsigned i) const { return static_cast<int>(i * variables.size() + var); }
  std::size_t node_count() const { return variables.size() * (length + 1); }
  std::string node_name(int n) const;

  // Longest acyclic path (in edges) after collapsing equality edges; the
  // search stops once a path longer than cap is found.
  unsigned longest_collapsed_path(unsigned cap = 64, std::vector<int>* path = nullptr) const;
};

ComputationGraph build_computation_graph(const Dmt& d, const HistoryFormula& h);
ComputationGraph build_computation_graph(const Dmt& d, const std::vector<std::string>& sigma, const Word& w);
std::string computation_graph_to_dot(const ComputationGraph& g);

struct LookbackResult {
  enum class Status { Holds, Violated, UnknownUpTo };
  Status status = Status::UnknownUpTo;
  unsigned k = 0;
  unsigned limit = 0;  // L
  // counterexample when violated
  std::vector<std::string> sigma;
  Word word;
  unsigned path_length = 0;
  std::vector<std::string> path;
  std::size_t probes = 0;  // satisfiable (sigma, w) prefixes examined
};

std::string to_string(LookbackResult::Status s);

// Enumerates satisfiable (sigma, w) with |sigma| <= L and words over the
// property constraints that relate several variables. Holds only when no
// satisfiable sequence is longer than L. Solver unknown counts as satisfiable.
LookbackResult check_bounded_lookback(const Dmt& d, const Property& psi, unsigned k, unsigned limit, Gateway& gw);

enum class DecidableClass { I, II, III, IV, None };
std::string to_string(DecidableClass c);

struct ClassifyOptions {
  unsigned k = 5;
  unsigned limit = 12;
  bool locally_finite = false;  // user assertion
  bool always_probe = false;    // run the lookback probe even for classes I and II
};

struct ClassReport {
  AcyclicReport acyclic;
  bool tame = true;
  bool arithmetic = false;
  McReport mc;
  bool locally_finite_asserted = false;
  std::optional<LookbackResult> lookback;
  DecidableClass decidable = DecidableClass::None;
  std::optional<DecidableClass> candidate;  // IV when lookback is unknown up to L
};

ClassReport classify(const Dmt& d, const Property& psi, Gateway& gw, const ClassifyOptions& opt = {});

}  // namespace dmt
