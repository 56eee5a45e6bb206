#pragma once

// Product of a process with a property NFA: breadth-first expansion with
// equivalence-based node merging, witness extraction and DOT output.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "dmt/dmt.hpp"
#include "dmt/nfa.hpp"
#include "dmt/smt.hpp"

namespace dmt {

struct ProductBudget {
  std::size_t max_nodes = 10000;
  std::size_t max_edges = 0;  // 0: unlimited
  std::chrono::milliseconds time{60000};
  unsigned max_depth = 0;  // 0: unlimited
  bool exhaustive = false;  // keep expanding after the first final node
  bool merge = true;        // merge nodes with equivalent formulas
};

struct ProductNode {
  int nfa_state = 0;
  Formula formula = Formula::top();  // quantifier free over V
  bool initial = false;
  bool final = false;
  unsigned depth = 0;
  int parent_edge = -1;  // first edge that reached the node
};

struct ProductEdge {
  int from = 0;
  int to = 0;
  std::optional<std::string> transition;  // nullopt: the dummy initial step
  ConstraintSet symbol;
};

struct ProductGraph {
  std::vector<ProductNode> nodes;
  std::vector<ProductEdge> edges;

  std::size_t final_count() const;
  // Edge indices from the initial node to node n along first-reaching edges.
  std::vector<int> path_to(int n) const;
};

enum class Outcome { WitnessFound, NoWitness, BudgetExceeded };
std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::BudgetExceeded;
  std::optional<Run> witness;
  std::vector<int> accepting_path;  // edge indices
  SolverStats stats;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t merges = 0;
  std::chrono::milliseconds elapsed{0};
  std::string diagnostic;
};

struct ProductResult {
  Verdict verdict;
  ProductGraph graph;
  PropertyNfa nfa;
};

// Builds the product breadth first; transitions in declaration order, then
// NFA edges in order. Solver and elimination failures end the expansion as
// BudgetExceeded with a diagnostic. No witness is extracted.
ProductResult expand(const Dmt& d, const PropertyNfa& nfa, Gateway& gw, const ProductBudget& budget = {});

// Transition names and word read along a path.
std::vector<std::string> path_transitions(const ProductGraph& g, const std::vector<int>& path);
Word path_word(const ProductGraph& g, const std::vector<int>& path);

// Satisfies H(sigma, w) of a path to a final node and decodes the run. Throws
// std::logic_error when the history is unsatisfiable, the run violates the
// process, or the run does not satisfy psi.
Run extract_witness(const Dmt& d, const Property& psi, const ProductGraph& g, const std::vector<int>& path, Gateway& gw);

// The terminal formula of the path is equivalent to H_exists(sigma, w).
bool verify_path_invariant(const Dmt& d, const ProductGraph& g, const std::vector<int>& path, Gateway& gw);

// NFA construction, product expansion and witness extraction.
ProductResult model_check(const Dmt& d, const Property& psi, Gateway& gw, const ProductBudget& budget = {});

std::string product_to_dot(const ProductGraph& g, const PropertyNfa& nfa);

}  // namespace dmt
