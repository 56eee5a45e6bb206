#pragma once

// Data-aware processes modulo theories: variables, initial assignment,
// guarded transitions, history constraints and run semantics.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmt/logic.hpp"
#include "dmt/nfa.hpp"
#include "dmt/smt.hpp"

namespace dmt {

struct Transition {
  std::string name;
  Formula guard = Formula::top();  // over v^r and v^w

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Dmt {
  std::string name;
  TheoryContext ctx;  // the signature's variables are V, in order
  std::map<std::string, Term> initial;  // variable name -> constant or numeral
  std::vector<Transition> transitions;

  std::vector<Var> variables() const;
  const Transition& transition(const std::string& name) const;
  // Throws LogicError when the process is malformed.
  void validate() const;

  friend bool operator==(const Dmt&, const Dmt&) = default;
};

// Names of variables whose write copy occurs free in the guard.
std::set<std::string> written(const Formula& guard);
// guard & v^w = v^r for every variable not written.
Formula extended_transition(const Dmt& d, const Transition& t);
// /\ v_i = I(v)
Formula initial_formula(const Dmt& d, unsigned i);

struct HistoryFormula {
  Formula formula = Formula::top();
  unsigned length = 0;
  std::vector<std::string> transitions;
  Word word;
};

// phi_I(V_0) & w_0(V_0) & t_1(V_0,V_1) & w_1(V_1) & ... ; |w| = |sigma| + 1.
HistoryFormula history(const Dmt& d, const std::vector<std::string>& sigma, const Word& w);
// exists V_0..V_{n-1}. H, as a quantifier-free formula over V.
Formula history_exists(const Dmt& d, const std::vector<std::string>& sigma, const Word& w, Gateway* gw = nullptr);
// exists X. phi(X) & t(X,V), quantifier free.
Formula update(const Dmt& d, const Formula& phi, const Transition& t, Gateway* gw = nullptr);

struct Run {
  std::vector<std::map<Var, Value>> states;  // over plain variables
  std::vector<std::string> transitions;
  ModelFragment model;
};

std::string to_string(const Run& r);

// Reads alpha_i(V) := nu(V_i) for i = 0..n.
Run decode_run(const Dmt& d, const ModelFragment& model, const std::vector<std::string>& sigma, unsigned n);
// Empty when the run starts in I and every step satisfies its extended
// transition; otherwise a description of the first violation.
std::string check_run(const Dmt& d, const Run& r);

// Evaluates a formula that may contain existentials; bound variables range
// over the values occurring in the model for their sort.
bool evaluate_closed(const Formula& f, const ModelFragment& m, const Signature& sig);
// Finite-trace semantics of the property on the run.
bool evaluate_property(const Run& r, const Property& p, const Signature& sig);

}  // namespace dmt
