#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dmt/qe.hpp"

namespace dmt::qe {

// e op 0, or e != 0 when ne is set (op is then Eq).
struct Lin {
  LinExpr e;
  LinOp op = LinOp::Le;
  bool ne = false;
};

Lin lin_of(const Literal& l);  // l must be linear
Formula to_formula(const Lin& l);
Formula conj_of(const std::vector<Lin>& cs);

// Each returned conjunction is a disjunct; empty result means unsatisfiable.
std::vector<std::vector<Lin>> fm_branches(std::vector<Lin> cs, const std::vector<Term>& eliminate);

// Congruence closure over terms with kept/eliminated variables.
struct EufLit {
  bool positive = true;
  std::string rel;  // empty: equality of args[0], args[1] (any sort)
  std::vector<Term> args;
};

class Congruence {
 public:
  explicit Congruence(VarSet eliminate) : elim_(std::move(eliminate)) {}

  void assert_lit(const EufLit& l);
  int add(const Term& t);
  // Returns false on inconsistency. Representatives are recomputed.
  bool close();

  int root(const Term& t) const;
  std::optional<Term> rep_of(const Term& t) const;
  bool same_class(const Term& a, const Term& b) const { return root(a) == root(b); }
  const std::vector<Term>& nodes() const { return nodes_; }
  // Cover literals: everything expressible over kept terms.
  Formula project() const;
  bool eliminated(const Var& v) const { return elim_.count(v) > 0; }

 private:
  int find(int x) const;
  void unite(int a, int b);
  std::optional<Term> express(int node) const;
  std::optional<Term> rep(int node) const;

  VarSet elim_;
  std::vector<Term> nodes_;
  std::map<Term, int> ids_;
  mutable std::vector<int> parent_;
  std::vector<EufLit> lits_;
  std::map<int, Term> rep_;  // root -> representative
};

// True when t mentions a variable of vs.
bool mentions_any(const Term& t, const VarSet& vs);

}  // namespace dmt::qe
