#pragma once

// Quantifier elimination and covers: Fourier-Motzkin for LRA, congruence
// closure covers for EUF with unary functions, and their tame combination.

#include <optional>
#include <string>
#include <vector>

#include "dmt/logic.hpp"
#include "dmt/smt.hpp"

namespace dmt {

struct QeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// exists eliminate. /\ matrix; the kept variables are the remaining free ones.
struct EliminationTask {
  std::vector<Var> eliminate;
  std::vector<Literal> matrix;

  Formula to_formula() const;
  VarSet keep() const;
};

struct CoverResult {
  Formula formula = Formula::top();
  // Terms over kept variables that stand for eliminated rational values
  // inside the arithmetic part.
  std::vector<Term> residual_terms;
};

// LRA only. Result is a DNF of linear literals equivalent to the task.
Formula fm_eliminate(const std::vector<Var>& eliminate, const std::vector<Literal>& matrix);

// EUF only; functions applied to eliminated terms must be unary.
Formula euf_cover(const std::vector<Var>& eliminate, const std::vector<Literal>& matrix);

// EUF + LRA where the rational sort is a leaf of the sort graph.
CoverResult tame_cover(const EliminationTask& task);

// Cover of exists vars. f for any formula with positive existentials; every
// existential inside f is eliminated as well. With a gateway, unsatisfiable
// and subsumed disjuncts are dropped.
Formula eliminate(const std::vector<Var>& vars, const Formula& f, Gateway* gw = nullptr);

// Drops unsatisfiable and subsumed disjuncts of a DNF-shaped formula.
Formula simplify_dnf(const Formula& f, Gateway& gw);

struct CoverReport {
  bool pass = true;
  int trials = 0;
  std::optional<Formula> failing_residue;
  std::string detail;
};

// Samples random residues chi over the kept variables plus two fresh ones per
// sort and requires (candidate & chi) and (exists E. matrix & chi) to be
// equisatisfiable.
CoverReport cover_property_test(Gateway& gw, const EliminationTask& task, const Formula& candidate, int trials,
                                unsigned seed);

}  // namespace dmt
