#pragma once

// Multi-sorted first-order syntax: sorts, signatures, terms, atoms, formulas.
// All values are immutable and cheap to copy (shared nodes).

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmt/rational.hpp"

namespace dmt {

inline constexpr const char* kRatSort = "rat";

struct LogicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- signature

enum class SortKind : std::uint8_t { Uninterpreted, Rational };

struct Sort {
  std::string name;
  SortKind kind = SortKind::Uninterpreted;

  friend bool operator==(const Sort&, const Sort&) = default;
};

struct FunctionDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;

  friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

struct RelationDecl {
  std::string name;
  std::vector<std::string> args;

  friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

struct ConstantDecl {
  std::string name;
  std::string sort;

  friend bool operator==(const ConstantDecl&, const ConstantDecl&) = default;
};

struct VariableDecl {
  std::string name;
  std::string sort;

  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

class Signature {
 public:
  void add_sort(Sort s);
  void add_function(FunctionDecl f);
  void add_relation(RelationDecl r);
  void add_constant(ConstantDecl c);
  void add_variable(VariableDecl v);

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<FunctionDecl>& functions() const { return functions_; }
  const std::vector<RelationDecl>& relations() const { return relations_; }
  const std::vector<ConstantDecl>& constants() const { return constants_; }
  const std::vector<VariableDecl>& variables() const { return variables_; }

  const Sort* find_sort(const std::string& name) const;
  const FunctionDecl* find_function(const std::string& name) const;
  const RelationDecl* find_relation(const std::string& name) const;
  const ConstantDecl* find_constant(const std::string& name) const;
  const VariableDecl* find_variable(const std::string& name) const;
  bool has_rational() const;

  // Throws LogicError on undeclared sorts, duplicate names or an empty V.
  void validate() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Sort> sorts_;
  std::vector<FunctionDecl> functions_;
  std::vector<RelationDecl> relations_;
  std::vector<ConstantDecl> constants_;
  std::vector<VariableDecl> variables_;
};

// ---------------------------------------------------------------- variables

// The annotation is part of the variable identity: x, x^r, x^w and x@i are
// four different variables.
enum class Annot : std::uint8_t { None, Read, Write, Index };

struct Var {
  std::string name;
  std::string sort;
  Annot annot = Annot::None;
  unsigned index = 0;

  static Var plain(std::string n, std::string s) { return {std::move(n), std::move(s), Annot::None, 0}; }
  static Var read(std::string n, std::string s) { return {std::move(n), std::move(s), Annot::Read, 0}; }
  static Var write(std::string n, std::string s) { return {std::move(n), std::move(s), Annot::Write, 0}; }
  static Var indexed(std::string n, std::string s, unsigned i) { return {std::move(n), std::move(s), Annot::Index, i}; }

  Var with(Annot a, unsigned i = 0) const { return {name, sort, a, a == Annot::Index ? i : 0}; }
  bool is_rat() const { return sort == kRatSort; }
};

int compare(const Var& a, const Var& b);
inline bool operator==(const Var& a, const Var& b) { return compare(a, b) == 0; }
inline bool operator<(const Var& a, const Var& b) { return compare(a, b) < 0; }
std::string to_string(const Var& v);

using VarSet = std::set<Var>;

// ---------------------------------------------------------------- terms

class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, App, Num };

  static Term variable(Var v);
  static Term constant(std::string name, std::string sort);
  static Term app(std::string fn, std::vector<Term> args, std::string sort);
  static Term number(Rational q);

  Kind kind() const;
  const std::string& sort() const;
  const Var& var() const;             // Kind::Var
  const std::string& symbol() const;  // Kind::Const / Kind::App
  std::span<const Term> args() const;
  const Rational& value() const;  // Kind::Num
  std::size_t hash() const;

  bool is_var() const { return kind() == Kind::Var; }
  bool is_num() const { return kind() == Kind::Num; }
  bool is_rat() const { return sort() == kRatSort; }
  bool ground() const;

  friend int compare(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

std::string to_string(const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// ---------------------------------------------------------------- linear

// Sum of coeff * atomic rational term plus a constant. Terms are kept sorted
// and coefficients nonzero.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rational c) : constant_(std::move(c)) {}
  explicit LinExpr(const Term& t);

  static LinExpr of(const Term& t, Rational coeff);

  const std::vector<std::pair<Term, Rational>>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  Rational coeff(const Term& t) const;

  LinExpr operator+(const LinExpr& o) const;
  LinExpr operator-(const LinExpr& o) const;
  LinExpr operator-() const;
  LinExpr scaled(const Rational& q) const;
  // Replace atomic term t by expression e.
  LinExpr substituted(const Term& t, const LinExpr& e) const;

  std::size_t hash() const;
  friend int compare(const LinExpr& a, const LinExpr& b);
  friend bool operator==(const LinExpr& a, const LinExpr& b) { return compare(a, b) == 0; }

 private:
  void add(const Term& t, const Rational& q);
  std::vector<std::pair<Term, Rational>> terms_;
  Rational constant_ = 0;
};

// ---------------------------------------------------------------- atoms

enum class LinOp : std::uint8_t { Eq, Le, Lt };  // expr op 0

class Atom {
 public:
  enum class Kind : std::uint8_t { Rel, Eq, Lin };

  static Atom relation(std::string name, std::vector<Term> args);
  // Equality between uninterpreted-sort terms (sides ordered canonically).
  static Atom equality(Term a, Term b);
  // expr op 0, normalized (leading coefficient scaled to +-1). expr must
  // contain at least one term.
  static Atom linear(LinExpr e, LinOp op);

  Kind kind() const { return kind_; }
  const std::string& relation_name() const { return name_; }
  std::span<const Term> args() const { return args_; }  // Rel args, or the two Eq sides
  const LinExpr& expr() const { return expr_; }
  LinOp op() const { return op_; }
  std::size_t hash() const { return hash_; }

  friend int compare(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
  friend bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }

 private:
  Atom() = default;
  void rehash();
  Kind kind_ = Kind::Rel;
  std::string name_;
  std::vector<Term> args_;
  LinExpr expr_;
  LinOp op_ = LinOp::Eq;
  std::size_t hash_ = 0;
};

std::string to_string(const Atom& a);

struct Literal {
  Atom atom;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};
int compare(const Literal& a, const Literal& b);
std::string to_string(const Literal& l);

// ---------------------------------------------------------------- formulas

enum class Cmp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

class Formula {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, Not, And, Or, Exists };

  static Formula top();
  static Formula bottom();
  static Formula atom(Atom a);
  static Formula literal(const Literal& l);
  static Formula negation(const Formula& f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula exists(std::vector<Var> bound, const Formula& body);

  static Formula relation(std::string name, std::vector<Term> args);
  // Equality of two terms of the same sort; rational sides become linear atoms.
  static Formula eq(const Term& a, const Term& b);
  static Formula arith(const LinExpr& lhs, Cmp op, const LinExpr& rhs);

  Kind kind() const;
  const Atom& as_atom() const;                // Kind::Atom
  std::span<const Formula> children() const;  // Not (1), And, Or, Exists (1)
  std::span<const Var> bound() const;         // Kind::Exists
  std::size_t hash() const;

  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_literal() const;
  Literal as_literal() const;
  bool quantifier_free() const;

  friend int compare(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make(Kind k, std::vector<Formula> children, std::vector<Var> bound, std::optional<Atom> a);
  std::shared_ptr<const Node> n_;
};

std::string to_string(const Formula& f);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

inline Formula operator&&(const Formula& a, const Formula& b) { return Formula::conj({a, b}); }
inline Formula operator||(const Formula& a, const Formula& b) { return Formula::disj({a, b}); }
inline Formula operator!(const Formula& a) { return Formula::negation(a); }

// Existentially quantified conjunction of literals.
struct Constraint {
  std::vector<Var> bound;
  std::vector<Literal> body;

  Formula to_formula() const;
};

// ---------------------------------------------------------------- operations

// Free variables respecting binders.
VarSet free_variables(const Formula& f);
VarSet free_variables(const Term& t);
VarSet free_variables(const Atom& a);

// Constant symbols occurring in f.
std::set<std::string> constants_of(const Formula& f);
// All atoms occurring in f (bound variables included).
std::vector<Atom> atoms_of(const Formula& f);
// All subterms (post order, deduplicated) of terms occurring in f.
std::vector<Term> subterms_of(const Formula& f);

// Capture-avoiding substitution of free variables.
Formula substitute(const Formula& f, const std::map<Var, Term>& s);
Term substitute(const Term& t, const std::map<Var, Term>& s);
Atom substitute(const Atom& a, const std::map<Var, Term>& s);
// Atom substitution may fold to TRUE/FALSE, so it yields a formula.
Formula substitute_atom(const Atom& a, const std::map<Var, Term>& s);

// Free v (no annotation) -> v@i. Throws on annotated free variables.
Formula rename_to_index(const Formula& f, unsigned i);
// Free v@i -> v (no annotation). Other variables untouched.
Formula rename_from_index(const Formula& f, unsigned i);
// Free v@from -> v@to.
Formula shift_index(const Formula& f, unsigned from, unsigned to);
// v^r -> v@i, v^w -> v@j. Throws on unannotated free variables.
Formula instantiate_transition(const Formula& t, unsigned i, unsigned j);

// Disjunction of the returned constraints is equivalent to f. Bound variables
// are renamed apart. Throws on existentials under negation.
std::vector<Constraint> to_dnf_constraints(const Formula& f);

// Negation normal form (negation only on atoms). Existentials under negation
// are rejected.
Formula to_nnf(const Formula& f);

// Number of literal occurrences.
std::size_t literal_count(const Formula& f);

// Well-sortedness against a signature; throws LogicError with a message.
void check_well_sorted(const Signature& sig, const Formula& f);

// Fresh name with the given stem, unique within the process.
std::string fresh_name(const std::string& stem);

}  // namespace dmt
