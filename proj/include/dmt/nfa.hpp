#pragma once

// LTL_f properties with constraint leaves and their constraint-labeled NFAs.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dmt/logic.hpp"
#include "dmt/smt.hpp"

namespace dmt {

// Negation-free LTL_f over constraints. Leaves are whole constraints (a
// constraint formula: conjunction of literals, possibly under an existential).
class Property {
 public:
  enum class Kind : std::uint8_t { True, False, Leaf, And, Or, Next, Globally, Until };

  static Property top();
  static Property bottom();
  // TRUE and FALSE leaves become top() and bottom().
  static Property leaf(const Formula& c);
  // Boolean structure is normalized to an absorption-reduced DNF over
  // leaves and temporal subformulas.
  static Property conj(std::vector<Property> ps);
  static Property disj(std::vector<Property> ps);
  static Property next(const Property& p);
  static Property globally(const Property& p);
  static Property until(const Property& a, const Property& b);
  static Property eventually(const Property& p) { return until(top(), p); }

  Kind kind() const;
  const Formula& constraint() const;  // Kind::Leaf
  std::span<const Property> children() const;
  std::size_t hash() const;

  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }

  friend int compare(const Property& a, const Property& b);
  friend bool operator==(const Property& a, const Property& b) { return compare(a, b) == 0; }
  friend bool operator<(const Property& a, const Property& b) { return compare(a, b) < 0; }

  struct Node;

 private:
  explicit Property(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Property make(Kind k, std::vector<Property> children, std::optional<Formula> leaf);
  static Property from_dnf(std::vector<std::vector<Property>> clauses);
  std::shared_ptr<const Node> n_;
};

std::string to_string(const Property& p);
// The constraint leaves C of p, in first-occurrence order.
std::vector<Formula> leaves(const Property& p);

using ConstraintSet = std::set<Formula>;
std::string to_string(const ConstraintSet& s);

// Symbol of the extended alphabet: constraints plus the last-position marker.
struct LSymbol {
  ConstraintSet cs;
  bool last = false;      // lambda
  bool not_last = false;  // not lambda

  friend bool operator==(const LSymbol&, const LSymbol&) = default;
  friend bool operator<(const LSymbol& a, const LSymbol& b) {
    return std::tie(a.cs, a.last, a.not_last) < std::tie(b.cs, b.last, b.not_last);
  }
};

struct DeltaEntry {
  Property next;
  LSymbol symbol;

  friend bool operator==(const DeltaEntry&, const DeltaEntry&) = default;
  friend bool operator<(const DeltaEntry& a, const DeltaEntry& b) {
    return std::tie(a.next, a.symbol) < std::tie(b.next, b.symbol);
  }
};

// Caches satisfiability of constraint sets and delta results.
class DeltaContext {
 public:
  explicit DeltaContext(Gateway& gw) : gw_(gw) {}
  bool satisfiable(const LSymbol& s);
  const std::set<DeltaEntry>& delta(const Property& q);
  Gateway& gateway() { return gw_; }

 private:
  std::set<DeltaEntry> compute(const Property& q);
  std::set<DeltaEntry> combine(const std::set<DeltaEntry>& a, const std::set<DeltaEntry>& b, bool conj);

  Gateway& gw_;
  std::map<ConstraintSet, bool> sat_;
  std::map<Property, std::set<DeltaEntry>> memo_;
};

std::set<DeltaEntry> delta(const Property& q, Gateway& gw);

struct NfaState {
  std::optional<Property> prop;  // nullopt for the extra final state q_e
  bool final = false;
};

struct NfaEdge {
  int from = 0;
  ConstraintSet label;
  int to = 0;

  friend bool operator==(const NfaEdge&, const NfaEdge&) = default;
  friend bool operator<(const NfaEdge& a, const NfaEdge& b) {
    return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
  }
};

struct PropertyNfa {
  std::vector<NfaState> states;
  int initial = 0;
  std::vector<NfaEdge> edges;
  std::vector<Formula> constraints;  // C

  std::vector<std::vector<int>> out_edges() const;  // state -> edge indices
  std::string state_name(int s) const;
  int find_state(const Property& p) const;  // -1 when absent
  int qe() const;                           // -1 when absent
};

PropertyNfa build_nfa(const Property& psi, Gateway& gw);

struct SimplifyOptions {
  bool keep_qe = false;
};
PropertyNfa simplify_nfa(const PropertyNfa& n, SimplifyOptions opt = {});

using Word = std::vector<ConstraintSet>;
// Letters must match edge labels exactly.
bool nfa_accepts(const PropertyNfa& n, const Word& w);
// An edge reads a letter whose constraints include its label.
bool nfa_accepts_consistent(const PropertyNfa& n, const Word& w);

std::string nfa_to_dot(const PropertyNfa& n);

}  // namespace dmt
