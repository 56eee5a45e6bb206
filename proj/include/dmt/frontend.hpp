#pragma once

// Text formats for DMT specs and LTL_f properties. The grammar is documented
// in docs/grammar.ebnf.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmt/dmt.hpp"
#include "dmt/nfa.hpp"

namespace dmt {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, int column, const std::string& msg);
  std::string file;
  int line = 0;
  int column = 0;
  std::string message;
};

// Theories outside EUF, LRA and their combination.
struct UnsupportedTheory : ParseError {
  using ParseError::ParseError;
};

// R(key k, a1, .., an) compiles to a unary membership relation R(k) plus
// attribute functions R_1 .. R_n; an atom R(t, s1, .., sn) becomes
// R(t) & R_1(t) = s1 & .. & R_n(t) = sn.
struct KeyedRelation {
  std::string name;
  std::string key_sort;
  std::vector<std::string> attributes;  // sorts
  std::string attribute_function(std::size_t i) const { return name + "_" + std::to_string(i + 1); }
};

// Control-state sugar: a status variable ranging over distinct constants.
struct ControlStates {
  std::string variable;
  std::string sort;
  std::vector<std::string> states;  // the first is initial
};

struct SpecFile {
  Dmt dmt;
  std::string theory;  // euf, lra or euf+lra
  std::map<std::string, KeyedRelation> keyed;
  std::optional<ControlStates> control;
};

SpecFile parse_spec(std::string_view text, const std::string& file = "<spec>");
SpecFile load_spec(const std::string& path);

// Guard formula over x^r / x^w (guard = true) or a closed/state formula over
// plain variables (guard = false).
Formula parse_formula(std::string_view text, const SpecFile& spec, bool guard, const std::string& file = "<formula>");

// Optional `let NAME = [constraint];` definitions, then one property.
Property parse_property(std::string_view text, const SpecFile& spec, const std::string& file = "<property>");
Property load_property(const std::string& path, const SpecFile& spec);

// Core form without sugar; parse_spec(print_spec(d)).dmt is structurally
// identical to d.
std::string print_spec(const Dmt& d, const std::string& theory);
std::string print_property(const Property& p);

// Sum of literal occurrences over all guards.
std::size_t guard_size(const Dmt& d);

}  // namespace dmt
