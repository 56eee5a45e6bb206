#include <algorithm>
#include <set>

#include "dmt/logic.hpp"

namespace dmt {

namespace {

template <typename T>
const T* find_named(const std::vector<T>& v, const std::string& name) {
  auto it = std::find_if(v.begin(), v.end(), [&](const T& x) { return x.name == name; });
  return it == v.end() ? nullptr : &*it;
}

}  // namespace

void Signature::add_sort(Sort s) { sorts_.push_back(std::move(s)); }
void Signature::add_function(FunctionDecl f) { functions_.push_back(std::move(f)); }
void Signature::add_relation(RelationDecl r) { relations_.push_back(std::move(r)); }
void Signature::add_constant(ConstantDecl c) { constants_.push_back(std::move(c)); }
void Signature::add_variable(VariableDecl v) { variables_.push_back(std::move(v)); }

const Sort* Signature::find_sort(const std::string& name) const { return find_named(sorts_, name); }
const FunctionDecl* Signature::find_function(const std::string& name) const { return find_named(functions_, name); }
const RelationDecl* Signature::find_relation(const std::string& name) const { return find_named(relations_, name); }
const ConstantDecl* Signature::find_constant(const std::string& name) const { return find_named(constants_, name); }
const VariableDecl* Signature::find_variable(const std::string& name) const { return find_named(variables_, name); }

bool Signature::has_rational() const {
  return std::any_of(sorts_.begin(), sorts_.end(), [](const Sort& s) { return s.kind == SortKind::Rational; });
}

void Signature::validate() const {
  std::set<std::string> sort_names;
  for (const auto& s : sorts_) {
    if (!sort_names.insert(s.name).second) throw LogicError("duplicate sort " + s.name);
    if ((s.kind == SortKind::Rational) != (s.name == kRatSort))
      throw LogicError("sort kind rational is reserved for '" + std::string(kRatSort) + "'");
  }
  auto need = [&](const std::string& s, const std::string& where) {
    if (!sort_names.count(s)) throw LogicError("undeclared sort " + s + " in " + where);
  };
  std::set<std::string> symbols;
  auto fresh = [&](const std::string& n) {
    if (!symbols.insert(n).second) throw LogicError("duplicate symbol " + n);
  };
  for (const auto& f : functions_) {
    fresh(f.name);
    for (const auto& a : f.args) need(a, "function " + f.name);
    need(f.result, "function " + f.name);
  }
  for (const auto& r : relations_) {
    fresh(r.name);
    for (const auto& a : r.args) need(a, "relation " + r.name);
  }
  for (const auto& c : constants_) {
    fresh(c.name);
    need(c.sort, "constant " + c.name);
  }
  if (variables_.empty()) throw LogicError("V nonempty: at least one data variable is required");
  for (const auto& v : variables_) {
    fresh(v.name);
    need(v.sort, "variable " + v.name);
  }
}

}  // namespace dmt
