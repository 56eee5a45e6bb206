#include "dmt/smt.hpp"

namespace dmt {

std::string to_string(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return to_string(std::get<Rational>(v));
}

Value evaluate(const Term& t, const ModelFragment& m) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = m.variables.find(t.var());
      if (it == m.variables.end()) throw ModelInsufficient("no value for variable " + to_string(t.var()));
      return it->second;
    }
    case Term::Kind::Const: {
      auto it = m.constants.find(t.symbol());
      if (it == m.constants.end()) throw ModelInsufficient("no value for constant " + t.symbol());
      return it->second;
    }
    case Term::Kind::Num:
      return t.value();
    case Term::Kind::App: {
      std::vector<Value> args;
      for (const auto& a : t.args()) args.push_back(evaluate(a, m));
      auto f = m.functions.find(t.symbol());
      if (f != m.functions.end()) {
        auto e = f->second.find(args);
        if (e != f->second.end()) return e->second;
      }
      std::string s = t.symbol() + "(";
      for (std::size_t i = 0; i < args.size(); ++i) s += (i ? ", " : "") + to_string(args[i]);
      throw ModelInsufficient("no function entry for " + s + ")");
    }
  }
  throw ModelInsufficient("bad term");
}

namespace {

Rational as_rational(const Value& v) {
  if (const auto* q = std::get_if<Rational>(&v)) return *q;
  throw ModelInsufficient("non-rational value " + to_string(v) + " in arithmetic");
}

bool eval_atom(const Atom& a, const ModelFragment& m) {
  switch (a.kind()) {
    case Atom::Kind::Rel: {
      std::vector<Value> tuple;
      for (const auto& t : a.args()) tuple.push_back(evaluate(t, m));
      auto r = m.relations.find(a.relation_name());
      if (r == m.relations.end()) throw ModelInsufficient("no interpretation for relation " + a.relation_name());
      return r->second.count(tuple) > 0;
    }
    case Atom::Kind::Eq:
      return evaluate(a.args()[0], m) == evaluate(a.args()[1], m);
    case Atom::Kind::Lin: {
      Rational s = a.expr().constant();
      for (const auto& [t, q] : a.expr().terms()) s += q * as_rational(evaluate(t, m));
      switch (a.op()) {
        case LinOp::Eq: return s == 0;
        case LinOp::Le: return s <= 0;
        case LinOp::Lt: return s < 0;
      }
    }
  }
  return false;
}

}  // namespace

bool evaluate(const Formula& f, const ModelFragment& m) {
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: return eval_atom(f.as_atom(), m);
    case Formula::Kind::Not: return !evaluate(f.children()[0], m);
    case Formula::Kind::And:
      for (const auto& c : f.children())
        if (!evaluate(c, m)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children())
        if (evaluate(c, m)) return true;
      return false;
    case Formula::Kind::Exists:
      throw ModelInsufficient("cannot evaluate a quantified formula over a model fragment");
  }
  return false;
}

}  // namespace dmt
