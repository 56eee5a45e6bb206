#include <sstream>

#include "dmt/logic.hpp"

namespace dmt {

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return to_string(t.var());
    case Term::Kind::Const: return t.symbol();
    case Term::Kind::Num: return to_string(t.value());
    case Term::Kind::App: {
      std::string s = t.symbol() + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ", ";
        s += to_string(t.args()[i]);
      }
      return s + ")";
    }
  }
  return {};
}

namespace {

// terms with coefficients (all positive after the caller's sign choice)
std::string side(const std::vector<std::pair<Term, Rational>>& ts, const Rational& c) {
  std::string s;
  for (const auto& [t, q] : ts) {
    Rational a = abs(q);
    if (!s.empty())
      s += q < 0 ? " - " : " + ";
    else if (q < 0)
      s += "-";
    if (a != 1) s += to_string(a) + "*";
    s += to_string(t);
  }
  if (s.empty()) return to_string(c);
  if (c > 0) s += " + " + to_string(c);
  if (c < 0) s += " - " + to_string(Rational(-c));
  return s;
}

std::string linear_to_string(const LinExpr& e, LinOp op, bool negated) {
  std::vector<std::pair<Term, Rational>> pos, neg;
  for (const auto& [t, q] : e.terms()) {
    if (q > 0)
      pos.emplace_back(t, q);
    else
      neg.emplace_back(t, Rational(-q));
  }
  const Rational& c = e.constant();
  std::string o;
  if (!pos.empty()) {
    // P + c op N  <=>  P op N - c
    switch (op) {
      case LinOp::Eq: o = negated ? "!=" : "="; break;
      case LinOp::Le: o = "<="; break;
      case LinOp::Lt: o = "<"; break;
    }
    return side(pos, 0) + " " + o + " " + side(neg, Rational(-c));
  }
  // c op N  <=>  N op' c
  switch (op) {
    case LinOp::Eq: o = negated ? "!=" : "="; break;
    case LinOp::Le: o = ">="; break;
    case LinOp::Lt: o = ">"; break;
  }
  return side(neg, 0) + " " + o + " " + to_string(c);
}

std::string atom_to_string(const Atom& a, bool negated) {
  switch (a.kind()) {
    case Atom::Kind::Rel: {
      std::string s = negated ? "!" : "";
      s += a.relation_name() + "(";
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i) s += ", ";
        s += to_string(a.args()[i]);
      }
      return s + ")";
    }
    case Atom::Kind::Eq:
      return to_string(a.args()[0]) + (negated ? " != " : " = ") + to_string(a.args()[1]);
    case Atom::Kind::Lin:
      if (negated && a.op() != LinOp::Eq) return "!(" + linear_to_string(a.expr(), a.op(), false) + ")";
      return linear_to_string(a.expr(), a.op(), negated);
  }
  return {};
}

void print(const Formula& f, std::ostream& os, bool nested) {
  switch (f.kind()) {
    case Formula::Kind::True: os << "true"; return;
    case Formula::Kind::False: os << "false"; return;
    case Formula::Kind::Atom: os << atom_to_string(f.as_atom(), false); return;
    case Formula::Kind::Not: {
      const Formula& g = f.children()[0];
      if (g.kind() == Formula::Kind::Atom) {
        os << atom_to_string(g.as_atom(), true);
      } else {
        os << "!(";
        print(g, os, false);
        os << ")";
      }
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* sep = f.kind() == Formula::Kind::And ? " & " : " | ";
      if (nested) os << "(";
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) os << sep;
        first = false;
        print(c, os, true);
      }
      if (nested) os << ")";
      return;
    }
    case Formula::Kind::Exists: {
      if (nested) os << "(";
      os << "exists";
      for (const auto& v : f.bound()) os << " (" << to_string(v) << ":" << v.sort << ")";
      os << ". ";
      print(f.children()[0], os, false);
      if (nested) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Atom& a) { return atom_to_string(a, false); }

std::string to_string(const Literal& l) { return atom_to_string(l.atom, !l.positive); }

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(f, os, false);
  return os.str();
}

}  // namespace dmt
