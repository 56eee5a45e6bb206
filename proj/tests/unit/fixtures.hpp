#pragma once

// Hand-built running example signature and helpers shared by unit tests.

#include "dmt/dmt.hpp"
#include "dmt/logic.hpp"
#include "dmt/smt.hpp"

namespace fx {

using namespace dmt;

inline Term v(const std::string& n, const std::string& s) { return Term::variable(Var::plain(n, s)); }
inline Term vr(const std::string& n, const std::string& s) { return Term::variable(Var::read(n, s)); }
inline Term vw(const std::string& n, const std::string& s) { return Term::variable(Var::write(n, s)); }
inline Term vi(const std::string& n, const std::string& s, unsigned i) { return Term::variable(Var::indexed(n, s, i)); }
inline Term c(const std::string& n, const std::string& s) { return Term::constant(n, s); }
inline Term q(long n, long d = 1) { return Term::number(Rational(n, d)); }
inline LinExpr L(const Term& t) { return LinExpr(t); }
inline Formula cmp(const Term& a, Cmp op, const Term& b) { return Formula::arith(L(a), op, L(b)); }
inline Formula eq(const Term& a, const Term& b) { return Formula::eq(a, b); }
inline Formula rel(const std::string& r, std::vector<Term> args) { return Formula::relation(r, std::move(args)); }

inline Signature example2_signature() {
  Signature s;
  s.add_sort({"rat", SortKind::Rational});
  s.add_sort({"status"});
  s.add_sort({"elem"});
  s.add_relation({"R", {"rat", "elem"}});
  s.add_relation({"P", {"elem"}});
  for (const char* k : {"a", "b"}) s.add_constant({k, "elem"});
  for (const char* k : {"o1", "o2"}) s.add_constant({k, "status"});
  s.add_variable({"s", "status"});
  s.add_variable({"x", "rat"});
  s.add_variable({"y", "elem"});
  return s;
}

inline TheoryContext example2_context() {
  TheoryContext ctx;
  ctx.signature = example2_signature();
  ctx.arithmetic = true;
  ctx.distinct = {{"o1", "o2"}};
  return ctx;
}

// xset: s^r=o1 & s^w=o2 & x^w>x^r & R(x^w,y^r)
inline Formula xset_guard() {
  return eq(vr("s", "status"), c("o1", "status")) && eq(vw("s", "status"), c("o2", "status")) &&
         cmp(vw("x", "rat"), Cmp::Gt, vr("x", "rat")) && rel("R", {vw("x", "rat"), vr("y", "elem")});
}

// yset: s^r=o2 & s^w=o1 & P(y^w)
inline Formula yset_guard() {
  return eq(vr("s", "status"), c("o2", "status")) && eq(vw("s", "status"), c("o1", "status")) &&
         rel("P", {vw("y", "elem")});
}

inline Dmt example2_dmt() {
  Dmt d;
  d.name = "example2";
  d.ctx = example2_context();
  d.initial = {{"s", c("o1", "status")}, {"x", q(0)}, {"y", c("a", "elem")}};
  d.transitions = {{"xset", xset_guard()}, {"yset", yset_guard()}};
  return d;
}

}  // namespace fx
