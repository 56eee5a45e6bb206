#include <random>

#include "doctest.h"
#include "dmt/logic.hpp"

using namespace dmt;

namespace {

Term var(const std::string& n, const std::string& s = "rat") { return Term::variable(Var::plain(n, s)); }
Term num(long v) { return Term::number(Rational(v)); }
LinExpr lin(const Term& t) { return LinExpr(t); }

Formula ge(const Term& a, const Term& b) { return Formula::arith(lin(a), Cmp::Ge, lin(b)); }

}  // namespace

TEST_CASE("rename to index and back") {
  Formula f = ge(var("x"), num(0));
  Formula g = rename_to_index(f, 2);
  CHECK(to_string(g) == "x@2 >= 0");
  CHECK(free_variables(g) == VarSet{Var::indexed("x", "rat", 2)});
  CHECK(rename_from_index(g, 2) == f);
  CHECK(rename_from_index(g, 3) == g);
  CHECK(shift_index(g, 2, 5) == rename_to_index(f, 5));
}

TEST_CASE("rename rejects annotated variables") {
  Formula f = ge(Term::variable(Var::read("x", "rat")), num(0));
  CHECK_THROWS_AS(rename_to_index(f, 0), LogicError);
}

TEST_CASE("instantiate transition") {
  // x^w = x^r + 1 with (0,1)
  Term xr = Term::variable(Var::read("x", "rat"));
  Term xw = Term::variable(Var::write("x", "rat"));
  Formula t = Formula::arith(lin(xw), Cmp::Eq, lin(xr) + LinExpr(Rational(1)));
  Formula g = instantiate_transition(t, 0, 1);
  VarSet expect{Var::indexed("x", "rat", 0), Var::indexed("x", "rat", 1)};
  CHECK(free_variables(g) == expect);
  CHECK(to_string(g) == "x@0 = x@1 - 1");  // canonical orientation
  CHECK_THROWS_AS(instantiate_transition(ge(var("x"), num(0)), 0, 1), LogicError);
}

TEST_CASE("free variables respect binders") {
  Term u = var("u", "D");
  Term y = var("y", "D");
  Formula body = Formula::relation("R", {u, y});
  Formula f = Formula::exists({Var::plain("u", "D")}, body);
  CHECK(free_variables(f) == VarSet{Var::plain("y", "D")});
  CHECK(free_variables(body).size() == 2);
}

TEST_CASE("exists drops unused binders") {
  Formula body = Formula::relation("R", {var("y", "D")});
  CHECK(Formula::exists({Var::plain("u", "D")}, body) == body);
}

TEST_CASE("substitution avoids capture") {
  Var u = Var::plain("u", "D");
  Formula f = Formula::exists({u}, Formula::relation("R", {var("u", "D"), var("y", "D")}));
  Formula g = substitute(f, {{Var::plain("y", "D"), var("u", "D")}});
  VarSet fv = free_variables(g);
  CHECK(fv == VarSet{u});
  REQUIRE(g.kind() == Formula::Kind::Exists);
  CHECK(!(g.bound()[0] == u));
}

TEST_CASE("arith folds ground comparisons") {
  CHECK(Formula::arith(LinExpr(Rational(3)), Cmp::Le, LinExpr(Rational(4))).is_true());
  CHECK(Formula::arith(LinExpr(Rational(3)), Cmp::Gt, LinExpr(Rational(4))).is_false());
  Term x = var("x");
  CHECK(Formula::eq(x, x).is_true());
}

TEST_CASE("negation of strict and non-strict bounds") {
  Term x = var("x");
  Formula le = Formula::arith(lin(x), Cmp::Le, lin(num(3)));
  Formula gt = Formula::arith(lin(x), Cmp::Gt, lin(num(3)));
  CHECK(!le == gt);
  CHECK(!!le == le);
  CHECK((le && gt).is_false());
  CHECK((le || gt).is_true());
}

TEST_CASE("conjunction is flattened and sorted") {
  Term x = var("x");
  Formula a = ge(x, num(0));
  Formula b = Formula::arith(lin(x), Cmp::Le, lin(num(5)));
  Formula c = Formula::relation("P", {var("d", "D")});
  CHECK(((a && b) && c) == (c && (b && a)));
  CHECK((a && a) == a);
  CHECK((a && Formula::top()) == a);
  CHECK((a && Formula::bottom()).is_false());
}

TEST_CASE("dnf of a conjunction over a disjunction") {
  Term x = var("x");
  Formula a = ge(x, num(0));
  Formula b = Formula::arith(lin(x), Cmp::Eq, lin(num(4)));
  Formula c = Formula::relation("P", {var("d", "D")});
  auto d = to_dnf_constraints(a && (b || c));
  REQUIRE(d.size() == 2);
  for (const auto& k : d) CHECK(k.body.size() == 2);
  CHECK(to_dnf_constraints(Formula::bottom()).empty());
  auto t = to_dnf_constraints(Formula::top());
  REQUIRE(t.size() == 1);
  CHECK(t[0].body.empty());
}

TEST_CASE("dnf lifts existentials with fresh names") {
  Var u = Var::plain("u", "D");
  Formula f = Formula::exists({u}, Formula::relation("R", {var("u", "D")}) || Formula::relation("S", {var("u", "D")}));
  auto d = to_dnf_constraints(f);
  REQUIRE(d.size() == 2);
  for (const auto& k : d) {
    REQUIRE(k.bound.size() == 1);
    CHECK(k.bound[0].name != "u");
    CHECK(k.bound[0].name.rfind("u!", 0) == 0);
  }
}

TEST_CASE("dnf rejects existential under negation") {
  Var u = Var::plain("u", "D");
  Formula f = !Formula::exists({u}, Formula::relation("R", {var("u", "D")}));
  CHECK_THROWS_AS(to_dnf_constraints(f), LogicError);
}

TEST_CASE("printing") {
  Term x = var("x");
  Term y = var("y");
  CHECK(to_string(Formula::arith(lin(x), Cmp::Le, lin(y) + LinExpr(Rational(3)))) == "x <= y + 3");
  CHECK(to_string(Formula::arith(lin(x) + lin(x), Cmp::Lt, lin(y))) == "x < 1/2*y");
  CHECK(to_string(!Formula::arith(lin(x), Cmp::Eq, lin(num(2)))) == "x != 2");
  Term s = var("s", "state");
  Term o2 = Term::constant("o2", "state");
  CHECK(to_string(Formula::eq(s, o2) && Formula::arith(lin(x), Cmp::Eq, lin(num(4)))) == "s = o2 & x = 4");
  Var u = Var::plain("u", "D");
  Formula e = Formula::exists({u}, Formula::relation("R", {var("u", "D"), Term::app("f", {var("u", "D")}, "D")}));
  CHECK(to_string(e) == "exists (u:D). R(u, f(u))");
}

TEST_CASE("well-sortedness") {
  Signature sig;
  sig.add_sort({"D"});
  sig.add_sort({"rat", SortKind::Rational});
  sig.add_relation({"R", {"D"}});
  sig.add_function({"f", {"D"}, "rat"});
  sig.add_variable({"x", "rat"});
  sig.add_variable({"d", "D"});
  sig.validate();
  Term d = var("d", "D");
  check_well_sorted(sig, Formula::relation("R", {d}));
  check_well_sorted(sig, ge(Term::app("f", {d}, "rat"), num(1)));
  CHECK_THROWS_AS(check_well_sorted(sig, Formula::relation("R", {var("x")})), LogicError);
  CHECK_THROWS_AS(check_well_sorted(sig, Formula::relation("Q", {d})), LogicError);
  Signature empty;
  empty.add_sort({"D"});
  CHECK_THROWS_AS(empty.validate(), LogicError);
}

// property: renaming to index i and back is the identity on plain formulas
TEST_CASE("property: index renaming round trip") {
  std::mt19937 rng(7);
  const char* names[] = {"x", "y", "z"};
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Formula> parts;
    int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) {
      LinExpr e = LinExpr::of(var(names[rng() % 3]), Rational(static_cast<long>(rng() % 5) - 2)) +
                  LinExpr::of(var(names[rng() % 3]), Rational(static_cast<long>(rng() % 3) + 1));
      Cmp op = static_cast<Cmp>(rng() % 6);
      Formula a = Formula::arith(e, op, LinExpr(Rational(static_cast<long>(rng() % 7) - 3)));
      parts.push_back(rng() % 2 ? a : !a);
    }
    Formula f = rng() % 2 ? Formula::conj(parts) : Formula::disj(parts);
    unsigned i = rng() % 10;
    Formula g = rename_to_index(f, i);
    for (const auto& v : free_variables(g)) {
      CHECK(v.annot == Annot::Index);
      CHECK(v.index == i);
    }
    CHECK(rename_from_index(g, i) == f);
    // dnf preserves literal polarity set size bounds
    CHECK(to_dnf_constraints(f).size() <= (f.kind() == Formula::Kind::Or ? parts.size() : 1));
  }
}
