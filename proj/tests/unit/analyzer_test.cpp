#include <random>

#include "doctest.h"
#include "dmt/analyzer.hpp"
#include "fixtures.hpp"
#include "micro.hpp"

using namespace dmt;
using namespace fx;

namespace {

const Term S = v("s", "status"), X = v("x", "rat");

Property psi() {
  return Property::until(Property::leaf(cmp(X, Cmp::Ge, q(0))),
                         Property::conj({Property::leaf(cmp(X, Cmp::Eq, q(4))), Property::leaf(eq(S, c("o2", "status")))}));
}

Word empty_word(std::size_t n) { return Word(n + 1); }

// Three steps that never loop: a, then b, then c.
Dmt pipeline() {
  Dmt d;
  d.name = "pipeline";
  Signature s;
  s.add_sort({"rat", SortKind::Rational});
  s.add_sort({"st"});
  for (const char* k : {"p0", "p1", "p2", "p3"}) s.add_constant({k, "st"});
  s.add_variable({"s", "st"});
  s.add_variable({"u", "rat"});
  s.add_variable({"z", "rat"});
  d.ctx.signature = s;
  d.ctx.arithmetic = true;
  d.ctx.distinct = {{"p0", "p1", "p2", "p3"}};
  d.initial = {{"s", c("p0", "st")}, {"u", q(0)}, {"z", q(0)}};
  auto st = [](const char* r, const char* w) {
    return eq(vr("s", "st"), c(r, "st")) && eq(vw("s", "st"), c(w, "st"));
  };
  d.transitions = {{"a", st("p0", "p1") && cmp(vw("u", "rat"), Cmp::Gt, vr("z", "rat"))},
                   {"b", st("p1", "p2") && Formula::arith(L(vw("z", "rat")), Cmp::Eq, L(vr("u", "rat")) + LinExpr(Rational(1)))},
                   {"c", st("p2", "p3") && cmp(vw("u", "rat"), Cmp::Lt, vr("z", "rat"))}};
  return d;
}

}  // namespace

TEST_CASE("sort graph acyclicity and tameness") {
  Signature s;
  s.add_sort({"rat", SortKind::Rational});
  s.add_sort({"agent_id"});
  s.add_sort({"prob_id"});
  s.add_function({"assigned", {"agent_id"}, "prob_id"});
  AcyclicReport r = check_acyclic(s);
  CHECK(r.acyclic);
  CHECK(r.graph.edges.size() == 1);
  CHECK(check_tame(s));

  Signature loop = s;
  loop.add_function({"next", {"agent_id"}, "agent_id"});
  r = check_acyclic(loop);
  CHECK(!r.acyclic);
  CHECK(r.cycle == std::vector<std::string>{"agent_id"});

  Signature two = s;
  two.add_function({"back", {"prob_id"}, "agent_id"});
  r = check_acyclic(two);
  CHECK(!r.acyclic);
  CHECK(r.cycle.size() == 2);

  CHECK(check_acyclic(example2_signature()).acyclic);
  CHECK(check_tame(example2_signature()));

  Signature wild = s;
  wild.add_function({"g", {"rat"}, "agent_id"});
  CHECK(!check_tame(wild));
  wild = s;
  wild.add_function({"price", {"prob_id"}, "rat"});
  CHECK(check_tame(wild));
}

TEST_CASE("monotonicity constraints") {
  Dmt d = example2_dmt();
  CHECK(check_mc(d, psi()).mc);
  Dmt e = d;
  // t^w = t^r - 1/5 t^r
  e.transitions.push_back({"discount", Formula::arith(L(vw("x", "rat")), Cmp::Eq, L(vr("x", "rat")) - LinExpr::of(vr("x", "rat"), Rational(1, 5)))});
  McReport r = check_mc(e, psi());
  CHECK(!r.mc);
  CHECK(r.offending.size() == 1);
  CHECK(check_mc(d, Property::leaf(cmp(X, Cmp::Le, X))).mc);
  CHECK(!check_mc(d, Property::leaf(Formula::arith(L(X), Cmp::Lt, L(v("w", "rat")) + LinExpr(Rational(3))))).mc);
}

TEST_CASE("computation graph of the alternating sequence") {
  Dmt d = example2_dmt();
  std::vector<std::string> sigma2{"xset", "yset", "xset", "yset", "xset"};
  ComputationGraph g = build_computation_graph(d, sigma2, empty_word(5));
  CHECK(g.node_count() == 18);
  auto has = [&](const std::set<std::pair<int, int>>& es, int a, int b) {
    return es.count({std::min(a, b), std::max(a, b)}) > 0;
  };
  // variables: s=0, x=1, y=2
  CHECK(has(g.equality_edges, g.node(2, 0), g.node(2, 1)));
  CHECK(has(g.edges, g.node(1, 1), g.node(2, 0)));
  CHECK(has(g.edges, g.node(1, 0), g.node(1, 1)));
  CHECK(!has(g.equality_edges, g.node(1, 0), g.node(1, 1)));
  CHECK(has(g.equality_edges, g.node(1, 1), g.node(1, 2)));
  for (const auto& e : g.equality_edges) CHECK(g.edges.count(e));
  std::vector<int> path;
  CHECK(g.longest_collapsed_path(64, &path) == 4);
  CHECK(path.size() == 5);

  ComputationGraph none = build_computation_graph(d, {}, empty_word(0));
  CHECK(none.edges.empty());
  CHECK(none.longest_collapsed_path() == 0);

  std::string dot = computation_graph_to_dot(g);
  CHECK(dot.find("style=dotted") != std::string::npos);
  CHECK(dot.find("x_5") != std::string::npos);
}

TEST_CASE("existential chains produce equality edges") {
  Dmt d = example2_dmt();
  Var z = Var::plain("z", "elem");
  d.transitions.push_back(
      {"copy", Formula::exists({z}, eq(vw("y", "elem"), Term::variable(z)) && eq(Term::variable(z), vr("y", "elem"))) &&
                   eq(vr("s", "status"), c("o1", "status"))});
  ComputationGraph g = build_computation_graph(d, {"copy"}, empty_word(1));
  CHECK(g.equality_edges.count({g.node(2, 0), g.node(2, 1)}));
  // two quantifier occurrences of the same name stay apart
  ComputationGraph g2 = build_computation_graph(d, {"copy", "copy"}, empty_word(2));
  CHECK(g2.longest_collapsed_path() == 0);
  CHECK(!g2.edges.count({g2.node(2, 0), g2.node(1, 2)}));
}

TEST_CASE("bounded lookback of the running example") {
  Dmt d = example2_dmt();
  Gateway gw(d.ctx);
  const std::size_t depth = gw.depth();
  LookbackResult r = check_bounded_lookback(d, psi(), 4, 8, gw);
  REQUIRE(r.status == LookbackResult::Status::Violated);
  CHECK(r.sigma.size() == 7);
  CHECK(r.path_length > 4);
  CHECK(r.word.size() == 8);
  for (unsigned k = 0; k <= 5; ++k) {
    CAPTURE(k);
    CHECK(check_bounded_lookback(d, psi(), k, 10, gw).status == LookbackResult::Status::Violated);
  }
  // monotone in L
  CHECK(check_bounded_lookback(d, psi(), 4, 10, gw).sigma.size() == 7);
  CHECK(check_bounded_lookback(d, psi(), 4, 6, gw).status == LookbackResult::Status::UnknownUpTo);
  CHECK(gw.depth() == depth);
}

TEST_CASE("loop-free processes have bounded lookback") {
  Dmt d = pipeline();
  REQUIRE_NOTHROW(d.validate());
  Gateway gw(d.ctx);
  const unsigned k = static_cast<unsigned>(d.variables().size() * 4);
  LookbackResult r = check_bounded_lookback(d, Property::eventually(Property::leaf(eq(v("s", "st"), c("p3", "st")))), k, 3, gw);
  CHECK(r.status == LookbackResult::Status::Holds);
  ComputationGraph g = build_computation_graph(d, {"a", "b", "c"}, empty_word(3));
  CHECK(g.longest_collapsed_path() == 3);
  CHECK(check_bounded_lookback(d, Property::top(), 2, 3, gw).status == LookbackResult::Status::Violated);
}

TEST_CASE("classification") {
  Dmt d = example2_dmt();
  Gateway gw(d.ctx);
  ClassReport r = classify(d, psi(), gw);
  CHECK(r.decidable == DecidableClass::II);
  CHECK(!r.lookback);

  micro::Case m = micro::lock();
  Gateway gm(m.dmt.ctx);
  CHECK(classify(m.dmt, m.props[0], gm).decidable == DecidableClass::I);

  micro::Case w = micro::walk();
  Gateway gwk(w.dmt.ctx);
  ClassReport cw = classify(w.dmt, w.props[0], gwk, {2, 4, false, false});
  CHECK(!cw.acyclic.acyclic);
  CHECK(cw.decidable == DecidableClass::None);
  REQUIRE(cw.lookback);
  ClassReport lf = classify(w.dmt, w.props[0], gwk, {2, 4, true, false});
  CHECK(lf.decidable == DecidableClass::III);

  Dmt e = d;
  e.transitions.push_back({"scale", Formula::arith(L(vw("x", "rat")), Cmp::Eq, LinExpr::of(vr("x", "rat"), Rational(2))) &&
                                        eq(vr("s", "status"), c("o2", "status")) && eq(vw("s", "status"), c("o1", "status"))});
  ClassReport ce = classify(e, psi(), gw, {5, 6, false, false});
  CHECK(!ce.mc.mc);
  CHECK(ce.decidable == DecidableClass::None);
  REQUIRE(ce.lookback);
  CHECK(ce.lookback->status == LookbackResult::Status::Violated);
}

TEST_CASE("property: collapsing equality edges never lengthens paths") {
  Dmt d = example2_dmt();
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> sigma;
    for (unsigned i = 0, n = rng() % 7; i < n; ++i) sigma.push_back(rng() % 2 ? "xset" : "yset");
    ComputationGraph g = build_computation_graph(d, sigma, empty_word(sigma.size()));
    ComputationGraph flat = g;
    flat.equality_edges.clear();
    CHECK(g.longest_collapsed_path() <= flat.longest_collapsed_path());
  }
}
