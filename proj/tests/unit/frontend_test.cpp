#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <doctest.h>

#include "dmt/report.hpp"
#include "fixtures.hpp"

using namespace dmt;
using namespace fx;
namespace fs = std::filesystem;

namespace {

const std::string kRoot = DMT_SOURCE_DIR;

std::string path(const std::string& rel) { return kRoot + "/" + rel; }

SpecFile example2() { return load_spec(path("specs/example2.dmt")); }

ParseError parse_error(const std::string& text) {
  try {
    parse_spec(text, "t.dmt");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError("", 0, 0, "");
}

std::vector<std::string> all_specs() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(path("specs")))
    if (e.path().extension() == ".dmt" && e.path().stem() != "lists") out.push_back(e.path().string());
  for (const auto& e : fs::directory_iterator(path("bench")))
    if (fs::exists(e.path() / "spec.dmt")) out.push_back((e.path() / "spec.dmt").string());
  std::sort(out.begin(), out.end());
  return out;
}

// Random guards over the running example signature.
struct GuardGen {
  std::mt19937 rng;
  std::vector<Var> bound;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  Term x() { return pick(2) ? vr("x", "rat") : vw("x", "rat"); }
  Term y() {
    if (!bound.empty() && pick(3) == 0) return Term::variable(bound[pick(static_cast<int>(bound.size()))]);
    int k = pick(4);
    return k == 0 ? vr("y", "elem") : k == 1 ? vw("y", "elem") : c(k == 2 ? "a" : "b", "elem");
  }
  Rational coeff() {
    Rational r(pick(7) - 3, pick(3) + 1);
    r.canonicalize();
    return r;
  }

  Formula literal() {
    switch (pick(5)) {
      case 0: return rel("R", {pick(3) ? x() : q(pick(9) - 4), y()});
      case 1: return rel("P", {y()});
      case 2: return eq(y(), y());
      case 3: return eq(pick(2) ? vr("s", "status") : vw("s", "status"), c(pick(2) ? "o1" : "o2", "status"));
      default: {
        LinExpr e = LinExpr::of(vr("x", "rat"), coeff()) + LinExpr::of(vw("x", "rat"), coeff()) + LinExpr(coeff());
        return Formula::arith(e, static_cast<Cmp>(pick(6)), LinExpr(coeff()));
      }
    }
  }

  Formula formula(int depth) {
    if (depth == 0) return pick(4) ? literal() : !literal();
    switch (pick(5)) {
      case 0: return formula(depth - 1) && formula(depth - 1);
      case 1: return formula(depth - 1) || formula(depth - 1);
      case 2: return !formula(depth - 1);
      case 3: {
        Var u = Var::plain("u" + std::to_string(bound.size()), "elem");
        bound.push_back(u);
        Formula body = formula(depth - 1) && rel("P", {Term::variable(u)});
        bound.pop_back();
        return Formula::exists({u}, body);
      }
      default: return literal();
    }
  }
};

}  // namespace

TEST_CASE("running example parses to the hand-built process") {
  SpecFile s = example2();
  Dmt expected = example2_dmt();
  CHECK(s.theory == "euf+lra");
  CHECK(s.dmt.name == "example2");
  CHECK(s.dmt.transitions.size() == 2);
  CHECK(s.dmt.variables() == expected.variables());
  CHECK(s.dmt.initial == expected.initial);
  CHECK(s.dmt.transitions == expected.transitions);
  CHECK(s.dmt.ctx.distinct == expected.ctx.distinct);
  CHECK(s.dmt.ctx.arithmetic);
  REQUIRE(s.control);
  CHECK(s.control->variable == "s");
  CHECK(s.control->states == std::vector<std::string>{"o1", "o2"});
  CHECK(guard_size(s.dmt) == 7);
}

TEST_CASE("properties parse with let-bound leaves") {
  SpecFile s = example2();
  Property psi = load_property(path("specs/example2_psi.ltl"), s);
  Property expected = Property::until(Property::leaf(cmp(v("x", "rat"), Cmp::Ge, q(0))),
                                      Property::conj({Property::leaf(eq(v("s", "status"), c("o2", "status"))),
                                                      Property::leaf(cmp(v("x", "rat"), Cmp::Eq, q(4)))}));
  CHECK(psi == expected);
  CHECK(parse_property("F [s = o2] & G X [x > 1/2]", s) ==
        Property::conj({Property::eventually(Property::leaf(eq(v("s", "status"), c("o2", "status")))),
                        Property::globally(Property::next(Property::leaf(cmp(v("x", "rat"), Cmp::Gt, q(1, 2)))))}));
  // U is right associative
  CHECK(parse_property("[x = 1] U [x = 2] U [x = 3]", s) ==
        Property::until(Property::leaf(cmp(v("x", "rat"), Cmp::Eq, q(1))),
                        Property::until(Property::leaf(cmp(v("x", "rat"), Cmp::Eq, q(2))),
                                        Property::leaf(cmp(v("x", "rat"), Cmp::Eq, q(3))))));
}

TEST_CASE("existentials inside a leaf conjunction are pulled out") {
  SpecFile s = load_spec(path("specs/incident.dmt"));
  Property p = load_property(path("specs/incident_safety.ltl"), s);
  auto ls = leaves(p);
  REQUIRE(ls.size() == 1);
  REQUIRE(ls[0].kind() == Formula::Kind::Exists);
  CHECK(ls[0].bound().size() == 2);
  CHECK_THROWS_AS(parse_property("F [s = solved | s = start]", s), ParseError);
  CHECK_THROWS_AS(parse_property("F [exists (n:string). n = eps & exists (n:string). n = Low]", s), ParseError);
}

TEST_CASE("keyed relations and control states expand") {
  SpecFile s = load_spec(path("specs/incident.dmt"));
  const Signature& sig = s.dmt.ctx.signature;
  REQUIRE(sig.find_relation("ProblemType"));
  CHECK(sig.find_relation("ProblemType")->args == std::vector<std::string>{"prob_id"});
  REQUIRE(sig.find_function("ProblemType_2"));
  CHECK(sig.find_function("ProblemType_2")->result == "string");
  CHECK(s.dmt.transitions.size() == 11);
  CHECK(s.dmt.variables().size() == 6);
  CHECK_FALSE(s.dmt.ctx.arithmetic);

  const Formula& g = s.dmt.transition("handleProblem").guard;
  Term pid = vr("pid", "prob_id");
  Formula expected =
      eq(vr("s", "status"), c("problemReceived", "status")) && eq(vw("s", "status"), c("problemReceived", "status")) &&
      Formula::exists({Var::plain("n", "string")},
                      rel("ProblemType", {pid}) &&
                          eq(Term::app("ProblemType_1", {pid}, "string"), v("n", "string")) &&
                          eq(Term::app("ProblemType_2", {pid}, "string"), c("Low", "string"))) &&
      !eq(vw("sol", "string"), c("eps", "string"));
  CHECK(g == expected);

  SpecFile w = load_spec(path("specs/webshop.dmt"));
  CHECK(w.dmt.variables().size() == 10);
  CHECK(w.dmt.transitions.size() == 7);
}

TEST_CASE("pretty-printing and re-parsing every shipped spec is the identity") {
  auto specs = all_specs();
  CHECK(specs.size() >= 8);
  for (const auto& p : specs) {
    CAPTURE(p);
    SpecFile s = load_spec(p);
    std::string text = print_spec(s.dmt, s.theory);
    SpecFile again = parse_spec(text, "printed");
    CHECK(again.dmt == s.dmt);
    CHECK(print_spec(again.dmt, again.theory) == text);
  }
}

TEST_CASE("properties round-trip through the printer") {
  for (const auto& dir : fs::directory_iterator(path("bench"))) {
    SpecFile s = load_spec((dir.path() / "spec.dmt").string());
    for (const auto& e : fs::directory_iterator(dir.path())) {
      if (e.path().extension() != ".ltl") continue;
      CAPTURE(e.path().string());
      Property p = load_property(e.path().string(), s);
      CHECK(parse_property(print_property(p), s) == p);
    }
  }
}

TEST_CASE("random guards round-trip through the printer") {
  SpecFile s = example2();
  GuardGen gen{std::mt19937(17), {}};
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(3);
    std::string text = to_string(f);
    CAPTURE(text);
    CHECK(parse_formula(text, s, true) == f);
  }
}

TEST_CASE("parse errors carry positions") {
  ParseError e = parse_error("dmt e;\nsort a;\nconst k : a;\n");
  CHECK(e.message.find("V nonempty") != std::string::npos);

  e = parse_error("sort a;\nvar x : b = c;\n");
  CHECK(e.line == 2);
  CHECK(e.column == 9);
  CHECK(e.message.find("undeclared sort b") != std::string::npos);

  e = parse_error("sort a;\nconst k : a;\nvar x : a = k;\ntransition t : x = k;\n");
  CHECK(e.line == 4);
  CHECK(e.column == 16);
  CHECK(e.message.find("^r or ^w") != std::string::npos);

  e = parse_error("sort a;\nconst k : a;\nvar x : a = k;\ntransition t : x^w < k;\n");
  CHECK(e.message.find("order comparison") != std::string::npos);

  e = parse_error("sort a;\nconst k : a;\nvar x : a = k;\nvar n : rat = 0;\ntransition t : x^w = n^r;\n");
  CHECK(e.message.find("between sorts") != std::string::npos);

  e = parse_error("var n : rat = 0;\ntransition t : n^w = n^r * n^r;\n");
  CHECK(e.message.find("nonlinear") != std::string::npos);

  e = parse_error("var n : rat = 0;\ntransition t from a to b : true;\n");
  CHECK(e.message.find("states") != std::string::npos);

  e = parse_error("var n : rat = 0;\ntransition t : true;\ntransition t : true;\n");
  CHECK(e.message.find("duplicate transition") != std::string::npos);

  e = parse_error("theory euf;\nsort a;\nconst k : a;\nvar x : rat = 0;\n");
  CHECK(e.message.find("lra") != std::string::npos);

  e = parse_error("sort a;\nrelation R(a);\nconst k : a;\nvar x : a = k;\ntransition t : R(x^w, x^r);\n");
  CHECK(e.message.find("expects 1") != std::string::npos);

  e = parse_error("var n : rat = 0;\ntransition t : n^w = 1 $ 2;\n");
  CHECK(e.line == 2);
  CHECK(e.message.find("unexpected character") != std::string::npos);

  CHECK_THROWS_AS(parse_spec("theory lists;\nsort list;\n"), UnsupportedTheory);
  try {
    parse_spec("theory lia;\n");
  } catch (const UnsupportedTheory& u) {
    CHECK(u.message.find("EUF, LRA") != std::string::npos);
  }
}

TEST_CASE("property parse errors") {
  SpecFile s = example2();
  CHECK_THROWS_AS(parse_property("F [x^r = 0]", s), ParseError);
  CHECK_THROWS_AS(parse_property("F goal", s), ParseError);
  CHECK_THROWS_AS(parse_property("F [x = 0", s), ParseError);
  CHECK_THROWS_AS(parse_property("F [z = 0]", s), ParseError);
  CHECK_THROWS_AS(parse_property("let F = [x = 0]; F F", s), ParseError);
  CHECK_THROWS_AS(parse_property("F [x = 0] extra", s), ParseError);
}

TEST_CASE("configuration files and environment overrides") {
  RunConfig cfg;
  apply_config(cfg,
               "# comment\nsolver = /opt/z3\nsolver_args = -in -smt2\nbudget_nodes = 42\n"
               "budget_time_ms=1500\njobs = 3\nk = 4\ndepth = 9\nmax_depth = 7\n");
  CHECK(cfg.solver.binary == "/opt/z3");
  CHECK(cfg.solver.args == std::vector<std::string>{"-in", "-smt2"});
  CHECK(cfg.budget.max_nodes == 42);
  CHECK(cfg.budget.time == std::chrono::milliseconds(1500));
  CHECK(cfg.budget.max_depth == 7);
  CHECK(cfg.jobs == 3);
  CHECK(cfg.classify.k == 4);
  CHECK(cfg.classify.limit == 9);
  CHECK_THROWS_AS(apply_config(cfg, "colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(apply_config(cfg, "jobs = many\n"), ConfigError);
  CHECK_THROWS_AS(apply_config(cfg, "jobs\n"), ConfigError);

  const char* old_bin = std::getenv("SOLVER_BIN");
  std::string saved = old_bin ? old_bin : "";
  setenv("SOLVER_BIN", "/usr/local/bin/other", 1);
  apply_env(cfg);
  CHECK(cfg.solver.binary == "/usr/local/bin/other");
  CHECK(cfg.solver.args.empty());
  if (old_bin)
    setenv("SOLVER_BIN", saved.c_str(), 1);
  else
    unsetenv("SOLVER_BIN");
}

TEST_CASE("verdict JSON carries the witness trace and model facts") {
  SpecFile s = example2();
  Property psi = load_property(path("specs/example2_psi.ltl"), s);
  Gateway gw(s.dmt.ctx);
  ProductResult r = model_check(s.dmt, psi, gw);
  nlohmann::json j = verdict_json(s.dmt, psi, r.verdict);
  CHECK(j["outcome"] == "witnessFound");
  REQUIRE(j["trace"].size() == 2);
  CHECK(j["trace"][0]["transition"].is_null());
  CHECK(j["trace"][1]["transition"] == "xset");
  CHECK(j["trace"][1]["assignment"]["x"] == "4");
  CHECK(j["trace"][1]["assignment"]["s"] == "o2");
  const auto& tuples = j["modelFacts"]["relations"]["R"];
  std::string y = j["trace"][1]["assignment"]["y"];
  CHECK(std::find(tuples.begin(), tuples.end(), nlohmann::json{"4", y}) != tuples.end());
  CHECK(j["stats"]["checks"].get<int>() > 0);
  CHECK(j["stats"]["phases"].contains("update"));
}

TEST_CASE("bench rows") {
  RunConfig cfg;
  fs::path empty = fs::temp_directory_path() / "dmt_bench_empty";
  fs::create_directories(empty);
  CHECK(run_bench(empty.string(), cfg).empty());
  fs::remove_all(empty);

  BenchRow row = bench_bundle(path("bench/example2"), cfg);
  CHECK(row.error.empty());
  CHECK(row.id == "example2");
  CHECK(row.cls == "II");
  CHECK(row.transitions == 2);
  CHECK(row.guard_size == 7);
  CHECK(row.relations == 2);
  CHECK(row.properties == 5);
  CHECK(row.checks_total > 0);
  CHECK(row.checks_max >= row.checks_avg);
  std::string csv = to_csv(row);
  CHECK(csv.rfind("example2,II,2,7,2,0,4,5,", 0) == 0);

  fs::path broken = fs::temp_directory_path() / "dmt_bench_broken";
  fs::create_directories(broken / "bad");
  { std::ofstream(broken / "bad" / "spec.dmt") << "sort a;\n"; }
  auto rows = run_bench(broken.string(), cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].cls == "error");
  CHECK(rows[0].error.find("V nonempty") != std::string::npos);
  fs::remove_all(broken);
}
