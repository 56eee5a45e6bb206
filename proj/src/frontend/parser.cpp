#include <cctype>
#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dmt/frontend.hpp"

namespace dmt {

ParseError::ParseError(const std::string& f, int l, int c, const std::string& msg)
    : std::runtime_error(f + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
      file(f),
      line(l),
      column(c),
      message(msg) {}

namespace {

enum class Tok : std::uint8_t { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(std::string_view s, const std::string& file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      t.kind = Tok::Number;
    } else {
      static const char* two[] = {"!=", "<=", ">=", ":="};
      t.kind = Tok::Punct;
      j = i + 1;
      for (const char* p : two)
        if (s.substr(i, 2) == p) j = i + 2;
      if (j == i + 1 && std::string_view("(){}[],;:.+-*/=<>!&|^").find(c) == std::string_view::npos)
        throw ParseError(file, line, col, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(s.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Pulls existentials out of a conjunction, (exists u. A) & B becoming
// exists u. (A & B); nullopt when f is not a constraint or names clash.
std::optional<Formula> as_constraint(const Formula& f) {
  std::vector<Var> bound;
  std::vector<Formula> lits;
  std::set<std::string> names;
  for (const auto& v : free_variables(f)) names.insert(v.name);
  bool ok = true;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (!ok) return;
    if (g.is_literal()) {
      lits.push_back(g);
    } else if (g.kind() == Formula::Kind::And) {
      for (const auto& c : g.children()) self(self, c);
    } else if (g.kind() == Formula::Kind::Exists) {
      for (const auto& v : g.bound()) {
        ok = ok && names.insert(v.name).second;
        bound.push_back(v);
      }
      self(self, g.children()[0]);
    } else if (!g.is_true()) {
      ok = false;
    }
  };
  walk(walk, f);
  if (!ok) return std::nullopt;
  Formula body = Formula::conj(std::move(lits));
  return bound.empty() ? body : Formula::exists(std::move(bound), body);
}

// A parsed term: atomic, or a linear combination when rational.
struct Expr {
  std::string sort;
  std::optional<Term> atomic;
  LinExpr lin;

  bool rat() const { return sort == kRatSort; }
};

Expr of_term(const Term& t) {
  Expr e{t.sort(), t, {}};
  if (t.is_rat()) e.lin = LinExpr(t);
  return e;
}

Expr of_lin(LinExpr l) {
  Expr e{kRatSort, std::nullopt, std::move(l)};
  if (e.lin.is_constant())
    e.atomic = Term::number(e.lin.constant());
  else if (e.lin.terms().size() == 1 && e.lin.constant() == 0 && e.lin.terms()[0].second == 1)
    e.atomic = e.lin.terms()[0].first;
  return e;
}

class Parser {
 public:
  Parser(std::string_view text, std::string file) : file_(std::move(file)), toks_(lex(text, file_)) {}

  SpecFile spec();
  Formula formula_only(const SpecFile& s, bool guard);
  Property property_file(const SpecFile& s);

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(const std::string& p, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind != Tok::End && t.kind != Tok::Number && t.text == p;
  }
  bool accept(const std::string& p) {
    if (!at(p)) return false;
    ++pos_;
    return true;
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail(peek(), "expected '" + p + "', found " + describe(peek()));
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail(peek(), "expected " + what + ", found " + describe(peek()));
    return toks_[pos_++].text;
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(file_, t.line, t.col, msg);
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()));
  }

  // declarations
  void theory_decl();
  std::string sort_ref();
  void need_arith(const Token& t) const;
  void declare(const Token& at, const std::function<void()>& f);

  // formulas
  Formula disjunction();
  Formula conjunction();
  Formula unary();
  Formula atom();
  Formula relation_atom(const Token& name);
  Expr sum();
  Expr product();
  Expr factor();
  Expr primary();
  Term as_argument(const Expr& e, const Token& at) const;
  std::vector<Expr> arguments();

  // properties
  Property p_or();
  Property p_and();
  Property p_until();
  Property p_unary();
  Property leaf(const Token& at);

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  SpecFile* out_ = nullptr;          // while parsing a spec
  const SpecFile* spec_ = nullptr;  // symbol tables
  bool guard_ = false;
  bool decls_started_ = false;
  std::vector<Var> bound_;
  std::map<std::string, Property> lets_;
};

void Parser::declare(const Token& at, const std::function<void()>& f) {
  try {
    f();
  } catch (const LogicError& e) {
    fail(at, e.what());
  }
}

void Parser::need_arith(const Token& t) const {
  if (!spec_->dmt.ctx.arithmetic) fail(t, "arithmetic requires theory lra or euf+lra");
}

std::string Parser::sort_ref() {
  const Token& t = peek();
  std::string s = ident("sort");
  if (s == kRatSort) {
    need_arith(t);
    return s;
  }
  if (!spec_->dmt.ctx.signature.find_sort(s)) fail(t, "undeclared sort " + s);
  return s;
}

void Parser::theory_decl() {
  const Token& t = peek();
  if (decls_started_) fail(t, "theory must precede all declarations");
  std::string name = ident("theory");
  while (accept("+")) name += "+" + ident("theory");
  if (name == "lra+euf") name = "euf+lra";
  if (name != "euf" && name != "lra" && name != "euf+lra")
    throw UnsupportedTheory(file_, t.line, t.col,
                            "theory '" + name + "' is not supported: only EUF, LRA and their combination euf+lra");
  expect(";");
  out_->theory = name;
  out_->dmt.ctx.arithmetic = name != "euf";
}

SpecFile Parser::spec() {
  SpecFile s;
  s.theory = "euf+lra";
  s.dmt.ctx.arithmetic = true;
  out_ = &s;
  spec_ = &s;
  Signature& sig = s.dmt.ctx.signature;
  auto start_decls = [&] {
    if (decls_started_) return;
    decls_started_ = true;
    if (s.dmt.ctx.arithmetic) sig.add_sort({kRatSort, SortKind::Rational});
  };
  auto names = [&](const std::string& what) {
    std::vector<std::pair<Token, std::string>> out;
    do {
      Token t = peek();
      out.emplace_back(t, ident(what));
    } while (accept(","));
    return out;
  };

  if (accept("dmt")) {
    s.dmt.name = ident("process name");
    expect(";");
  }
  while (peek().kind != Tok::End) {
    const Token kw = peek();
    if (accept("theory")) {
      theory_decl();
      continue;
    }
    start_decls();
    if (accept("sort")) {
      for (const auto& [t, n] : names("sort name")) {
        if (n == kRatSort) fail(t, "sort rat is built in");
        declare(t, [&] { sig.add_sort({n}); });
      }
      expect(";");
    } else if (accept("const")) {
      auto ns = names("constant name");
      expect(":");
      std::string so = sort_ref();
      for (const auto& [t, n] : ns) {
        if (sig.find_constant(n)) fail(t, "duplicate constant " + n);
        declare(t, [&] { sig.add_constant({n, so}); });
      }
      expect(";");
    } else if (accept("distinct")) {
      std::vector<std::string> group;
      std::string so;
      for (const auto& [t, n] : names("constant name")) {
        const auto* c = sig.find_constant(n);
        if (!c) fail(t, "undeclared constant " + n);
        if (!so.empty() && c->sort != so) fail(t, "distinct constants of different sorts");
        so = c->sort;
        group.push_back(n);
      }
      expect(";");
      s.dmt.ctx.distinct.push_back(std::move(group));
    } else if (accept("function")) {
      Token t = peek();
      std::string n = ident("function name");
      FunctionDecl f{n, {}, {}};
      expect("(");
      if (!at(")")) {
        do f.args.push_back(sort_ref());
        while (accept(","));
      }
      expect(")");
      expect(":");
      f.result = sort_ref();
      expect(";");
      declare(t, [&] { sig.add_function(f); });
    } else if (accept("relation")) {
      Token t = peek();
      std::string n = ident("relation name");
      expect("(");
      bool keyed = accept("key");
      std::vector<std::string> args;
      do args.push_back(sort_ref());
      while (accept(","));
      expect(")");
      expect(";");
      if (!keyed) {
        declare(t, [&] { sig.add_relation({n, args}); });
        continue;
      }
      KeyedRelation k{n, args[0], {args.begin() + 1, args.end()}};
      declare(t, [&] {
        sig.add_relation({n, {k.key_sort}});
        for (std::size_t i = 0; i < k.attributes.size(); ++i)
          sig.add_function({k.attribute_function(i), {k.key_sort}, k.attributes[i]});
      });
      s.keyed.emplace(n, std::move(k));
    } else if (accept("states")) {
      if (s.control) fail(kw, "only one control-state declaration is allowed");
      ControlStates c;
      Token vt = peek();
      c.variable = ident("control variable");
      expect(":");
      Token st = peek();
      c.sort = ident("sort");
      if (!sig.find_sort(c.sort)) declare(st, [&] { sig.add_sort({c.sort}); });
      if (sig.find_sort(c.sort)->kind != SortKind::Uninterpreted) fail(st, "control states need an uninterpreted sort");
      expect("{");
      for (const auto& [t, n] : names("state name")) {
        if (sig.find_constant(n)) fail(t, "duplicate constant " + n);
        declare(t, [&] { sig.add_constant({n, c.sort}); });
        c.states.push_back(n);
      }
      expect("}");
      expect(";");
      s.dmt.ctx.distinct.push_back(c.states);
      declare(vt, [&] { sig.add_variable({c.variable, c.sort}); });
      s.dmt.initial.insert_or_assign(c.variable, Term::constant(c.states[0], c.sort));
      s.control = std::move(c);
    } else if (accept("var")) {
      Token t = peek();
      std::string n = ident("variable name");
      expect(":");
      std::string so = sort_ref();
      expect("=");
      Token it = peek();
      guard_ = false;
      Expr e = sum();
      if (!e.atomic || !(e.atomic->kind() == Term::Kind::Const || e.atomic->is_num()))
        fail(it, "initial value must be a constant or a numeral");
      if (e.sort != so) fail(it, "initial value of " + n + " has sort " + e.sort + ", expected " + so);
      expect(";");
      declare(t, [&] { sig.add_variable({n, so}); });
      s.dmt.initial.insert_or_assign(n, *e.atomic);
    } else if (accept("transition")) {
      Token t = peek();
      Transition tr;
      tr.name = ident("transition name");
      for (const auto& o : s.dmt.transitions)
        if (o.name == tr.name) fail(t, "duplicate transition " + tr.name);
      std::vector<Formula> parts;
      if (accept("from")) {
        if (!s.control) fail(t, "'from' needs a states declaration");
        const ControlStates& c = *s.control;
        auto state = [&]() {
          Token st = peek();
          std::string n = ident("state");
          if (std::find(c.states.begin(), c.states.end(), n) == c.states.end()) fail(st, "unknown control state " + n);
          return Term::constant(n, c.sort);
        };
        parts.push_back(Formula::eq(Term::variable(Var::read(c.variable, c.sort)), state()));
        expect("to");
        parts.push_back(Formula::eq(Term::variable(Var::write(c.variable, c.sort)), state()));
      }
      expect(":");
      guard_ = true;
      parts.push_back(disjunction());
      expect(";");
      tr.guard = Formula::conj(std::move(parts));
      declare(t, [&] { check_well_sorted(sig, tr.guard); });
      s.dmt.transitions.push_back(std::move(tr));
    } else if (accept("fact")) {
      Token t = peek();
      guard_ = false;
      Formula f = disjunction();
      expect(";");
      if (!free_variables(f).empty()) fail(t, "facts must be ground");
      s.dmt.ctx.facts.push_back(f);
    } else {
      fail(kw, "expected a declaration, found " + describe(kw));
    }
  }
  start_decls();
  try {
    s.dmt.validate();
  } catch (const LogicError& e) {
    fail(peek(), e.what());
  }
  out_ = nullptr;
  return s;
}

// ---------------------------------------------------------------- formulas

Formula Parser::disjunction() {
  std::vector<Formula> fs{conjunction()};
  while (accept("|")) fs.push_back(conjunction());
  return fs.size() == 1 ? fs[0] : Formula::disj(std::move(fs));
}

Formula Parser::conjunction() {
  std::vector<Formula> fs{unary()};
  while (accept("&")) fs.push_back(unary());
  return fs.size() == 1 ? fs[0] : Formula::conj(std::move(fs));
}

Formula Parser::unary() {
  if (accept("!")) return !unary();
  if (accept("true")) return Formula::top();
  if (accept("false")) return Formula::bottom();
  if (accept("exists")) {
    std::vector<Var> vs;
    do {
      expect("(");
      Token t = peek();
      std::string n = ident("bound variable");
      expect(":");
      std::string so = sort_ref();
      expect(")");
      if (std::find_if(vs.begin(), vs.end(), [&](const Var& v) { return v.name == n; }) != vs.end())
        fail(t, "variable " + n + " bound twice");
      vs.push_back(Var::plain(n, so));
    } while (at("("));
    accept(".");
    const std::size_t depth = bound_.size();
    bound_.insert(bound_.end(), vs.begin(), vs.end());
    Formula body = disjunction();
    bound_.resize(depth);
    return Formula::exists(std::move(vs), body);
  }
  if (at("(")) {
    // a parenthesized formula, or a comparison starting with a term in parens
    const std::size_t save = pos_;
    const std::size_t depth = bound_.size();
    try {
      ++pos_;
      Formula f = disjunction();
      expect(")");
      return f;
    } catch (const ParseError&) {
      pos_ = save;
      bound_.resize(depth);
    }
  }
  return atom();
}

Formula Parser::relation_atom(const Token& name) {
  const Signature& sig = spec_->dmt.ctx.signature;
  auto args = arguments();
  std::vector<Term> ts;
  for (const auto& a : args) ts.push_back(as_argument(a, name));
  if (auto k = spec_->keyed.find(name.text); k != spec_->keyed.end()) {
    const KeyedRelation& kr = k->second;
    // R(k) alone is the membership atom
    if (ts.size() == 1 && ts[0].sort() == kr.key_sort) return Formula::relation(kr.name, std::move(ts));
    if (ts.size() != kr.attributes.size() + 1)
      fail(name, "keyed relation " + kr.name + " expects " + std::to_string(kr.attributes.size() + 1) + " arguments");
    if (ts[0].sort() != kr.key_sort) fail(name, "key of " + kr.name + " must have sort " + kr.key_sort);
    std::vector<Formula> fs{Formula::relation(kr.name, {ts[0]})};
    for (std::size_t i = 0; i < kr.attributes.size(); ++i) {
      if (ts[i + 1].sort() != kr.attributes[i])
        fail(name, "argument " + std::to_string(i + 2) + " of " + kr.name + " must have sort " + kr.attributes[i]);
      fs.push_back(Formula::eq(Term::app(kr.attribute_function(i), {ts[0]}, kr.attributes[i]), ts[i + 1]));
    }
    return Formula::conj(std::move(fs));
  }
  const auto* r = sig.find_relation(name.text);
  if (ts.size() != r->args.size())
    fail(name, "relation " + r->name + " expects " + std::to_string(r->args.size()) + " arguments");
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i].sort() != r->args[i])
      fail(name, "argument " + std::to_string(i + 1) + " of " + r->name + " must have sort " + r->args[i]);
  return Formula::relation(r->name, std::move(ts));
}

Formula Parser::atom() {
  const Token t = peek();
  if (t.kind == Tok::Ident && at("(", 1) &&
      (spec_->dmt.ctx.signature.find_relation(t.text) || spec_->keyed.count(t.text))) {
    ++pos_;
    return relation_atom(t);
  }
  Expr lhs = sum();
  const Token op = peek();
  static const std::vector<std::string> ops = {"=", "!=", "<", "<=", ">", ">="};
  if (op.kind != Tok::Punct || std::find(ops.begin(), ops.end(), op.text) == ops.end())
    fail(op, "expected a comparison, found " + describe(op));
  ++pos_;
  Expr rhs = sum();
  if (lhs.sort != rhs.sort) fail(op, "comparison between sorts " + lhs.sort + " and " + rhs.sort);
  if (lhs.rat()) {
    Cmp c = op.text == "=" ? Cmp::Eq
            : op.text == "!=" ? Cmp::Ne
            : op.text == "<"  ? Cmp::Lt
            : op.text == "<=" ? Cmp::Le
            : op.text == ">"  ? Cmp::Gt
                              : Cmp::Ge;
    return Formula::arith(lhs.lin, c, rhs.lin);
  }
  if (op.text != "=" && op.text != "!=") fail(op, "order comparison on sort " + lhs.sort);
  Formula e = Formula::eq(*lhs.atomic, *rhs.atomic);
  return op.text == "=" ? e : !e;
}

Term Parser::as_argument(const Expr& e, const Token& at) const {
  if (!e.atomic) fail(at, "arithmetic expressions cannot be arguments");
  return *e.atomic;
}

std::vector<Expr> Parser::arguments() {
  std::vector<Expr> out;
  expect("(");
  if (accept(")")) return out;
  do out.push_back(sum());
  while (accept(","));
  expect(")");
  return out;
}

Expr Parser::sum() {
  Token t = peek();
  Expr e = product();
  while (at("+") || at("-")) {
    Token op = toks_[pos_++];
    Expr r = product();
    if (!e.rat() || !r.rat()) fail(op, "'" + op.text + "' on a non-rational term");
    e = of_lin(op.text == "+" ? e.lin + r.lin : e.lin - r.lin);
  }
  return e;
}

Expr Parser::product() {
  Expr e = factor();
  while (at("*") || at("/")) {
    Token op = toks_[pos_++];
    Expr r = factor();
    if (!e.rat() || !r.rat()) fail(op, "'" + op.text + "' on a non-rational term");
    if (op.text == "/") {
      if (!r.lin.is_constant() || r.lin.constant() == 0) fail(op, "division by a non-constant or zero");
      e = of_lin(e.lin.scaled(1 / r.lin.constant()));
    } else if (r.lin.is_constant()) {
      e = of_lin(e.lin.scaled(r.lin.constant()));
    } else if (e.lin.is_constant()) {
      e = of_lin(r.lin.scaled(e.lin.constant()));
    } else {
      fail(op, "nonlinear product");
    }
  }
  return e;
}

Expr Parser::factor() {
  if (at("-")) {
    Token op = toks_[pos_++];
    Expr e = factor();
    if (!e.rat()) fail(op, "negation of a non-rational term");
    return of_lin(-e.lin);
  }
  return primary();
}

Expr Parser::primary() {
  const Token t = peek();
  if (t.kind == Tok::Number) {
    need_arith(t);
    ++pos_;
    return of_lin(LinExpr(parse_rational(t.text)));
  }
  if (accept("(")) {
    Expr e = sum();
    expect(")");
    return e;
  }
  std::string n = ident("term");
  const Signature& sig = spec_->dmt.ctx.signature;
  if (accept("^")) {
    Token a = peek();
    std::string which = ident("r or w");
    if (which != "r" && which != "w") fail(a, "expected ^r or ^w");
    if (!guard_) fail(t, "read/write copies are only allowed in transition guards");
    const auto* v = sig.find_variable(n);
    if (!v) fail(t, "undeclared variable " + n);
    return of_term(Term::variable(which == "r" ? Var::read(n, v->sort) : Var::write(n, v->sort)));
  }
  if (at("(")) {
    const auto* f = sig.find_function(n);
    if (!f) fail(t, sig.find_relation(n) || spec_->keyed.count(n) ? "relation " + n + " used as a term"
                                                                   : "undeclared function " + n);
    auto args = arguments();
    if (args.size() != f->args.size())
      fail(t, "function " + n + " expects " + std::to_string(f->args.size()) + " arguments");
    std::vector<Term> ts;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Term a = as_argument(args[i], t);
      if (a.sort() != f->args[i])
        fail(t, "argument " + std::to_string(i + 1) + " of " + n + " must have sort " + f->args[i]);
      ts.push_back(std::move(a));
    }
    return of_term(Term::app(n, std::move(ts), f->result));
  }
  for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
    if (it->name == n) return of_term(Term::variable(*it));
  if (const auto* v = sig.find_variable(n)) {
    if (guard_) fail(t, "variable " + n + " needs ^r or ^w in a guard");
    if (out_) fail(t, "state variable " + n + " is not allowed here");
    return of_term(Term::variable(Var::plain(n, v->sort)));
  }
  if (const auto* c = sig.find_constant(n)) return of_term(Term::constant(n, c->sort));
  fail(t, "undeclared symbol " + n);
}

Formula Parser::formula_only(const SpecFile& s, bool guard) {
  spec_ = &s;
  guard_ = guard;
  Formula f = disjunction();
  expect_end();
  try {
    check_well_sorted(s.dmt.ctx.signature, f);
  } catch (const LogicError& e) {
    fail(toks_.front(), e.what());
  }
  return f;
}

// ---------------------------------------------------------------- properties

Property Parser::leaf(const Token& at) {
  Formula f = disjunction();
  expect("]");
  if (f.is_false()) return Property::bottom();
  auto c = as_constraint(f);
  if (!c)
    fail(at, "a constraint is a conjunction of literals under optional existentials with distinct variable names");
  return Property::leaf(*c);
}

Property Parser::p_unary() {
  const Token t = peek();
  if (accept("X")) return Property::next(p_unary());
  if (accept("G")) return Property::globally(p_unary());
  if (accept("F")) return Property::eventually(p_unary());
  if (accept("true")) return Property::top();
  if (accept("false")) return Property::bottom();
  if (accept("[")) return leaf(t);
  if (accept("(")) {
    Property p = p_or();
    expect(")");
    return p;
  }
  if (t.kind == Tok::Ident) {
    auto it = lets_.find(t.text);
    if (it == lets_.end()) fail(t, "undefined constraint " + t.text);
    ++pos_;
    return it->second;
  }
  fail(t, "expected a property, found " + describe(t));
}

Property Parser::p_until() {
  Property a = p_unary();
  if (accept("U")) return Property::until(a, p_until());
  return a;
}

Property Parser::p_and() {
  std::vector<Property> ps{p_until()};
  while (accept("&")) ps.push_back(p_until());
  return ps.size() == 1 ? ps[0] : Property::conj(std::move(ps));
}

Property Parser::p_or() {
  std::vector<Property> ps{p_and()};
  while (accept("|")) ps.push_back(p_and());
  return ps.size() == 1 ? ps[0] : Property::disj(std::move(ps));
}

Property Parser::property_file(const SpecFile& s) {
  spec_ = &s;
  guard_ = false;
  while (accept("let")) {
    Token t = peek();
    std::string n = ident("constraint name");
    static const std::set<std::string> reserved = {"X", "G", "F", "U", "true", "false", "let"};
    if (reserved.count(n)) fail(t, "reserved name " + n);
    if (lets_.count(n)) fail(t, "constraint " + n + " defined twice");
    expect("=");
    Token b = peek();
    expect("[");
    lets_.emplace(n, leaf(b));
    expect(";");
  }
  Property p = p_or();
  accept(";");
  expect_end();
  for (const auto& f : leaves(p)) {
    try {
      check_well_sorted(s.dmt.ctx.signature, f);
    } catch (const LogicError& e) {
      fail(toks_.front(), e.what());
    }
  }
  return p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

SpecFile parse_spec(std::string_view text, const std::string& file) { return Parser(text, file).spec(); }

SpecFile load_spec(const std::string& path) { return parse_spec(read_file(path), path); }

Formula parse_formula(std::string_view text, const SpecFile& spec, bool guard, const std::string& file) {
  return Parser(text, file).formula_only(spec, guard);
}

Property parse_property(std::string_view text, const SpecFile& spec, const std::string& file) {
  return Parser(text, file).property_file(spec);
}

Property load_property(const std::string& path, const SpecFile& spec) {
  return parse_property(read_file(path), spec, path);
}

std::size_t guard_size(const Dmt& d) {
  std::size_t n = 0;
  for (const auto& t : d.transitions) n += literal_count(t.guard);
  return n;
}

}  // namespace dmt
