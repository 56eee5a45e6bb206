#include <cstdlib>
#include <functional>
#include <sstream>

#include "dmt/smt.hpp"
#include "process.hpp"
#include "sexpr.hpp"

namespace dmt {

// ---------------------------------------------------------------- rendering

namespace {

std::string sort_symbol(const std::string& s) { return s == kRatSort ? "Real" : "|s." + s + "|"; }

std::string real_literal(const Rational& q) {
  auto mag = [](const mpz_class& z) { return z.get_str() + ".0"; };
  mpz_class num = q.get_num();
  bool neg = num < 0;
  if (neg) num = -num;
  std::string s = q.get_den() == 1 ? mag(num) : "(/ " + mag(num) + " " + mag(q.get_den()) + ")";
  return neg ? "(- " + s + ")" : s;
}

std::string linear_sum(const LinExpr& e) {
  std::vector<std::string> parts;
  for (const auto& [t, q] : e.terms())
    parts.push_back(q == 1 ? smt_term(t) : "(* " + real_literal(q) + " " + smt_term(t) + ")");
  if (e.constant() != 0 || parts.empty()) parts.push_back(real_literal(e.constant()));
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

void render(const Formula& f, std::ostringstream& os) {
  switch (f.kind()) {
    case Formula::Kind::True: os << "true"; return;
    case Formula::Kind::False: os << "false"; return;
    case Formula::Kind::Atom: {
      const Atom& a = f.as_atom();
      switch (a.kind()) {
        case Atom::Kind::Rel:
          if (a.args().empty()) {
            os << "|r." << a.relation_name() << "|";
          } else {
            os << "(|r." << a.relation_name() << "|";
            for (const auto& t : a.args()) os << " " << smt_term(t);
            os << ")";
          }
          return;
        case Atom::Kind::Eq:
          os << "(= " << smt_term(a.args()[0]) << " " << smt_term(a.args()[1]) << ")";
          return;
        case Atom::Kind::Lin: {
          const char* op = a.op() == LinOp::Eq ? "=" : a.op() == LinOp::Le ? "<=" : "<";
          os << "(" << op << " " << linear_sum(a.expr()) << " 0.0)";
          return;
        }
      }
      return;
    }
    case Formula::Kind::Not:
      os << "(not ";
      render(f.children()[0], os);
      os << ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << (f.kind() == Formula::Kind::And ? "(and" : "(or");
      for (const auto& c : f.children()) {
        os << " ";
        render(c, os);
      }
      os << ")";
      return;
    case Formula::Kind::Exists:
      os << "(exists (";
      for (const auto& v : f.bound()) os << "(" << smt_symbol(v) << " " << sort_symbol(v.sort) << ")";
      os << ") ";
      render(f.children()[0], os);
      os << ")";
      return;
  }
}

}  // namespace

std::string smt_symbol(const Var& v) {
  std::string s = "|v." + v.name;
  switch (v.annot) {
    case Annot::None: break;
    case Annot::Read: s += ".r"; break;
    case Annot::Write: s += ".w"; break;
    case Annot::Index: s += "." + std::to_string(v.index); break;
  }
  return s + "|";
}

std::string smt_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: return smt_symbol(t.var());
    case Term::Kind::Const: return "|c." + t.symbol() + "|";
    case Term::Kind::Num: return real_literal(t.value());
    case Term::Kind::App: {
      std::string s = "(|f." + t.symbol() + "|";
      for (const auto& a : t.args()) s += " " + smt_term(a);
      return s + ")";
    }
  }
  return {};
}

std::string smt_formula(const Formula& f) {
  std::ostringstream os;
  render(f, os);
  return os.str();
}

std::string to_string(SatVerdict v) {
  switch (v) {
    case SatVerdict::Sat: return "sat";
    case SatVerdict::Unsat: return "unsat";
    case SatVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------- stats

std::uint64_t SolverStats::max_phase_checks() const {
  std::uint64_t m = 0;
  for (const auto& [k, p] : phases) m = std::max(m, p.count);
  return m;
}

void StatsSink::record(const std::string& phase, std::chrono::nanoseconds d) {
  std::lock_guard lk(mu_);
  ++stats_.checks;
  stats_.wall += d;
  auto& p = stats_.phases[phase];
  ++p.count;
  p.time += d;
}

SolverStats StatsSink::snapshot() const {
  std::lock_guard lk(mu_);
  return stats_;
}

SolverStats StatsSink::reset() {
  std::lock_guard lk(mu_);
  SolverStats s = std::move(stats_);
  stats_ = {};
  return s;
}

SolverConfig SolverConfig::from_env() {
  SolverConfig c;
  c.apply_env();
  return c;
}

void SolverConfig::apply_env() {
  if (const char* b = std::getenv("SOLVER_BIN"); b && *b) {
    binary = b;
    args.clear();
  }
  if (const char* a = std::getenv("SOLVER_ARGS")) {
    args.clear();
    std::istringstream is(a);
    for (std::string w; is >> w;) args.push_back(w);
  }
}

// ---------------------------------------------------------------- gateway

namespace {

// Replace positively occurring existentials by fresh free variables.
Formula skolemize(const Formula& f) {
  if (f.quantifier_free()) return f;
  Formula g = to_nnf(f);
  std::function<Formula(const Formula&)> rec = [&](const Formula& h) -> Formula {
    switch (h.kind()) {
      case Formula::Kind::Exists: {
        std::map<Var, Term> s;
        for (const auto& b : h.bound()) s.emplace(b, Term::variable(Var::plain(fresh_name(b.name), b.sort)));
        return rec(substitute(h.children()[0], s));
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : h.children()) cs.push_back(rec(c));
        return h.kind() == Formula::Kind::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
      }
      default:
        return h;
    }
  };
  return rec(g);
}

Rational parse_real(const SExpr& e) {
  if (e.is_atom()) {
    try {
      return parse_rational(e.atom);
    } catch (const std::exception&) {
      throw SmtError("unexpected real value '" + e.atom + "'");
    }
  }
  if (e.list.empty() || !e.list[0].is_atom()) throw SmtError("unexpected real value " + e.str());
  const std::string& op = e.list[0].atom;
  if (op == "-" && e.list.size() == 2) return -parse_real(e.list[1]);
  if (op == "-" && e.list.size() == 3) return parse_real(e.list[1]) - parse_real(e.list[2]);
  if (op == "/" && e.list.size() == 3) return parse_real(e.list[1]) / parse_real(e.list[2]);
  if (op == "+" || op == "*") {
    Rational r = op == "+" ? 0 : 1;
    for (std::size_t i = 1; i < e.list.size(); ++i) {
      if (op == "+")
        r += parse_real(e.list[i]);
      else
        r *= parse_real(e.list[i]);
    }
    return r;
  }
  throw SmtError("unexpected real value " + e.str());
}

}  // namespace

Gateway::Gateway(TheoryContext ctx, SolverConfig cfg, std::shared_ptr<StatsSink> sink)
    : ctx_(std::move(ctx)), cfg_(std::move(cfg)), sink_(sink ? std::move(sink) : std::make_shared<StatsSink>()) {
  scopes_.emplace_back();
  restart();
}

Gateway::~Gateway() = default;

std::string Gateway::preamble() const {
  std::ostringstream os;
  os << "(set-option :print-success false)\n(set-option :produce-models true)\n(set-logic ALL)\n";
  const Signature& sig = ctx_.signature;
  for (const auto& s : sig.sorts())
    if (s.kind != SortKind::Rational) os << "(declare-sort " << sort_symbol(s.name) << " 0)\n";
  for (const auto& f : sig.functions()) {
    os << "(declare-fun |f." << f.name << "| (";
    for (std::size_t i = 0; i < f.args.size(); ++i) os << (i ? " " : "") << sort_symbol(f.args[i]);
    os << ") " << sort_symbol(f.result) << ")\n";
  }
  for (const auto& r : sig.relations()) {
    os << "(declare-fun |r." << r.name << "| (";
    for (std::size_t i = 0; i < r.args.size(); ++i) os << (i ? " " : "") << sort_symbol(r.args[i]);
    os << ") Bool)\n";
  }
  for (const auto& c : sig.constants()) os << "(declare-fun |c." << c.name << "| () " << sort_symbol(c.sort) << ")\n";
  for (const auto& g : ctx_.distinct) {
    if (g.size() < 2) continue;
    os << "(assert (distinct";
    for (const auto& c : g) os << " |c." << c << "|";
    os << "))\n";
  }
  for (const auto& f : ctx_.facts) os << "(assert " << smt_formula(f) << ")\n";
  return os.str();
}

void Gateway::restart() {
  proc_.reset();
  proc_ = std::make_unique<SolverProcess>(cfg_.binary, cfg_.args);
  std::string text = preamble();
  // replay open scopes
  std::vector<Scope> saved = std::move(scopes_);
  scopes_.clear();
  for (std::size_t i = 0; i < saved.size(); ++i) {
    if (i > 0) text += "(push 1)\n";
    scopes_.emplace_back();
    for (const auto& f : saved[i].asserted) text += declare_and_assert(f);
  }
  proc_->send(text);
}

std::string Gateway::declare_and_assert(const Formula& qf) {
  std::string text;
  for (const auto& v : free_variables(qf)) {
    bool known = false;
    for (const auto& s : scopes_) known = known || s.declared.count(v);
    if (known) continue;
    text += "(declare-fun " + smt_symbol(v) + " () " + sort_symbol(v.sort) + ")\n";
    scopes_.back().declared.insert(v);
  }
  text += "(assert " + smt_formula(qf) + ")\n";
  scopes_.back().asserted.push_back(qf);
  return text;
}

void Gateway::push() {
  proc_->send("(push 1)\n");
  scopes_.emplace_back();
}

void Gateway::pop() {
  if (scopes_.size() <= 1) throw SmtError("pop without push");
  proc_->send("(pop 1)\n");
  scopes_.pop_back();
}

void Gateway::add(const Formula& f) { proc_->send(declare_and_assert(skolemize(f))); }

SatResult Gateway::check(bool want_model) {
  auto start = std::chrono::steady_clock::now();
  SatResult res;
  proc_->send("(check-sat)\n");
  std::string reply;
  bool got = proc_->read_sexpr(reply, start + cfg_.timeout);
  sink_->record(phase_, std::chrono::steady_clock::now() - start);
  if (!got) {
    proc_->kill_now();
    restart();
    res.verdict = SatVerdict::Unknown;
    res.diagnostic = "timeout after " + std::to_string(cfg_.timeout.count()) + " ms";
    return res;
  }
  if (reply == "sat") {
    res.verdict = SatVerdict::Sat;
  } else if (reply == "unsat") {
    res.verdict = SatVerdict::Unsat;
  } else if (reply == "unknown") {
    res.verdict = SatVerdict::Unknown;
    res.diagnostic = "solver returned unknown";
  } else {
    // drop the offending scopes' content so the replay cannot repeat the error
    for (std::size_t i = 1; i < scopes_.size(); ++i) scopes_[i] = Scope{};
    proc_->kill_now();
    restart();
    throw SmtError("solver error: " + reply);
  }
  if (want_model && res.verdict == SatVerdict::Sat) {
    std::vector<Formula> all;
    for (const auto& s : scopes_) all.insert(all.end(), s.asserted.begin(), s.asserted.end());
    res.model = read_model(all);
  }
  return res;
}

std::optional<ModelFragment> Gateway::read_model(const std::vector<Formula>& fs) {
  Formula all = Formula::conj(fs);
  std::vector<Formula> with_facts = fs;
  with_facts.insert(with_facts.end(), ctx_.facts.begin(), ctx_.facts.end());
  Formula every = Formula::conj(with_facts);

  enum class Slot { Var, Const, App, Rel };
  struct Item {
    Slot slot;
    std::string sort;  // "Bool" for relation atoms
    std::optional<Var> var;
    std::optional<Term> term;
    std::optional<Atom> atom;
  };
  std::vector<Item> items;
  std::string request;
  for (const auto& v : free_variables(all)) {
    items.push_back({Slot::Var, v.sort, v, std::nullopt, std::nullopt});
    request += " " + smt_symbol(v);
  }
  std::set<std::string> consts = constants_of(every);
  for (const auto& c : ctx_.signature.constants()) {
    if (!consts.count(c.name)) continue;
    Term t = Term::constant(c.name, c.sort);
    items.push_back({Slot::Const, c.sort, std::nullopt, t, std::nullopt});
    request += " " + smt_term(t);
  }
  for (const auto& t : subterms_of(every)) {
    if (t.kind() != Term::Kind::App) continue;
    items.push_back({Slot::App, t.sort(), std::nullopt, t, std::nullopt});
    request += " " + smt_term(t);
    for (const auto& a : t.args()) {
      items.push_back({Slot::App, a.sort(), std::nullopt, a, std::nullopt});
      request += " " + smt_term(a);
    }
  }
  for (const auto& a : atoms_of(every)) {
    if (a.kind() != Atom::Kind::Rel) continue;
    items.push_back({Slot::Rel, "Bool", std::nullopt, std::nullopt, a});
    request += " " + smt_formula(Formula::atom(a));
    for (const auto& t : a.args()) {
      items.push_back({Slot::App, t.sort(), std::nullopt, t, std::nullopt});
      request += " " + smt_term(t);
    }
  }
  ModelFragment m;
  if (items.empty()) return m;

  proc_->send("(get-value (" + request + "))\n");
  std::string reply;
  if (!proc_->read_sexpr(reply, std::chrono::steady_clock::now() + cfg_.timeout)) {
    proc_->kill_now();
    restart();
    throw SolverUnknown("timeout while reading model");
  }
  SExpr e = parse_sexpr(reply);
  if (e.is_atom() || e.list.size() != items.size()) throw SmtError("unexpected get-value reply: " + reply.substr(0, 200));

  // raw element -> label; constants name their elements when possible
  std::map<std::string, std::map<std::string, std::string>> labels;  // sort -> raw -> label
  std::vector<std::pair<std::string, SExpr>> raw(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const SExpr& pair = e.list[i];
    if (pair.is_atom() || pair.list.size() != 2) throw SmtError("unexpected get-value entry: " + pair.str());
    raw[i] = {items[i].sort, pair.list[1]};
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].slot != Slot::Const || items[i].sort == kRatSort) continue;
    auto& l = labels[items[i].sort];
    l.emplace(raw[i].second.str(), items[i].term->symbol());
  }
  std::map<std::string, std::size_t> counters;
  auto value_of = [&](std::size_t i) -> Value {
    const auto& [sort, v] = raw[i];
    if (sort == kRatSort) return parse_real(v);
    auto& l = labels[sort];
    auto [it, fresh] = l.emplace(v.str(), "");
    if (fresh) it->second = sort + "#" + std::to_string(counters[sort]++);
    return it->second;
  };

  std::map<Term, Value> term_values;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    switch (it.slot) {
      case Slot::Var: m.variables[*it.var] = value_of(i); break;
      case Slot::Const: m.constants[it.term->symbol()] = value_of(i); break;
      case Slot::App: term_values.emplace(*it.term, value_of(i)); break;
      case Slot::Rel: break;
    }
  }
  auto tv = [&](const Term& t) -> Value {
    auto f = term_values.find(t);
    if (f != term_values.end()) return f->second;
    return evaluate(t, m);
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    if (it.slot == Slot::App && it.term->kind() == Term::Kind::App) {
      std::vector<Value> args;
      for (const auto& a : it.term->args()) args.push_back(tv(a));
      m.functions[it.term->symbol()][args] = term_values.at(*it.term);
    }
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Item& it = items[i];
    if (it.slot != Slot::Rel) continue;
    auto& rel = m.relations[it.atom->relation_name()];
    const SExpr& v = raw[i].second;
    if (!v.is_atom() || (v.atom != "true" && v.atom != "false")) throw SmtError("unexpected Boolean value " + v.str());
    if (v.atom == "true") {
      std::vector<Value> tuple;
      for (const auto& a : it.atom->args()) tuple.push_back(tv(a));
      rel.insert(std::move(tuple));
    }
  }
  for (const auto& r : ctx_.signature.relations()) m.relations.try_emplace(r.name);
  return m;
}

SatResult Gateway::check_sat(const Formula& f, bool want_model) {
  if (f.is_false()) {
    sink_->record(phase_, std::chrono::nanoseconds(0));
    return {SatVerdict::Unsat, std::nullopt, f, {}};
  }
  Formula g = skolemize(f);
  push();
  SatResult r;
  try {
    proc_->send(declare_and_assert(g));
    r = check(want_model);
  } catch (...) {
    if (proc_->alive() && scopes_.size() > 1) pop();
    throw;
  }
  pop();
  r.dispatched = g;
  return r;
}

bool Gateway::is_sat(const Formula& f) {
  SatResult r = check_sat(f);
  if (r.verdict == SatVerdict::Unknown) throw SolverUnknown(r.diagnostic);
  return r.verdict == SatVerdict::Sat;
}

bool Gateway::entails(const Formula& f, const Formula& g) {
  if (!g.quantifier_free()) throw SmtError("entailment target must be quantifier-free");
  return !is_sat(f && !g);
}

bool Gateway::check_equiv(const Formula& f, const Formula& g) {
  if (f == g) return true;
  if (!f.quantifier_free() || !g.quantifier_free()) throw SmtError("check_equiv needs quantifier-free formulas");
  return !is_sat((f && !g) || (!f && g));
}

// ---------------------------------------------------------------- pool

GatewayPool::GatewayPool(const TheoryContext& ctx, std::size_t size, SolverConfig cfg)
    : sink_(std::make_shared<StatsSink>()) {
  if (size == 0) size = 1;
  for (std::size_t i = 0; i < size; ++i) {
    all_.push_back(std::make_unique<Gateway>(ctx, cfg, sink_));
    free_.push_back(all_.back().get());
  }
}

GatewayPool::Lease GatewayPool::acquire() {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return !free_.empty(); });
  Gateway* g = free_.back();
  free_.pop_back();
  return Lease(*this, g);
}

GatewayPool::Lease::~Lease() {
  if (!g_) return;
  {
    std::lock_guard lk(p_->mu_);
    p_->free_.push_back(g_);
  }
  p_->cv_.notify_one();
}

}  // namespace dmt
