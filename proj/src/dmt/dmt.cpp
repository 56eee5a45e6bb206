#include "dmt/dmt.hpp"

#include <functional>

#include "dmt/qe.hpp"

namespace dmt {

std::vector<Var> Dmt::variables() const {
  std::vector<Var> out;
  for (const auto& v : ctx.signature.variables()) out.push_back(Var::plain(v.name, v.sort));
  return out;
}

const Transition& Dmt::transition(const std::string& n) const {
  for (const auto& t : transitions)
    if (t.name == n) return t;
  throw LogicError("unknown transition " + n);
}

void Dmt::validate() const {
  const Signature& sig = ctx.signature;
  sig.validate();
  for (const auto& v : sig.variables()) {
    auto it = initial.find(v.name);
    if (it == initial.end()) throw LogicError("variable " + v.name + " has no initial value");
    const Term& t = it->second;
    if (t.kind() != Term::Kind::Const && t.kind() != Term::Kind::Num)
      throw LogicError("initial value of " + v.name + " is not a constant: " + to_string(t));
    if (t.sort() != v.sort)
      throw LogicError("initial value of " + v.name + " has sort " + t.sort() + ", expected " + v.sort);
    if (t.kind() == Term::Kind::Const && !sig.find_constant(t.symbol()))
      throw LogicError("undeclared constant " + t.symbol());
  }
  for (const auto& [n, t] : initial)
    if (!sig.find_variable(n)) throw LogicError("initial value for undeclared variable " + n);
  std::set<std::string> names;
  for (const auto& t : transitions) {
    if (t.name.empty()) throw LogicError("transition without a name");
    if (!names.insert(t.name).second) throw LogicError("duplicate transition " + t.name);
    check_well_sorted(sig, t.guard);
    for (const auto& v : free_variables(t.guard)) {
      if (v.annot != Annot::Read && v.annot != Annot::Write)
        throw LogicError("transition " + t.name + ": variable " + to_string(v) + " is neither read nor written");
      const auto* d = sig.find_variable(v.name);
      if (!d) throw LogicError("transition " + t.name + ": undeclared variable " + v.name);
      if (d->sort != v.sort) throw LogicError("transition " + t.name + ": variable " + v.name + " used with sort " + v.sort);
    }
  }
}

std::set<std::string> written(const Formula& guard) {
  std::set<std::string> out;
  for (const auto& v : free_variables(guard))
    if (v.annot == Annot::Write) out.insert(v.name);
  return out;
}

Formula extended_transition(const Dmt& d, const Transition& t) {
  auto w = written(t.guard);
  std::vector<Formula> fs{t.guard};
  for (const auto& v : d.variables())
    if (!w.count(v.name))
      fs.push_back(Formula::eq(Term::variable(v.with(Annot::Write)), Term::variable(v.with(Annot::Read))));
  return Formula::conj(std::move(fs));
}

Formula initial_formula(const Dmt& d, unsigned i) {
  std::vector<Formula> fs;
  for (const auto& v : d.variables()) fs.push_back(Formula::eq(Term::variable(v.with(Annot::Index, i)), d.initial.at(v.name)));
  return Formula::conj(std::move(fs));
}

namespace {

Formula conj_of(const ConstraintSet& s) { return Formula::conj(std::vector<Formula>(s.begin(), s.end())); }

}  // namespace

HistoryFormula history(const Dmt& d, const std::vector<std::string>& sigma, const Word& w) {
  if (w.size() != sigma.size() + 1)
    throw LogicError("history: word has " + std::to_string(w.size()) + " symbols for " + std::to_string(sigma.size()) +
                     " transitions");
  std::vector<Formula> fs{initial_formula(d, 0), rename_to_index(conj_of(w[0]), 0)};
  for (unsigned i = 0; i < sigma.size(); ++i) {
    fs.push_back(instantiate_transition(extended_transition(d, d.transition(sigma[i])), i, i + 1));
    fs.push_back(rename_to_index(conj_of(w[i + 1]), i + 1));
  }
  return {Formula::conj(std::move(fs)), static_cast<unsigned>(sigma.size()), sigma, w};
}

Formula history_exists(const Dmt& d, const std::vector<std::string>& sigma, const Word& w, Gateway* gw) {
  HistoryFormula h = history(d, sigma, w);
  std::vector<Var> elim;
  for (unsigned i = 0; i < h.length; ++i)
    for (const auto& v : d.variables()) elim.push_back(v.with(Annot::Index, i));
  return rename_from_index(eliminate(elim, h.formula, gw), h.length);
}

Formula update(const Dmt& d, const Formula& phi, const Transition& t, Gateway* gw) {
  if (phi.is_false()) return phi;
  Formula f = rename_to_index(phi, 0) && instantiate_transition(extended_transition(d, t), 0, 1);
  std::vector<Var> elim;
  for (const auto& v : d.variables()) elim.push_back(v.with(Annot::Index, 0));
  return rename_from_index(eliminate(elim, f, gw), 1);
}

std::string to_string(const Run& r) {
  auto state = [](const std::map<Var, Value>& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, x] : s) {
      out += (first ? "" : ", ") + v.name + "=" + to_string(x);
      first = false;
    }
    return out + "}";
  };
  std::string out;
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    if (i > 0) out += " -" + r.transitions[i - 1] + "-> ";
    out += state(r.states[i]);
  }
  return out;
}

Run decode_run(const Dmt& d, const ModelFragment& model, const std::vector<std::string>& sigma, unsigned n) {
  if (sigma.size() != n) throw LogicError("decode_run: " + std::to_string(sigma.size()) + " transitions for length " + std::to_string(n));
  Run r;
  r.transitions = sigma;
  r.model = model;
  for (unsigned i = 0; i <= n; ++i) {
    std::map<Var, Value> s;
    for (const auto& v : d.variables()) {
      auto it = model.variables.find(v.with(Annot::Index, i));
      if (it == model.variables.end()) throw ModelInsufficient("decode_run: no value for " + to_string(v.with(Annot::Index, i)));
      s.emplace(v, it->second);
    }
    r.states.push_back(std::move(s));
  }
  return r;
}

std::string check_run(const Dmt& d, const Run& r) {
  if (r.states.size() != r.transitions.size() + 1) return "run has mismatched states and transitions";
  for (const auto& v : d.variables()) {
    auto it = r.states[0].find(v);
    if (it == r.states[0].end()) return "initial state lacks " + v.name;
    try {
      if (!(evaluate(d.initial.at(v.name), r.model) == it->second))
        return "initial value of " + v.name + " is " + to_string(it->second);
    } catch (const ModelInsufficient& e) {
      return std::string("initial value of ") + v.name + ": " + e.what();
    }
  }
  for (std::size_t i = 0; i < r.transitions.size(); ++i) {
    ModelFragment m = r.model;
    for (const auto& v : d.variables()) {
      auto pre = r.states[i].find(v), post = r.states[i + 1].find(v);
      if (pre == r.states[i].end() || post == r.states[i + 1].end()) return "state " + std::to_string(i) + " lacks " + v.name;
      m.variables[v.with(Annot::Read)] = pre->second;
      m.variables[v.with(Annot::Write)] = post->second;
    }
    try {
      const Transition& t = d.transition(r.transitions[i]);
      if (!evaluate_closed(extended_transition(d, t), m, d.ctx.signature))
        return "step " + std::to_string(i + 1) + " violates " + t.name;
    } catch (const std::exception& e) {
      return "step " + std::to_string(i + 1) + ": " + e.what();
    }
  }
  return {};
}

namespace {

using Domain = std::map<std::string, std::set<Value>>;

Domain active_domain(const ModelFragment& m, const Signature& sig) {
  Domain d;
  for (const auto& [c, v] : m.constants)
    if (const auto* decl = sig.find_constant(c)) d[decl->sort].insert(v);
  for (const auto& [x, v] : m.variables) d[x.sort].insert(v);
  for (const auto& [r, tuples] : m.relations)
    if (const auto* decl = sig.find_relation(r))
      for (const auto& tup : tuples)
        for (std::size_t i = 0; i < tup.size() && i < decl->args.size(); ++i) d[decl->args[i]].insert(tup[i]);
  for (const auto& [f, table] : m.functions)
    if (const auto* decl = sig.find_function(f))
      for (const auto& [args, res] : table) {
        for (std::size_t i = 0; i < args.size() && i < decl->args.size(); ++i) d[decl->args[i]].insert(args[i]);
        d[decl->result].insert(res);
      }
  return d;
}

constexpr std::size_t kMaxCandidates = 1u << 20;

bool eval_rec(const Formula& f, ModelFragment& m, const Domain& dom) {
  if (f.quantifier_free()) return evaluate(f, m);
  switch (f.kind()) {
    case Formula::Kind::Not: return !eval_rec(f.children()[0], m, dom);
    case Formula::Kind::And:
      for (const auto& c : f.children())
        if (!eval_rec(c, m, dom)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children())
        if (eval_rec(c, m, dom)) return true;
      return false;
    case Formula::Kind::Exists: break;
    default: return evaluate(f, m);
  }
  std::vector<Var> bound(f.bound().begin(), f.bound().end());
  std::vector<std::vector<Value>> choices;
  std::size_t total = 1;
  for (const auto& b : bound) {
    auto it = dom.find(b.sort);
    if (it == dom.end() || it->second.empty()) return false;
    choices.emplace_back(it->second.begin(), it->second.end());
    total *= choices.back().size();
    if (total > kMaxCandidates) throw ModelInsufficient("existential over too many candidate values");
  }
  std::map<Var, std::optional<Value>> saved;
  for (const auto& b : bound) {
    auto it = m.variables.find(b);
    saved[b] = it == m.variables.end() ? std::nullopt : std::optional<Value>(it->second);
  }
  bool found = false;
  std::optional<std::string> insufficient;
  for (std::size_t n = 0; n < total && !found; ++n) {
    std::size_t k = n;
    for (std::size_t i = 0; i < bound.size(); ++i) {
      m.variables[bound[i]] = choices[i][k % choices[i].size()];
      k /= choices[i].size();
    }
    try {
      found = eval_rec(f.children()[0], m, dom);
    } catch (const ModelInsufficient& e) {
      insufficient = e.what();
    }
  }
  for (const auto& [b, v] : saved) {
    if (v)
      m.variables[b] = *v;
    else
      m.variables.erase(b);
  }
  if (!found && insufficient) throw ModelInsufficient(*insufficient);
  return found;
}

}  // namespace

bool evaluate_closed(const Formula& f, const ModelFragment& m, const Signature& sig) {
  if (f.quantifier_free()) return evaluate(f, m);
  ModelFragment w = m;
  return eval_rec(f, w, active_domain(m, sig));
}

bool evaluate_property(const Run& r, const Property& p, const Signature& sig) {
  if (r.states.empty()) throw LogicError("evaluate_property: empty run");
  const std::size_t n = r.states.size() - 1;
  std::vector<ModelFragment> at(r.states.size(), r.model);
  for (std::size_t i = 0; i <= n; ++i)
    for (const auto& [v, x] : r.states[i]) at[i].variables[v] = x;
  std::map<std::pair<Property, std::size_t>, bool> memo;
  std::function<bool(const Property&, std::size_t)> sem = [&](const Property& q, std::size_t i) -> bool {
    auto key = std::make_pair(q, i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool v = false;
    switch (q.kind()) {
      case Property::Kind::True: v = true; break;
      case Property::Kind::False: v = false; break;
      case Property::Kind::Leaf: v = evaluate_closed(q.constraint(), at[i], sig); break;
      case Property::Kind::And:
        v = true;
        for (const auto& c : q.children()) v = v && sem(c, i);
        break;
      case Property::Kind::Or:
        for (const auto& c : q.children()) v = v || sem(c, i);
        break;
      case Property::Kind::Next: v = i < n && sem(q.children()[0], i + 1); break;
      case Property::Kind::Globally:
        v = true;
        for (std::size_t j = i; j <= n && v; ++j) v = sem(q.children()[0], j);
        break;
      case Property::Kind::Until:
        for (std::size_t j = i; j <= n; ++j) {
          if (sem(q.children()[1], j)) {
            v = true;
            break;
          }
          if (!sem(q.children()[0], j)) break;
        }
        break;
    }
    memo.emplace(key, v);
    return v;
  };
  return sem(p, 0);
}

}  // namespace dmt
