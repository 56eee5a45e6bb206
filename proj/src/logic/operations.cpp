#include <algorithm>
#include <atomic>
#include <functional>

#include "dmt/logic.hpp"

namespace dmt {

namespace {

void collect_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.var());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_atom_vars(const Atom& a, VarSet& out) {
  if (a.kind() == Atom::Kind::Lin) {
    for (const auto& [t, q] : a.expr().terms()) collect_vars(t, out);
  } else {
    for (const auto& t : a.args()) collect_vars(t, out);
  }
}

void free_vars_rec(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Atom:
      collect_atom_vars(f.as_atom(), out);
      return;
    case Formula::Kind::Exists: {
      VarSet inner;
      free_vars_rec(f.children()[0], inner);
      for (const auto& b : f.bound()) inner.erase(b);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      for (const auto& c : f.children()) free_vars_rec(c, out);
  }
}

template <typename Fn>
void for_each_atom(const Formula& f, Fn&& fn) {
  if (f.kind() == Formula::Kind::Atom) {
    fn(f.as_atom());
    return;
  }
  for (const auto& c : f.children()) for_each_atom(c, fn);
}

void collect_terms(const Term& t, std::vector<Term>& out, std::set<Term>& seen) {
  for (const auto& a : t.args()) collect_terms(a, out, seen);
  if (seen.insert(t).second) out.push_back(t);
}

Cmp cmp_of(LinOp op) {
  switch (op) {
    case LinOp::Eq: return Cmp::Eq;
    case LinOp::Le: return Cmp::Le;
    case LinOp::Lt: return Cmp::Lt;
  }
  return Cmp::Eq;
}

}  // namespace

VarSet free_variables(const Formula& f) {
  VarSet out;
  free_vars_rec(f, out);
  return out;
}

VarSet free_variables(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

VarSet free_variables(const Atom& a) {
  VarSet out;
  collect_atom_vars(a, out);
  return out;
}

std::set<std::string> constants_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Term&)> rec = [&](const Term& t) {
    if (t.kind() == Term::Kind::Const) out.insert(t.symbol());
    for (const auto& a : t.args()) rec(a);
  };
  for_each_atom(f, [&](const Atom& a) {
    if (a.kind() == Atom::Kind::Lin)
      for (const auto& [t, q] : a.expr().terms()) rec(t);
    else
      for (const auto& t : a.args()) rec(t);
  });
  return out;
}

std::vector<Atom> atoms_of(const Formula& f) {
  std::vector<Atom> out;
  std::set<Atom> seen;
  for_each_atom(f, [&](const Atom& a) {
    if (seen.insert(a).second) out.push_back(a);
  });
  return out;
}

std::vector<Term> subterms_of(const Formula& f) {
  std::vector<Term> out;
  std::set<Term> seen;
  for_each_atom(f, [&](const Atom& a) {
    if (a.kind() == Atom::Kind::Lin)
      for (const auto& [t, q] : a.expr().terms()) collect_terms(t, out, seen);
    else
      for (const auto& t : a.args()) collect_terms(t, out, seen);
  });
  return out;
}

// ---------------------------------------------------------------- substitution

Term substitute(const Term& t, const std::map<Var, Term>& s) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = s.find(t.var());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::App: {
      std::vector<Term> args;
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(substitute(a, s));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::app(t.symbol(), std::move(args), t.sort()) : t;
    }
    default:
      return t;
  }
}

Formula substitute_atom(const Atom& a, const std::map<Var, Term>& s) {
  switch (a.kind()) {
    case Atom::Kind::Rel: {
      std::vector<Term> args;
      for (const auto& t : a.args()) args.push_back(substitute(t, s));
      return Formula::relation(a.relation_name(), std::move(args));
    }
    case Atom::Kind::Eq:
      return Formula::eq(substitute(a.args()[0], s), substitute(a.args()[1], s));
    case Atom::Kind::Lin: {
      LinExpr e(a.expr().constant());
      for (const auto& [t, q] : a.expr().terms()) e = e + LinExpr::of(substitute(t, s), q);
      return Formula::arith(e, cmp_of(a.op()), LinExpr());
    }
  }
  return Formula::atom(a);
}

Atom substitute(const Atom& a, const std::map<Var, Term>& s) {
  Formula f = substitute_atom(a, s);
  if (f.kind() != Formula::Kind::Atom) throw LogicError("substitution folded atom " + to_string(a));
  return f.as_atom();
}

Formula substitute(const Formula& f, const std::map<Var, Term>& s) {
  if (s.empty()) return f;
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Atom:
      return substitute_atom(f.as_atom(), s);
    case Formula::Kind::Not:
      return Formula::negation(substitute(f.children()[0], s));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(substitute(c, s));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }
    case Formula::Kind::Exists: {
      const Formula& body = f.children()[0];
      VarSet body_free = free_variables(body);
      std::map<Var, Term> inner;
      VarSet range_vars;
      for (const auto& [v, t] : s) {
        if (std::find(f.bound().begin(), f.bound().end(), v) != f.bound().end()) continue;
        if (!body_free.count(v)) continue;
        inner.emplace(v, t);
        VarSet tv = free_variables(t);
        range_vars.insert(tv.begin(), tv.end());
      }
      std::vector<Var> bound;
      for (const auto& b : f.bound()) {
        if (range_vars.count(b)) {
          Var fresh = Var::plain(fresh_name(b.name), b.sort);
          inner.emplace(b, Term::variable(fresh));
          bound.push_back(fresh);
        } else {
          bound.push_back(b);
        }
      }
      return Formula::exists(std::move(bound), substitute(body, inner));
    }
  }
  return f;
}

namespace {

template <typename Fn>
Formula rename_free(const Formula& f, Fn&& fn) {
  std::map<Var, Term> s;
  for (const auto& v : free_variables(f)) {
    std::optional<Var> r = fn(v);
    if (r && !(*r == v)) s.emplace(v, Term::variable(*r));
  }
  return substitute(f, s);
}

}  // namespace

Formula rename_to_index(const Formula& f, unsigned i) {
  return rename_free(f, [i](const Var& v) -> std::optional<Var> {
    if (v.annot != Annot::None) throw LogicError("malformed context: annotated variable " + to_string(v));
    return v.with(Annot::Index, i);
  });
}

Formula rename_from_index(const Formula& f, unsigned i) {
  return rename_free(f, [i](const Var& v) -> std::optional<Var> {
    if (v.annot == Annot::Index && v.index == i) return v.with(Annot::None);
    return std::nullopt;
  });
}

Formula shift_index(const Formula& f, unsigned from, unsigned to) {
  return rename_free(f, [from, to](const Var& v) -> std::optional<Var> {
    if (v.annot == Annot::Index && v.index == from) return v.with(Annot::Index, to);
    return std::nullopt;
  });
}

Formula instantiate_transition(const Formula& t, unsigned i, unsigned j) {
  return rename_free(t, [i, j](const Var& v) -> std::optional<Var> {
    switch (v.annot) {
      case Annot::Read: return v.with(Annot::Index, i);
      case Annot::Write: return v.with(Annot::Index, j);
      default: throw LogicError("malformed guard: unannotated variable " + to_string(v));
    }
  });
}

// ---------------------------------------------------------------- normal forms

Formula to_nnf(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(to_nnf(c));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
    }
    case Formula::Kind::Exists:
      return Formula::exists({f.bound().begin(), f.bound().end()}, to_nnf(f.children()[0]));
    case Formula::Kind::Not: {
      const Formula& g = f.children()[0];
      switch (g.kind()) {
        case Formula::Kind::Atom: return f;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
          std::vector<Formula> cs;
          for (const auto& c : g.children()) cs.push_back(to_nnf(Formula::negation(c)));
          return g.kind() == Formula::Kind::And ? Formula::disj(std::move(cs)) : Formula::conj(std::move(cs));
        }
        case Formula::Kind::Exists:
          throw LogicError("existential under negation is not supported");
        default:
          return to_nnf(Formula::negation(g));
      }
    }
  }
  return f;
}

namespace {

using Dnf = std::vector<Constraint>;

bool add_literal(Constraint& c, const Literal& l) {
  for (const auto& x : c.body) {
    if (x.atom == l.atom) return x.positive == l.positive;
  }
  c.body.push_back(l);
  return true;
}

Dnf dnf_rec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return {Constraint{}};
    case Formula::Kind::False: return {};
    case Formula::Kind::Atom:
    case Formula::Kind::Not: return {Constraint{{}, {f.as_literal()}}};
    case Formula::Kind::Or: {
      Dnf out;
      for (const auto& c : f.children()) {
        Dnf d = dnf_rec(c);
        out.insert(out.end(), d.begin(), d.end());
      }
      return out;
    }
    case Formula::Kind::And: {
      Dnf acc = {Constraint{}};
      for (const auto& c : f.children()) {
        Dnf d = dnf_rec(c);
        Dnf next;
        for (const auto& a : acc) {
          for (const auto& b : d) {
            Constraint m = a;
            m.bound.insert(m.bound.end(), b.bound.begin(), b.bound.end());
            bool ok = true;
            for (const auto& l : b.body) ok = ok && add_literal(m, l);
            if (ok) next.push_back(std::move(m));
          }
        }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
    case Formula::Kind::Exists: {
      std::map<Var, Term> ren;
      std::vector<Var> fresh;
      for (const auto& b : f.bound()) {
        Var v = Var::plain(fresh_name(b.name), b.sort);
        ren.emplace(b, Term::variable(v));
        fresh.push_back(v);
      }
      Dnf d = dnf_rec(substitute(f.children()[0], ren));
      for (auto& c : d) c.bound.insert(c.bound.begin(), fresh.begin(), fresh.end());
      return d;
    }
  }
  return {};
}

}  // namespace

std::vector<Constraint> to_dnf_constraints(const Formula& f) {
  Dnf d = dnf_rec(to_nnf(f));
  for (auto& c : d) {
    VarSet used;
    for (const auto& l : c.body) {
      VarSet v = free_variables(l.atom);
      used.insert(v.begin(), v.end());
    }
    std::vector<Var> bound;
    for (const auto& b : c.bound)
      if (used.count(b) && std::find(bound.begin(), bound.end(), b) == bound.end()) bound.push_back(b);
    c.bound = std::move(bound);
  }
  return d;
}

std::size_t literal_count(const Formula& f) {
  if (f.kind() == Formula::Kind::Atom) return 1;
  std::size_t n = 0;
  for (const auto& c : f.children()) n += literal_count(c);
  return n;
}

// ---------------------------------------------------------------- sorts

namespace {

void check_term(const Signature& sig, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!sig.find_sort(t.sort())) throw LogicError("variable " + to_string(t.var()) + " has undeclared sort " + t.sort());
      if (const auto* d = sig.find_variable(t.var().name); d && d->sort != t.sort())
        throw LogicError("variable " + to_string(t.var()) + " used at sort " + t.sort() + ", declared " + d->sort);
      return;
    case Term::Kind::Const: {
      const auto* c = sig.find_constant(t.symbol());
      if (!c) throw LogicError("undeclared constant " + t.symbol());
      if (c->sort != t.sort()) throw LogicError("constant " + t.symbol() + " used at sort " + t.sort());
      return;
    }
    case Term::Kind::Num:
      if (!t.is_rat()) throw LogicError("number of non-rational sort");
      return;
    case Term::Kind::App: {
      const auto* f = sig.find_function(t.symbol());
      if (!f) throw LogicError("undeclared function " + t.symbol());
      if (f->args.size() != t.args().size()) throw LogicError("arity mismatch for " + t.symbol());
      if (f->result != t.sort()) throw LogicError("result sort mismatch for " + t.symbol());
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        check_term(sig, t.args()[i]);
        if (t.args()[i].sort() != f->args[i])
          throw LogicError("argument " + std::to_string(i + 1) + " of " + t.symbol() + " has sort " + t.args()[i].sort() + ", expected " + f->args[i]);
      }
      return;
    }
  }
}

}  // namespace

void check_well_sorted(const Signature& sig, const Formula& f) {
  for (const auto& a : atoms_of(f)) {
    switch (a.kind()) {
      case Atom::Kind::Rel: {
        const auto* r = sig.find_relation(a.relation_name());
        if (!r) throw LogicError("undeclared relation " + a.relation_name());
        if (r->args.size() != a.args().size()) throw LogicError("arity mismatch for " + a.relation_name());
        for (std::size_t i = 0; i < r->args.size(); ++i) {
          check_term(sig, a.args()[i]);
          if (a.args()[i].sort() != r->args[i])
            throw LogicError("argument " + std::to_string(i + 1) + " of " + a.relation_name() + " has sort " + a.args()[i].sort() + ", expected " + r->args[i]);
        }
        break;
      }
      case Atom::Kind::Eq:
        for (const auto& t : a.args()) check_term(sig, t);
        break;
      case Atom::Kind::Lin:
        for (const auto& [t, q] : a.expr().terms()) {
          check_term(sig, t);
          if (!t.is_rat()) throw LogicError("non-rational term " + to_string(t) + " in arithmetic atom");
        }
        break;
    }
  }
}

std::string fresh_name(const std::string& stem) {
  static std::atomic<unsigned long> counter{0};
  std::string base = stem.substr(0, stem.find('!'));
  return base + "!" + std::to_string(++counter);
}

}  // namespace dmt
