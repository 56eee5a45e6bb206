#include <algorithm>
#include <functional>

#include "internal.hpp"

namespace dmt {

namespace {

using qe::Congruence;
using qe::EufLit;
using qe::Lin;

constexpr std::size_t kMaxArrangements = 20000;

void check_term(const Term& t, const VarSet& elim) {
  if (t.kind() != Term::Kind::App) return;
  if (t.args().size() != 1 && qe::mentions_any(t, elim))
    throw QeError("cover: non-unary function over eliminated terms in " + to_string(t));
  for (const auto& a : t.args()) check_term(a, elim);
}

// Literals split into a congruence part and a linear part. Rational
// applications over eliminated terms inside linear atoms are replaced by
// fresh eliminated variables p with p = t in the congruence part.
struct Purified {
  std::vector<EufLit> euf;
  std::vector<Lin> lra;
  VarSet elim;
  std::set<Rational> numerals;  // bounds of single-term linear literals
};

Purified purify(const EliminationTask& task) {
  Purified p;
  p.elim.insert(task.eliminate.begin(), task.eliminate.end());
  const VarSet orig = p.elim;
  std::map<Term, Term> pvar;
  for (const auto& l : task.matrix) {
    const Atom& a = l.atom;
    if (a.kind() != Atom::Kind::Lin) {
      for (const auto& t : a.args()) check_term(t, orig);
      std::vector<Term> args(a.args().begin(), a.args().end());
      p.euf.push_back({l.positive, a.kind() == Atom::Kind::Rel ? a.relation_name() : std::string(), std::move(args)});
      continue;
    }
    Lin c = qe::lin_of(l);
    const auto terms = c.e.terms();  // c.e is rewritten below
    for (const auto& [t, k] : terms) {
      check_term(t, orig);
      if (t.kind() != Term::Kind::App || !qe::mentions_any(t, orig)) continue;
      auto it = pvar.find(t);
      if (it == pvar.end()) {
        Var v = Var::plain(fresh_name("p"), kRatSort);
        p.elim.insert(v);
        it = pvar.emplace(t, Term::variable(v)).first;
        p.euf.push_back({true, "", {it->second, t}});
      }
      c.e = c.e.substituted(t, LinExpr(it->second));
    }
    if (c.e.terms().size() == 1) {
      const auto& [t, k] = c.e.terms().front();
      p.numerals.insert(-c.e.constant() / k);
    }
    p.lra.push_back(std::move(c));
  }
  return p;
}

bool is_rat_elim(const Term& t, const VarSet& elim) { return t.is_var() && t.is_rat() && elim.count(t.var()); }

// One case of the arrangement: merges, EUF projection and FM on the rest.
std::optional<Formula> solve_case(Congruence cc, const Purified& p, const std::vector<Term>& classes,
                                  const std::vector<Term>& cands, const std::vector<int>& assign,
                                  std::vector<Term>& residual) {
  const int m = static_cast<int>(cands.size());
  std::map<int, Term> leader;  // block -> first class term
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (assign[i] < m) {
      cc.assert_lit({true, "", {classes[i], cands[assign[i]]}});
    } else if (auto [it, fresh] = leader.emplace(assign[i], classes[i]); !fresh) {
      cc.assert_lit({true, "", {classes[i], it->second}});
    }
  }
  if (!cc.close()) return std::nullopt;

  // every eliminated rational variable becomes its class representative or
  // a canonical eliminated variable of its class
  std::map<int, Term> canon;
  for (const auto& t : cc.nodes())
    if (is_rat_elim(t, p.elim) && !cc.rep_of(t)) canon.emplace(cc.root(t), t);
  std::vector<Lin> lra = p.lra;
  for (const auto& t : cc.nodes()) {
    if (!is_rat_elim(t, p.elim)) continue;
    LinExpr by;
    if (auto r = cc.rep_of(t)) {
      by = LinExpr(*r);
      if (r->kind() == Term::Kind::App && std::find(residual.begin(), residual.end(), *r) == residual.end())
        residual.push_back(*r);
    } else {
      const Term& k = canon.at(cc.root(t));
      if (k == t) continue;
      by = LinExpr(k);
    }
    for (auto& c : lra) c.e = c.e.substituted(t, by);
  }
  // classes put apart from all candidates and from each other
  std::map<int, Term> block_var;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (assign[i] < m) continue;
    auto it = canon.find(cc.root(classes[i]));
    if (it == canon.end()) continue;
    const Term& k = it->second;
    for (const auto& c : cands) lra.push_back({LinExpr(k) - LinExpr(c), LinOp::Eq, true});
    block_var.emplace(assign[i], k);
  }
  for (auto a = block_var.begin(); a != block_var.end(); ++a)
    for (auto b = std::next(a); b != block_var.end(); ++b)
      lra.push_back({LinExpr(a->second) - LinExpr(b->second), LinOp::Eq, true});

  std::vector<Term> elim;
  for (const auto& [r, k] : canon) elim.push_back(k);
  auto branches = qe::fm_branches(std::move(lra), elim);
  if (branches.empty()) return std::nullopt;
  std::vector<Formula> ds;
  for (const auto& b : branches) ds.push_back(qe::conj_of(b));
  return cc.project() && Formula::disj(std::move(ds));
}

// Restricted growth enumeration: each class equals a candidate or joins a
// block of new values.
void arrangements(std::size_t i, int m, int blocks, std::vector<int>& assign,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (i == assign.size()) {
    emit(assign);
    return;
  }
  for (int v = 0; v < m + blocks + 1; ++v) {
    assign[i] = v;
    arrangements(i + 1, m, std::max(blocks, v - m + 1), assign, emit);
  }
}

}  // namespace

Formula EliminationTask::to_formula() const {
  std::vector<Formula> fs;
  for (const auto& l : matrix) fs.push_back(Formula::literal(l));
  return Formula::exists(eliminate, Formula::conj(std::move(fs)));
}

VarSet EliminationTask::keep() const {
  VarSet out;
  for (const auto& l : matrix)
    for (const auto& v : free_variables(l.atom)) out.insert(v);
  for (const auto& v : eliminate) out.erase(v);
  return out;
}

CoverResult tame_cover(const EliminationTask& task) {
  Purified p = purify(task);
  Congruence cc(p.elim);
  for (const auto& l : p.euf) cc.assert_lit(l);
  for (const auto& c : p.lra)
    for (const auto& [t, k] : c.e.terms()) cc.add(t);
  for (const auto& q : p.numerals) cc.add(Term::number(q));
  CoverResult res;
  if (!cc.close()) {
    res.formula = Formula::bottom();
    return res;
  }

  // unrepresented rational classes that occur as relation arguments
  std::vector<Term> classes;
  std::set<int> seen;
  for (const auto& l : p.euf) {
    if (l.rel.empty()) continue;
    for (const auto& a : l.args)
      if (a.is_rat() && !cc.rep_of(a) && seen.insert(cc.root(a)).second) classes.push_back(a);
  }
  std::set<Term> cand_set;
  for (const auto& t : cc.nodes())
    if (t.is_rat())
      if (auto r = cc.rep_of(t)) cand_set.insert(*r);
  std::vector<Term> cands(cand_set.begin(), cand_set.end());

  std::vector<Formula> ds;
  std::vector<int> assign(classes.size());
  std::size_t count = 0;
  arrangements(0, static_cast<int>(cands.size()), 0, assign, [&](const std::vector<int>& a) {
    if (++count > kMaxArrangements) throw QeError("cover: too many arrangements of rational arguments");
    if (auto f = solve_case(cc, p, classes, cands, a, res.residual_terms)) ds.push_back(*f);
  });
  res.formula = Formula::disj(std::move(ds));
  return res;
}

Formula simplify_dnf(const Formula& f, Gateway& gw) {
  std::vector<std::vector<Literal>> ds;
  for (auto& c : to_dnf_constraints(f)) {
    if (!c.bound.empty()) throw QeError("simplify_dnf: quantified disjunct");
    std::sort(c.body.begin(), c.body.end(), [](const Literal& a, const Literal& b) { return compare(a, b) < 0; });
    c.body.erase(std::unique(c.body.begin(), c.body.end()), c.body.end());
    if (c.body.empty()) return Formula::top();
    ds.push_back(std::move(c.body));
  }
  auto conj = [](const std::vector<Literal>& ls) {
    std::vector<Formula> fs;
    for (const auto& l : ls) fs.push_back(Formula::literal(l));
    return Formula::conj(std::move(fs));
  };
  std::vector<bool> drop(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) drop[i] = !gw.is_sat(conj(ds[i]));
  // syntactic subsumption: a superset of another disjunct is redundant
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.size() && !drop[i]; ++j) {
      if (i == j || drop[j]) continue;
      bool sub = std::includes(ds[i].begin(), ds[i].end(), ds[j].begin(), ds[j].end(),
                               [](const Literal& a, const Literal& b) { return compare(a, b) < 0; });
      if (sub && (ds[i].size() > ds[j].size() || i > j)) drop[i] = true;
    }
  }
  std::size_t live = std::count(drop.begin(), drop.end(), false);
  if (live <= 24) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t j = 0; j < ds.size() && !drop[i]; ++j)
        if (i != j && !drop[j] && gw.entails(conj(ds[i]), conj(ds[j]))) drop[i] = true;
    }
  }
  std::vector<Formula> out;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (!drop[i]) out.push_back(conj(ds[i]));
  return Formula::disj(std::move(out));
}

Formula eliminate(const std::vector<Var>& vars, const Formula& f, Gateway* gw) {
  std::vector<Formula> ds;
  for (const auto& c : to_dnf_constraints(f)) {
    EliminationTask task{vars, c.body};
    task.eliminate.insert(task.eliminate.end(), c.bound.begin(), c.bound.end());
    ds.push_back(tame_cover(task).formula);
  }
  Formula r = Formula::disj(std::move(ds));
  return gw ? simplify_dnf(r, *gw) : r;
}

}  // namespace dmt
