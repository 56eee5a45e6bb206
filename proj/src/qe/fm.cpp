#include <algorithm>

#include "internal.hpp"

namespace dmt::qe {

namespace {

using Conj = std::vector<Lin>;

struct LinLess {
  bool operator()(const LinExpr& a, const LinExpr& b) const { return compare(a, b) < 0; }
};

struct Bound {
  Rational v;
  bool strict = false;
};

// Bounds collected for one linear form T (leading coefficient +1).
struct Slot {
  std::optional<Rational> eq;
  std::optional<Bound> lo, hi;
};

// 0 = true, 1 = false, 2 = nontrivial
int trivial(const Lin& c) {
  if (!c.e.is_constant()) return 2;
  const Rational& k = c.e.constant();
  bool v = false;
  if (c.ne)
    v = k != 0;
  else if (c.op == LinOp::Eq)
    v = k == 0;
  else if (c.op == LinOp::Le)
    v = k <= 0;
  else
    v = k < 0;
  return v ? 0 : 1;
}

// Splits e = s*T + c with T's leading coefficient +1.
void split(const LinExpr& e, LinExpr& t, Rational& s, Rational& c) {
  s = e.terms().front().second;
  c = e.constant();
  t = (e - LinExpr(c)).scaled(1 / s);
}

bool tighter_hi(const Bound& a, const Bound& b) { return a.v < b.v || (a.v == b.v && a.strict && !b.strict); }
bool tighter_lo(const Bound& a, const Bound& b) { return a.v > b.v || (a.v == b.v && a.strict && !b.strict); }

// Removes trivial and redundant constraints on the same linear form; nullopt
// when a contradiction is found.
std::optional<Conj> tighten(const Conj& in) {
  std::map<LinExpr, Slot, LinLess> slots;
  Conj ne;
  for (const auto& c : in) {
    int tv = trivial(c);
    if (tv == 0) continue;
    if (tv == 1) return std::nullopt;
    if (c.ne) {
      ne.push_back(c);
      continue;
    }
    LinExpr t;
    Rational s, k;
    split(c.e, t, s, k);
    // s*T + k op 0  <=>  T op' -k/s
    Rational v = -k / s;
    Slot& sl = slots[t];
    if (c.op == LinOp::Eq) {
      if (sl.eq && *sl.eq != v) return std::nullopt;
      sl.eq = v;
    } else if (s > 0) {
      Bound b{v, c.op == LinOp::Lt};
      if (!sl.hi || tighter_hi(b, *sl.hi)) sl.hi = b;
    } else {
      Bound b{v, c.op == LinOp::Lt};
      if (!sl.lo || tighter_lo(b, *sl.lo)) sl.lo = b;
    }
  }
  Conj out;
  for (auto& [t, sl] : slots) {
    if (sl.eq) {
      const Rational& v = *sl.eq;
      if (sl.hi && (v > sl.hi->v || (v == sl.hi->v && sl.hi->strict))) return std::nullopt;
      if (sl.lo && (v < sl.lo->v || (v == sl.lo->v && sl.lo->strict))) return std::nullopt;
      out.push_back({t - LinExpr(v), LinOp::Eq});
      continue;
    }
    if (sl.lo && sl.hi) {
      if (sl.lo->v > sl.hi->v) return std::nullopt;
      if (sl.lo->v == sl.hi->v) {
        if (sl.lo->strict || sl.hi->strict) return std::nullopt;
        out.push_back({t - LinExpr(sl.lo->v), LinOp::Eq});
        continue;
      }
    }
    if (sl.hi) out.push_back({t - LinExpr(sl.hi->v), sl.hi->strict ? LinOp::Lt : LinOp::Le});
    if (sl.lo) out.push_back({LinExpr(sl.lo->v) - t, sl.lo->strict ? LinOp::Lt : LinOp::Le});
  }
  // disequalities: drop duplicates and those implied by strict bounds
  for (const auto& c : ne) {
    LinExpr t;
    Rational s, k;
    split(c.e, t, s, k);
    Rational v = -k / s;
    auto it = slots.find(t);
    if (it != slots.end()) {
      const Slot& sl = it->second;
      if (sl.eq || (sl.lo && sl.hi && sl.lo->v == sl.hi->v)) {
        Rational fixed = sl.eq ? *sl.eq : sl.lo->v;
        if (fixed == v) return std::nullopt;
        continue;
      }
      if (sl.hi && (sl.hi->v < v || (sl.hi->v == v && sl.hi->strict))) continue;
      if (sl.lo && (sl.lo->v > v || (sl.lo->v == v && sl.lo->strict))) continue;
    }
    Lin n{t - LinExpr(v), LinOp::Eq, true};
    bool dup = std::any_of(out.begin(), out.end(), [&](const Lin& o) { return o.ne && o.e == n.e; });
    if (!dup) out.push_back(n);
  }
  return out;
}

bool mentions(const Lin& c, const Term& x) { return c.e.coeff(x) != 0; }

// Gaussian substitution of equalities on eliminated terms.
std::optional<Conj> gauss(Conj cs, const std::vector<Term>& elim) {
  for (const auto& x : elim) {
    auto it = std::find_if(cs.begin(), cs.end(), [&](const Lin& c) { return !c.ne && c.op == LinOp::Eq && mentions(c, x); });
    if (it == cs.end()) continue;
    Rational a = it->e.coeff(x);
    LinExpr rest = it->e - LinExpr::of(x, a);
    LinExpr def = rest.scaled(-1 / a);
    cs.erase(it);
    for (auto& c : cs) c.e = c.e.substituted(x, def);
    auto t = tighten(cs);
    if (!t) return std::nullopt;
    cs = std::move(*t);
  }
  return cs;
}

std::optional<Conj> fm_conj(Conj cs, const std::vector<Term>& elim) {
  for (;;) {
    // tightening may have produced new equalities
    auto g = gauss(std::move(cs), elim);
    if (!g) return std::nullopt;
    cs = std::move(*g);
    // choose the eliminated term with the cheapest combination
    const Term* best = nullptr;
    long best_cost = 0;
    for (const auto& x : elim) {
      long lo = 0, hi = 0;
      for (const auto& c : cs) {
        if (c.ne) continue;
        Rational a = c.e.coeff(x);
        if (a > 0) ++hi;
        if (a < 0) ++lo;
      }
      if (lo + hi == 0) continue;
      long cost = lo * hi - lo - hi;
      if (!best || cost < best_cost) {
        best = &x;
        best_cost = cost;
      }
    }
    if (!best) break;
    const Term& x = *best;
    Conj lower, upper, next;
    for (auto& c : cs) {
      Rational a = c.ne ? Rational(0) : c.e.coeff(x);
      if (a > 0)
        upper.push_back(c);
      else if (a < 0)
        lower.push_back(c);
      else
        next.push_back(c);
    }
    for (const auto& l : lower) {
      Rational al = -l.e.coeff(x);
      for (const auto& u : upper) {
        Rational au = u.e.coeff(x);
        LinExpr e = u.e.scaled(al) + l.e.scaled(au);
        LinOp op = (l.op == LinOp::Lt || u.op == LinOp::Lt) ? LinOp::Lt : LinOp::Le;
        next.push_back({e, op});
      }
    }
    auto t = tighten(next);
    if (!t) return std::nullopt;
    cs = std::move(*t);
  }
  return cs;
}

void branches(Conj cs, const std::vector<Term>& elim, std::vector<Conj>& out) {
  auto g = gauss(std::move(cs), elim);
  if (!g) return;
  cs = std::move(*g);
  auto it = std::find_if(cs.begin(), cs.end(), [&](const Lin& c) {
    return c.ne && std::any_of(elim.begin(), elim.end(), [&](const Term& x) { return mentions(c, x); });
  });
  if (it != cs.end()) {
    LinExpr e = it->e;
    cs.erase(it);
    Conj a = cs, b = cs;
    a.push_back({e, LinOp::Lt});
    b.push_back({-e, LinOp::Lt});
    branches(std::move(a), elim, out);
    branches(std::move(b), elim, out);
    return;
  }
  auto r = fm_conj(std::move(cs), elim);
  if (r) out.push_back(std::move(*r));
}

}  // namespace

Formula to_formula(const Lin& l) {
  if (l.e.is_constant()) {
    int tv = trivial(l);
    return tv == 0 ? Formula::top() : Formula::bottom();
  }
  Formula a = Formula::atom(Atom::linear(l.e, l.op));
  return l.ne ? !a : a;
}

Lin lin_of(const Literal& l) {
  const LinExpr& e = l.atom.expr();
  if (l.positive) return {e, l.atom.op()};
  if (l.atom.op() == LinOp::Eq) return {e, LinOp::Eq, true};
  // not(e <= 0) is -e < 0; not(e < 0) is -e <= 0
  return {-e, l.atom.op() == LinOp::Le ? LinOp::Lt : LinOp::Le};
}

Formula conj_of(const std::vector<Lin>& cs) {
  std::vector<Formula> fs;
  for (const auto& c : cs) fs.push_back(to_formula(c));
  return Formula::conj(std::move(fs));
}

std::vector<std::vector<Lin>> fm_branches(std::vector<Lin> cs, const std::vector<Term>& eliminate) {
  std::vector<Conj> out;
  auto t = tighten(cs);
  if (!t) return out;
  branches(std::move(*t), eliminate, out);
  return out;
}

}  // namespace dmt::qe

namespace dmt {

Formula fm_eliminate(const std::vector<Var>& eliminate, const std::vector<Literal>& matrix) {
  std::vector<Term> elim;
  for (const auto& v : eliminate) {
    if (!v.is_rat()) throw QeError("fm_eliminate: variable " + to_string(v) + " is not rational");
    elim.push_back(Term::variable(v));
  }
  std::vector<qe::Lin> cs;
  for (const auto& l : matrix) {
    if (l.atom.kind() != Atom::Kind::Lin) throw QeError("fm_eliminate: unsupported atom " + to_string(l.atom));
    cs.push_back(qe::lin_of(l));
  }
  std::vector<Formula> ds;
  for (const auto& b : qe::fm_branches(std::move(cs), elim)) ds.push_back(qe::conj_of(b));
  return Formula::disj(std::move(ds));
}

}  // namespace dmt
