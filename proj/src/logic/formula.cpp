#include <algorithm>

#include "dmt/logic.hpp"
#include "hash.hpp"

namespace dmt {

struct Formula::Node {
  Kind kind;
  std::vector<Formula> children;
  std::vector<Var> bound;
  std::optional<Atom> atom;
  std::size_t hash = 0;
  bool qf = true;
};

Formula Formula::make(Kind k, std::vector<Formula> children, std::vector<Var> bound, std::optional<Atom> a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  std::size_t h = static_cast<std::size_t>(k) * 0x7f4a7c15ULL + 17;
  bool qf = k != Kind::Exists;
  for (const auto& c : children) {
    h = hash_mix(h, c.hash());
    qf = qf && c.quantifier_free();
  }
  for (const auto& v : bound) h = hash_mix(h, Term::variable(v).hash());
  if (a) h = hash_mix(h, a->hash());
  n->hash = h;
  n->qf = qf;
  n->children = std::move(children);
  n->bound = std::move(bound);
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::top() {
  static const Formula t = make(Kind::True, {}, {}, std::nullopt);
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make(Kind::False, {}, {}, std::nullopt);
  return f;
}

Formula Formula::atom(Atom a) { return make(Kind::Atom, {}, {}, std::move(a)); }

Formula Formula::literal(const Literal& l) {
  Formula a = atom(l.atom);
  return l.positive ? a : negation(a);
}

Formula Formula::negation(const Formula& f) {
  switch (f.kind()) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::Not: return f.children()[0];
    case Kind::Atom: {
      const Atom& a = f.as_atom();
      if (a.kind() == Atom::Kind::Lin && a.op() != LinOp::Eq) {
        // not(e <= 0) is -e < 0; not(e < 0) is -e <= 0
        LinOp op = a.op() == LinOp::Le ? LinOp::Lt : LinOp::Le;
        return atom(Atom::linear(-a.expr(), op));
      }
      return make(Kind::Not, {f}, {}, std::nullopt);
    }
    default:
      return make(Kind::Not, {f}, {}, std::nullopt);
  }
}

namespace {

// Flatten, fold units and sort children of an AND/OR.
std::optional<std::vector<Formula>> normalize_children(std::vector<Formula> fs, Formula::Kind kind) {
  const bool is_and = kind == Formula::Kind::And;
  std::vector<Formula> out;
  out.reserve(fs.size());
  std::vector<Formula> stack(fs.rbegin(), fs.rend());
  while (!stack.empty()) {
    Formula f = std::move(stack.back());
    stack.pop_back();
    if (f.kind() == kind) {
      auto ch = f.children();
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (is_and ? f.is_true() : f.is_false()) continue;
    if (is_and ? f.is_false() : f.is_true()) return std::nullopt;  // absorbing element
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& f : out) {
    if (!f.is_literal()) continue;
    Formula neg = Formula::negation(f);
    if (std::binary_search(out.begin(), out.end(), neg)) return std::nullopt;
  }
  return out;
}

}  // namespace

Formula Formula::conj(std::vector<Formula> fs) {
  auto out = normalize_children(std::move(fs), Kind::And);
  if (!out) return bottom();
  if (out->empty()) return top();
  if (out->size() == 1) return out->front();
  return make(Kind::And, std::move(*out), {}, std::nullopt);
}

Formula Formula::disj(std::vector<Formula> fs) {
  auto out = normalize_children(std::move(fs), Kind::Or);
  if (!out) return top();
  if (out->empty()) return bottom();
  if (out->size() == 1) return out->front();
  return make(Kind::Or, std::move(*out), {}, std::nullopt);
}

Formula Formula::exists(std::vector<Var> bound, const Formula& body) {
  Formula inner = body;
  if (inner.kind() == Kind::Exists) {
    for (const auto& v : inner.bound()) bound.push_back(v);
    inner = inner.children()[0];
  }
  if (inner.is_true() || inner.is_false()) return inner;
  VarSet fv = free_variables(inner);
  std::vector<Var> keep;
  for (auto& v : bound) {
    if (!fv.count(v)) continue;
    if (std::find(keep.begin(), keep.end(), v) != keep.end()) continue;
    keep.push_back(std::move(v));
  }
  if (keep.empty()) return inner;
  return make(Kind::Exists, {inner}, std::move(keep), std::nullopt);
}

Formula Formula::relation(std::string name, std::vector<Term> args) {
  return atom(Atom::relation(std::move(name), std::move(args)));
}

Formula Formula::eq(const Term& a, const Term& b) {
  if (a.sort() != b.sort()) throw LogicError("equality between sorts " + a.sort() + " and " + b.sort());
  if (a.is_rat()) return arith(LinExpr(a), Cmp::Eq, LinExpr(b));
  if (a == b) return top();
  return atom(Atom::equality(a, b));
}

Formula Formula::arith(const LinExpr& lhs, Cmp op, const LinExpr& rhs) {
  LinExpr e = lhs - rhs;
  if (e.is_constant()) {
    const Rational& c = e.constant();
    bool v = false;
    switch (op) {
      case Cmp::Eq: v = c == 0; break;
      case Cmp::Ne: v = c != 0; break;
      case Cmp::Lt: v = c < 0; break;
      case Cmp::Le: v = c <= 0; break;
      case Cmp::Gt: v = c > 0; break;
      case Cmp::Ge: v = c >= 0; break;
    }
    return v ? top() : bottom();
  }
  switch (op) {
    case Cmp::Eq: return atom(Atom::linear(e, LinOp::Eq));
    case Cmp::Ne: return negation(atom(Atom::linear(e, LinOp::Eq)));
    case Cmp::Lt: return atom(Atom::linear(e, LinOp::Lt));
    case Cmp::Le: return atom(Atom::linear(e, LinOp::Le));
    case Cmp::Gt: return atom(Atom::linear(-e, LinOp::Lt));
    case Cmp::Ge: return atom(Atom::linear(-e, LinOp::Le));
  }
  return top();
}

Formula::Kind Formula::kind() const { return n_->kind; }
const Atom& Formula::as_atom() const { return *n_->atom; }
std::span<const Formula> Formula::children() const { return n_->children; }
std::span<const Var> Formula::bound() const { return n_->bound; }
std::size_t Formula::hash() const { return n_->hash; }
bool Formula::quantifier_free() const { return n_->qf; }

bool Formula::is_literal() const {
  return kind() == Kind::Atom || (kind() == Kind::Not && children()[0].kind() == Kind::Atom);
}

Literal Formula::as_literal() const {
  if (kind() == Kind::Atom) return {as_atom(), true};
  if (kind() == Kind::Not && children()[0].kind() == Kind::Atom) return {children()[0].as_atom(), false};
  throw LogicError("not a literal: " + to_string(*this));
}

int compare(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == Formula::Kind::Atom) return compare(a.as_atom(), b.as_atom());
  auto ab = a.bound(), bb = b.bound();
  if (ab.size() != bb.size()) return ab.size() < bb.size() ? -1 : 1;
  for (std::size_t i = 0; i < ab.size(); ++i)
    if (int c = compare(ab[i], bb[i])) return c;
  auto ac = a.children(), bc = b.children();
  if (ac.size() != bc.size()) return ac.size() < bc.size() ? -1 : 1;
  for (std::size_t i = 0; i < ac.size(); ++i)
    if (int c = compare(ac[i], bc[i])) return c;
  return 0;
}

Formula Constraint::to_formula() const {
  std::vector<Formula> lits;
  lits.reserve(body.size());
  for (const auto& l : body) lits.push_back(Formula::literal(l));
  return Formula::exists(bound, Formula::conj(std::move(lits)));
}

}  // namespace dmt
