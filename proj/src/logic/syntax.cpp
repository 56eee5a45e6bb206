#include <algorithm>
#include <functional>

#include "dmt/logic.hpp"
#include "hash.hpp"

namespace dmt {

int compare(const Var& a, const Var& b) {
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.annot != b.annot) return a.annot < b.annot ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return 0;
}

std::string to_string(const Var& v) {
  switch (v.annot) {
    case Annot::None: return v.name;
    case Annot::Read: return v.name + "^r";
    case Annot::Write: return v.name + "^w";
    case Annot::Index: return v.name + "@" + std::to_string(v.index);
  }
  return v.name;
}

// ---------------------------------------------------------------- Term

struct Term::Node {
  Kind kind;
  std::string sort;
  Var var;
  std::string symbol;
  std::vector<Term> args;
  Rational num;
  std::size_t hash = 0;
  bool ground = true;
};

Term Term::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->sort = v.sort;
  n->hash = hash_mix(hash_mix(0x51, std::hash<std::string>{}(v.name)), static_cast<std::size_t>(v.annot) * 131 + v.index);
  n->ground = false;
  n->var = std::move(v);
  return Term(std::move(n));
}

Term Term::constant(std::string name, std::string sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->sort = std::move(sort);
  n->hash = hash_mix(0x52, std::hash<std::string>{}(name));
  n->symbol = std::move(name);
  return Term(std::move(n));
}

Term Term::app(std::string fn, std::vector<Term> args, std::string sort) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sort = std::move(sort);
  std::size_t h = hash_mix(0x53, std::hash<std::string>{}(fn));
  for (const auto& a : args) {
    h = hash_mix(h, a.hash());
    n->ground = n->ground && a.ground();
  }
  n->hash = h;
  n->symbol = std::move(fn);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::number(Rational q) {
  q.canonicalize();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->sort = kRatSort;
  n->hash = hash_mix(0x54, hash_value(q));
  n->num = std::move(q);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return n_->kind; }
const std::string& Term::sort() const { return n_->sort; }
const Var& Term::var() const { return n_->var; }
const std::string& Term::symbol() const { return n_->symbol; }
std::span<const Term> Term::args() const { return n_->args; }
const Rational& Term::value() const { return n_->num; }
std::size_t Term::hash() const { return n_->hash; }
bool Term::ground() const { return n_->ground; }

int compare(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::Var:
      return compare(a.var(), b.var());
    case Term::Kind::Const:
      if (int c = a.symbol().compare(b.symbol())) return c < 0 ? -1 : 1;
      return 0;
    case Term::Kind::Num:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Term::Kind::App: {
      if (int c = a.symbol().compare(b.symbol())) return c < 0 ? -1 : 1;
      auto as = a.args(), bs = b.args();
      if (as.size() != bs.size()) return as.size() < bs.size() ? -1 : 1;
      for (std::size_t i = 0; i < as.size(); ++i)
        if (int c = compare(as[i], bs[i])) return c;
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------- LinExpr

LinExpr::LinExpr(const Term& t) {
  if (t.is_num())
    constant_ = t.value();
  else
    add(t, 1);
}

LinExpr LinExpr::of(const Term& t, Rational coeff) {
  LinExpr e;
  if (t.is_num())
    e.constant_ = t.value() * coeff;
  else
    e.add(t, coeff);
  return e;
}

void LinExpr::add(const Term& t, const Rational& q) {
  if (q == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
                             [](const auto& p, const Term& x) { return p.first < x; });
  if (it != terms_.end() && it->first == t) {
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {t, q});
  }
}

Rational LinExpr::coeff(const Term& t) const {
  for (const auto& [x, q] : terms_)
    if (x == t) return q;
  return 0;
}

LinExpr LinExpr::operator+(const LinExpr& o) const {
  LinExpr r = *this;
  for (const auto& [t, q] : o.terms_) r.add(t, q);
  r.constant_ += o.constant_;
  return r;
}

LinExpr LinExpr::operator-(const LinExpr& o) const { return *this + (-o); }

LinExpr LinExpr::operator-() const { return scaled(-1); }

LinExpr LinExpr::scaled(const Rational& q) const {
  LinExpr r;
  if (q == 0) return r;
  r.terms_ = terms_;
  for (auto& p : r.terms_) p.second *= q;
  r.constant_ = constant_ * q;
  return r;
}

LinExpr LinExpr::substituted(const Term& t, const LinExpr& e) const {
  Rational c = coeff(t);
  if (c == 0) return *this;
  LinExpr r = *this;
  r.add(t, -c);
  return r + e.scaled(c);
}

std::size_t LinExpr::hash() const {
  std::size_t h = hash_value(constant_);
  for (const auto& [t, q] : terms_) h = hash_mix(hash_mix(h, t.hash()), hash_value(q));
  return h;
}

int compare(const LinExpr& a, const LinExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (int c = compare(a.terms_[i].first, b.terms_[i].first)) return c;
    if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second ? -1 : 1;
  }
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_ ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------- Atom

Atom Atom::relation(std::string name, std::vector<Term> args) {
  Atom a;
  a.kind_ = Kind::Rel;
  a.name_ = std::move(name);
  a.args_ = std::move(args);
  a.rehash();
  return a;
}

Atom Atom::equality(Term l, Term r) {
  if (l.sort() != r.sort())
    throw LogicError("equality between sorts " + l.sort() + " and " + r.sort());
  if (l.is_rat()) throw LogicError("rational equality must be a linear atom");
  Atom a;
  a.kind_ = Kind::Eq;
  if (r < l) std::swap(l, r);
  a.args_ = {std::move(l), std::move(r)};
  a.rehash();
  return a;
}

Atom Atom::linear(LinExpr e, LinOp op) {
  if (e.is_constant()) throw LogicError("linear atom without terms");
  Rational lead = e.terms().front().second;
  if (op == LinOp::Eq)
    e = e.scaled(1 / lead);
  else
    e = e.scaled(1 / abs(lead));
  Atom a;
  a.kind_ = Kind::Lin;
  a.expr_ = std::move(e);
  a.op_ = op;
  a.rehash();
  return a;
}

void Atom::rehash() {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e37;
  h = hash_mix(h, std::hash<std::string>{}(name_));
  for (const auto& t : args_) h = hash_mix(h, t.hash());
  if (kind_ == Kind::Lin) h = hash_mix(hash_mix(h, expr_.hash()), static_cast<std::size_t>(op_));
  hash_ = h;
}

int compare(const Atom& a, const Atom& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  if (int c = a.name_.compare(b.name_)) return c < 0 ? -1 : 1;
  if (a.args_.size() != b.args_.size()) return a.args_.size() < b.args_.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args_.size(); ++i)
    if (int c = compare(a.args_[i], b.args_[i])) return c;
  if (a.kind_ == Atom::Kind::Lin) {
    if (int c = compare(a.expr_, b.expr_)) return c;
    if (a.op_ != b.op_) return a.op_ < b.op_ ? -1 : 1;
  }
  return 0;
}

int compare(const Literal& a, const Literal& b) {
  if (int c = compare(a.atom, b.atom)) return c;
  if (a.positive != b.positive) return a.positive ? -1 : 1;
  return 0;
}

}  // namespace dmt
