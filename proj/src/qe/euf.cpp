#include <algorithm>
#include <numeric>

#include "internal.hpp"

namespace dmt::qe {

bool mentions_any(const Term& t, const VarSet& vs) {
  if (t.is_var()) return vs.count(t.var()) > 0;
  for (const auto& a : t.args())
    if (mentions_any(a, vs)) return true;
  return false;
}

int Congruence::add(const Term& t) {
  if (auto it = ids_.find(t); it != ids_.end()) return it->second;
  for (const auto& a : t.args()) add(a);
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(t);
  parent_.push_back(id);
  ids_.emplace(t, id);
  return id;
}

void Congruence::assert_lit(const EufLit& l) {
  for (const auto& a : l.args) add(a);
  lits_.push_back(l);
}

int Congruence::find(int x) const {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void Congruence::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a != b) parent_[std::max(a, b)] = std::min(a, b);
}

int Congruence::root(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) throw QeError("congruence: unknown term " + to_string(t));
  return find(it->second);
}

bool Congruence::close() {
  for (const auto& l : lits_)
    if (l.positive && l.rel.empty()) unite(ids_.at(l.args[0]), ids_.at(l.args[1]));
  // congruence rounds until no signature collides
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<std::string, std::vector<int>>, int> sig;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Term& t = nodes_[i];
      if (t.kind() != Term::Kind::App) continue;
      std::vector<int> key;
      for (const auto& a : t.args()) key.push_back(find(ids_.at(a)));
      auto [it, fresh] = sig.emplace(std::make_pair(t.symbol(), std::move(key)), static_cast<int>(i));
      if (!fresh && find(it->second) != find(static_cast<int>(i))) {
        unite(it->second, static_cast<int>(i));
        changed = true;
      }
    }
  }
  // distinct numerals in one class
  std::map<int, Rational> num;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_num()) continue;
    auto [it, fresh] = num.emplace(find(static_cast<int>(i)), nodes_[i].value());
    if (!fresh && it->second != nodes_[i].value()) return false;
  }
  std::set<std::pair<std::string, std::vector<int>>> pos;
  for (const auto& l : lits_) {
    if (l.rel.empty()) {
      if (!l.positive && root(l.args[0]) == root(l.args[1])) return false;
      continue;
    }
    if (!l.positive) continue;
    std::vector<int> key;
    for (const auto& a : l.args) key.push_back(root(a));
    pos.emplace(l.rel, std::move(key));
  }
  for (const auto& l : lits_) {
    if (l.positive || l.rel.empty()) continue;
    std::vector<int> key;
    for (const auto& a : l.args) key.push_back(root(a));
    if (pos.count({l.rel, key})) return false;
  }
  // representatives: kept variable, then constant, then numeral, then
  // applications built from represented arguments
  rep_.clear();
  auto rank = [&](const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Var: return elim_.count(t.var()) ? 9 : 0;
      case Term::Kind::Const: return 1;
      case Term::Kind::Num: return 2;
      default: return 9;
    }
  };
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Term& t = nodes_[i];
    int r = rank(t);
    if (r == 9) continue;
    int root = find(static_cast<int>(i));
    auto it = rep_.find(root);
    if (it == rep_.end()) {
      rep_.emplace(root, t);
    } else {
      int ro = rank(it->second);
      if (r < ro || (r == ro && t < it->second)) it->second = t;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      int root = find(static_cast<int>(i));
      if (rep_.count(root) || nodes_[i].kind() != Term::Kind::App) continue;
      if (auto e = express(static_cast<int>(i))) {
        rep_.emplace(root, *e);
        changed = true;
      }
    }
  }
  return true;
}

std::optional<Term> Congruence::rep(int node) const {
  auto it = rep_.find(find(node));
  if (it == rep_.end()) return std::nullopt;
  return it->second;
}

std::optional<Term> Congruence::rep_of(const Term& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return rep(it->second);
}

std::optional<Term> Congruence::express(int node) const {
  const Term& t = nodes_[node];
  switch (t.kind()) {
    case Term::Kind::Var:
      if (elim_.count(t.var())) return std::nullopt;
      return t;
    case Term::Kind::Const:
    case Term::Kind::Num: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args()) {
        auto r = rep(ids_.at(a));
        if (!r) return std::nullopt;
        args.push_back(*r);
      }
      return Term::app(t.symbol(), std::move(args), t.sort());
    }
  }
  return std::nullopt;
}

Formula Congruence::project() const {
  std::set<Formula> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto r = rep(static_cast<int>(i));
    if (!r) continue;
    auto e = express(static_cast<int>(i));
    if (e && *e != *r) out.insert(Formula::eq(*e, *r));
  }
  auto reps = [&](const EufLit& l) -> std::optional<std::vector<Term>> {
    std::vector<Term> rs;
    for (const auto& a : l.args) {
      auto r = rep(ids_.at(a));
      if (!r) return std::nullopt;
      rs.push_back(*r);
    }
    return rs;
  };
  for (const auto& l : lits_) {
    auto rs = reps(l);
    if (!rs) continue;
    if (l.rel.empty()) {
      if (!l.positive) out.insert(!Formula::eq((*rs)[0], (*rs)[1]));
    } else {
      Formula a = Formula::relation(l.rel, *rs);
      out.insert(l.positive ? a : !a);
    }
  }
  // R(t) & !R(s) with some unrepresented argument still forces a represented
  // position to differ when all differing positions are represented
  for (const auto& p : lits_) {
    if (!p.positive || p.rel.empty()) continue;
    for (const auto& n : lits_) {
      if (n.positive || n.rel != p.rel) continue;
      if (reps(p) && reps(n)) continue;
      std::vector<Formula> ds;
      bool open = false;
      for (std::size_t k = 0; k < p.args.size() && !open; ++k) {
        int a = ids_.at(p.args[k]), b = ids_.at(n.args[k]);
        if (find(a) == find(b)) continue;
        auto ra = rep(a), rb = rep(b);
        if (!ra || !rb)
          open = true;
        else
          ds.push_back(!Formula::eq(*ra, *rb));
      }
      if (!open) out.insert(Formula::disj(std::move(ds)));
    }
  }
  return Formula::conj(std::vector<Formula>(out.begin(), out.end()));
}

}  // namespace dmt::qe

namespace dmt {

Formula euf_cover(const std::vector<Var>& eliminate, const std::vector<Literal>& matrix) {
  for (const auto& l : matrix)
    if (l.atom.kind() == Atom::Kind::Lin) throw QeError("euf_cover: arithmetic literal " + to_string(l));
  return tame_cover({eliminate, matrix}).formula;
}

}  // namespace dmt
