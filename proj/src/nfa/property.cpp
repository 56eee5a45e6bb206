#include <algorithm>

#include "../logic/hash.hpp"
#include "dmt/nfa.hpp"

namespace dmt {

struct Property::Node {
  Kind kind;
  std::optional<Formula> leaf;
  std::vector<Property> children;
  std::size_t hash = 0;
};

Property Property::make(Kind k, std::vector<Property> children, std::optional<Formula> leaf) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  std::size_t h = hash_mix(0x71, static_cast<std::size_t>(k));
  if (leaf) h = hash_mix(h, leaf->hash());
  for (const auto& c : children) h = hash_mix(h, c.hash());
  n->hash = h;
  n->leaf = std::move(leaf);
  n->children = std::move(children);
  return Property(std::move(n));
}

Property Property::top() {
  static const Property t = make(Kind::True, {}, std::nullopt);
  return t;
}

Property Property::bottom() {
  static const Property f = make(Kind::False, {}, std::nullopt);
  return f;
}

Property Property::leaf(const Formula& c) {
  if (c.is_true()) return top();
  if (c.is_false()) return bottom();
  return make(Kind::Leaf, {}, c);
}

namespace {

using Clause = std::vector<Property>;  // sorted conjunction of temporal atoms

// Boolean structure is kept in DNF over leaves and temporal operators.
std::vector<Clause> dnf(const Property& p) {
  switch (p.kind()) {
    case Property::Kind::True: return {Clause{}};
    case Property::Kind::False: return {};
    case Property::Kind::And: return {Clause(p.children().begin(), p.children().end())};
    case Property::Kind::Or: {
      std::vector<Clause> out;
      for (const auto& c : p.children()) {
        auto d = dnf(c);
        out.insert(out.end(), d.begin(), d.end());
      }
      return out;
    }
    default: return {Clause{p}};
  }
}

}  // namespace

Property Property::from_dnf(std::vector<std::vector<Property>> cs) {
  std::sort(cs.begin(), cs.end(), [](const Clause& a, const Clause& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  // absorption: a clause containing a smaller clause is redundant
  std::vector<Clause> kept;
  for (auto& c : cs) {
    bool absorbed = std::any_of(kept.begin(), kept.end(), [&](const Clause& k) {
      return std::includes(c.begin(), c.end(), k.begin(), k.end());
    });
    if (!absorbed) kept.push_back(std::move(c));
  }
  if (kept.empty()) return bottom();
  if (kept.front().empty()) return top();
  std::vector<Property> ds;
  for (auto& c : kept) ds.push_back(c.size() == 1 ? c.front() : make(Kind::And, std::move(c), std::nullopt));
  if (ds.size() == 1) return ds.front();
  std::sort(ds.begin(), ds.end());
  return make(Kind::Or, std::move(ds), std::nullopt);
}

Property Property::conj(std::vector<Property> ps) {
  std::vector<Clause> acc = {Clause{}};
  for (const auto& p : ps) {
    std::vector<Clause> next;
    for (const auto& a : acc)
      for (const auto& b : dnf(p)) {
        Clause c;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        next.push_back(std::move(c));
      }
    acc = std::move(next);
  }
  return from_dnf(std::move(acc));
}

Property Property::disj(std::vector<Property> ps) {
  std::vector<Clause> acc;
  for (const auto& p : ps) {
    auto d = dnf(p);
    acc.insert(acc.end(), d.begin(), d.end());
  }
  return from_dnf(std::move(acc));
}

Property Property::next(const Property& p) { return make(Kind::Next, {p}, std::nullopt); }
Property Property::globally(const Property& p) { return make(Kind::Globally, {p}, std::nullopt); }
Property Property::until(const Property& a, const Property& b) { return make(Kind::Until, {a, b}, std::nullopt); }

Property::Kind Property::kind() const { return n_->kind; }
const Formula& Property::constraint() const { return *n_->leaf; }
std::span<const Property> Property::children() const { return n_->children; }
std::size_t Property::hash() const { return n_->hash; }

int compare(const Property& a, const Property& b) {
  if (a.n_ == b.n_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.kind() == Property::Kind::Leaf) return compare(a.constraint(), b.constraint());
  auto ca = a.children(), cb = b.children();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i)
    if (int c = compare(ca[i], cb[i])) return c;
  if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
  return 0;
}

namespace {

bool binary(const Property& p) {
  auto k = p.kind();
  return k == Property::Kind::And || k == Property::Kind::Or ||
         (k == Property::Kind::Until && !p.children()[0].is_true());
}

std::string wrap(const Property& p) { return binary(p) ? "(" + to_string(p) + ")" : to_string(p); }

}  // namespace

std::string to_string(const Property& p) {
  switch (p.kind()) {
    case Property::Kind::True: return "true";
    case Property::Kind::False: return "false";
    case Property::Kind::Leaf: return "[" + to_string(p.constraint()) + "]";
    case Property::Kind::And:
    case Property::Kind::Or: {
      std::string out;
      for (const auto& c : p.children()) {
        if (!out.empty()) out += p.kind() == Property::Kind::And ? " & " : " | ";
        out += wrap(c);
      }
      return out;
    }
    case Property::Kind::Next: return "X " + wrap(p.children()[0]);
    case Property::Kind::Globally: return "G " + wrap(p.children()[0]);
    case Property::Kind::Until:
      if (p.children()[0].is_true()) return "F " + wrap(p.children()[1]);
      return wrap(p.children()[0]) + " U " + wrap(p.children()[1]);
  }
  return "?";
}

std::vector<Formula> leaves(const Property& p) {
  std::vector<Formula> out;
  auto walk = [&](auto&& self, const Property& q) -> void {
    if (q.kind() == Property::Kind::Leaf) {
      if (std::find(out.begin(), out.end(), q.constraint()) == out.end()) out.push_back(q.constraint());
      return;
    }
    for (const auto& c : q.children()) self(self, c);
  };
  walk(walk, p);
  return out;
}

std::string to_string(const ConstraintSet& s) {
  std::string out = "{";
  for (const auto& f : s) {
    if (out.size() > 1) out += ", ";
    out += to_string(f);
  }
  return out + "}";
}

}  // namespace dmt
