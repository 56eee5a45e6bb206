#include <algorithm>

#include "dmt/nfa.hpp"

namespace dmt {

bool DeltaContext::satisfiable(const LSymbol& s) {
  if (s.last && s.not_last) return false;
  if (s.cs.empty()) return true;
  if (auto it = sat_.find(s.cs); it != sat_.end()) return it->second;
  PhaseScope ph(gw_, "nfa-construction");
  // unknown keeps the symbol; the product re-checks every step
  bool r = gw_.check_sat(Formula::conj(std::vector<Formula>(s.cs.begin(), s.cs.end()))).verdict != SatVerdict::Unsat;
  sat_.emplace(s.cs, r);
  return r;
}

const std::set<DeltaEntry>& DeltaContext::delta(const Property& q) {
  if (auto it = memo_.find(q); it != memo_.end()) return it->second;
  auto r = compute(q);
  return memo_.emplace(q, std::move(r)).first->second;
}

std::set<DeltaEntry> DeltaContext::combine(const std::set<DeltaEntry>& a, const std::set<DeltaEntry>& b, bool conj) {
  std::set<DeltaEntry> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      LSymbol s = x.symbol;
      s.cs.insert(y.symbol.cs.begin(), y.symbol.cs.end());
      s.last = s.last || y.symbol.last;
      s.not_last = s.not_last || y.symbol.not_last;
      if (!satisfiable(s)) continue;
      Property p = conj ? Property::conj({x.next, y.next}) : Property::disj({x.next, y.next});
      out.insert({std::move(p), std::move(s)});
    }
  }
  return out;
}

std::set<DeltaEntry> DeltaContext::compute(const Property& q) {
  using K = Property::Kind;
  const LSymbol empty;
  const LSymbol last{{}, true, false}, not_last{{}, false, true};
  switch (q.kind()) {
    case K::True: return {{Property::top(), empty}};
    case K::False: return {{Property::bottom(), empty}};
    case K::Leaf: return {{Property::top(), LSymbol{{q.constraint()}, false, false}}, {Property::bottom(), empty}};
    case K::And:
      // a conjunction of constraints reads them as one symbol; the omitted
      // entries (bottom, subset) are subsumed by (bottom, {})
      if (std::all_of(q.children().begin(), q.children().end(),
                      [](const Property& c) { return c.kind() == K::Leaf; })) {
        LSymbol all;
        for (const auto& c : q.children()) all.cs.insert(c.constraint());
        std::set<DeltaEntry> out = {{Property::bottom(), empty}};
        if (satisfiable(all)) out.insert({Property::top(), all});
        return out;
      }
      [[fallthrough]];
    case K::Or: {
      auto ch = q.children();
      std::set<DeltaEntry> acc = delta(ch[0]);
      for (std::size_t i = 1; i < ch.size(); ++i) acc = combine(acc, delta(ch[i]), q.kind() == K::And);
      return acc;
    }
    case K::Next: return {{q.children()[0], not_last}, {Property::bottom(), last}};
    case K::Globally: {
      const std::set<DeltaEntry> lam = {{Property::top(), last}, {Property::bottom(), not_last}};
      return combine(delta(q.children()[0]), combine(delta(Property::next(q)), lam, false), true);
    }
    case K::Until: {
      const auto& a = delta(q.children()[0]);
      const auto& b = delta(q.children()[1]);
      return combine(b, combine(a, delta(Property::next(q)), true), false);
    }
  }
  return {};
}

std::set<DeltaEntry> delta(const Property& q, Gateway& gw) {
  DeltaContext ctx(gw);
  return ctx.delta(q);
}

}  // namespace dmt
