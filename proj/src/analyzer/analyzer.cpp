#include "dmt/analyzer.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace dmt {

SortGraph sort_graph(const Signature& sig) {
  SortGraph g;
  for (const auto& s : sig.sorts()) g.sorts.push_back(s.name);
  for (const auto& f : sig.functions())
    for (const auto& a : f.args) g.edges.emplace(a, f.result);
  return g;
}

AcyclicReport check_acyclic(const Signature& sig) {
  AcyclicReport r;
  r.graph = sort_graph(sig);
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::function<bool(const std::string&)> dfs = [&](const std::string& s) {
    color[s] = 1;
    stack.push_back(s);
    for (const auto& [a, b] : r.graph.edges) {
      if (a != s) continue;
      if (color[b] == 1) {
        r.cycle.assign(std::find(stack.begin(), stack.end(), b), stack.end());
        return true;
      }
      if (color[b] == 0 && dfs(b)) return true;
    }
    stack.pop_back();
    color[s] = 2;
    return false;
  };
  for (const auto& s : r.graph.sorts)
    if (color[s] == 0 && dfs(s)) {
      r.acyclic = false;
      break;
    }
  return r;
}

bool check_tame(const Signature& sig) {
  for (const auto& [a, b] : sort_graph(sig).edges)
    if (a == kRatSort) return false;
  return true;
}

namespace {

bool is_mc(const Atom& a) {
  if (a.kind() != Atom::Kind::Lin) return true;
  const auto& ts = a.expr().terms();
  if (ts.size() <= 1) return true;
  return ts.size() == 2 && ts[0].second == -ts[1].second && a.expr().constant() == 0;
}

}  // namespace

McReport check_mc(const Dmt& d, const Property& psi) {
  McReport r;
  std::set<std::string> seen;
  auto scan = [&](const Formula& f) {
    for (const auto& a : atoms_of(f))
      if (!is_mc(a) && seen.insert(to_string(a)).second) r.offending.push_back(to_string(a));
  };
  for (const auto& t : d.transitions) scan(t.guard);
  for (const auto& c : leaves(psi)) scan(c);
  r.mc = r.offending.empty();
  return r;
}

std::string ComputationGraph::node_name(int n) const {
  const auto nv = variables.size();
  return variables[n % nv].name + "_" + std::to_string(n / nv);
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

// Collects variable pairs per literal. Ids below nv are process-variable
// nodes; bound variables get fresh ids per quantifier occurrence.
class Collector {
 public:
  Collector(const std::vector<Var>& vars, unsigned length) : nv_(vars.size() * (length + 1)), next_(static_cast<int>(nv_)) {
    for (std::size_t i = 0; i < vars.size(); ++i) pos_.emplace(vars[i].name, i);
    width_ = vars.size();
    length_ = length;
  }

  void walk(const Formula& f, bool positive) {
    switch (f.kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False: return;
      case Formula::Kind::Atom: return atom(f.as_atom(), positive);
      case Formula::Kind::Not: return walk(f.children()[0], !positive);
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& c : f.children()) walk(c, positive);
        return;
      case Formula::Kind::Exists: {
        std::vector<std::pair<Var, std::optional<int>>> saved;
        for (const auto& b : f.bound()) {
          auto it = scope_.find(b);
          saved.emplace_back(b, it == scope_.end() ? std::nullopt : std::optional<int>(it->second));
          scope_[b] = next_++;
        }
        walk(f.children()[0], positive);
        for (const auto& [b, old] : saved) {
          if (old)
            scope_[b] = *old;
          else
            scope_.erase(b);
        }
        return;
      }
    }
  }

  // Edges between process-variable nodes, closing over bound variables.
  std::set<std::pair<int, int>> close(const std::vector<std::pair<int, int>>& raw) const {
    UnionFind uf(next_);
    for (const auto& [a, b] : raw)
      if (a >= static_cast<int>(nv_) && b >= static_cast<int>(nv_)) uf.unite(a, b);
    std::map<int, std::set<int>> attached;  // bound component -> process nodes
    std::set<std::pair<int, int>> out;
    auto add = [&](int a, int b) {
      if (a != b) out.emplace(std::min(a, b), std::max(a, b));
    };
    for (const auto& [a, b] : raw) {
      bool ba = a >= static_cast<int>(nv_), bb = b >= static_cast<int>(nv_);
      if (!ba && !bb) add(a, b);
      if (ba && !bb) attached[uf.find(a)].insert(b);
      if (!ba && bb) attached[uf.find(b)].insert(a);
    }
    for (const auto& [c, ns] : attached)
      for (int a : ns)
        for (int b : ns) add(a, b);
    return out;
  }

  std::vector<std::pair<int, int>> all, eq;

 private:
  std::optional<int> id(const Var& v) const {
    if (auto it = scope_.find(v); it != scope_.end()) return it->second;
    if (v.annot != Annot::Index || v.index > length_) return std::nullopt;
    auto it = pos_.find(v.name);
    if (it == pos_.end()) return std::nullopt;
    return static_cast<int>(v.index * width_ + it->second);
  }

  void ids(const Term& t, std::vector<int>& out) const {
    if (t.is_var()) {
      if (auto i = id(t.var())) out.push_back(*i);
      return;
    }
    for (const auto& a : t.args()) ids(a, out);
  }

  void pairs(const std::vector<int>& a, const std::vector<int>& b) {
    for (int x : a)
      for (int y : b)
        if (x != y) all.emplace_back(x, y);
  }

  void atom(const Atom& a, bool positive) {
    switch (a.kind()) {
      case Atom::Kind::Rel: {
        std::vector<int> vs;
        for (const auto& t : a.args()) ids(t, vs);
        pairs(vs, vs);
        return;
      }
      case Atom::Kind::Eq: {
        std::vector<int> vs;
        for (const auto& t : a.args()) ids(t, vs);
        pairs(vs, vs);
        const Term &l = a.args()[0], &r = a.args()[1];
        if (positive && l.is_var() && r.is_var()) {
          auto x = id(l.var()), y = id(r.var());
          if (x && y && *x != *y) eq.emplace_back(*x, *y);
        }
        return;
      }
      case Atom::Kind::Lin: {
        std::vector<int> pos, neg;
        for (const auto& [t, k] : a.expr().terms()) ids(t, k > 0 ? pos : neg);
        if (pos.empty() || neg.empty()) {
          auto vs = pos.empty() ? neg : pos;
          pairs(vs, vs);
        } else {
          pairs(pos, neg);
        }
        const auto& ts = a.expr().terms();
        if (positive && a.op() == LinOp::Eq && ts.size() == 2 && ts[0].first.is_var() && ts[1].first.is_var() &&
            ts[0].second == -ts[1].second && a.expr().constant() == 0) {
          auto x = id(ts[0].first.var()), y = id(ts[1].first.var());
          if (x && y && *x != *y) eq.emplace_back(*x, *y);
        }
        return;
      }
    }
  }

  std::size_t nv_;
  int next_;
  std::size_t width_ = 0;
  unsigned length_ = 0;
  std::map<std::string, std::size_t> pos_;
  std::map<Var, int> scope_;
};

}  // namespace

ComputationGraph build_computation_graph(const Dmt& d, const HistoryFormula& h) {
  ComputationGraph g;
  g.variables = d.variables();
  g.length = h.length;
  Collector c(g.variables, h.length);
  c.walk(h.formula, true);
  g.edges = c.close(c.all);
  g.equality_edges = c.close(c.eq);
  g.edges.insert(g.equality_edges.begin(), g.equality_edges.end());
  return g;
}

ComputationGraph build_computation_graph(const Dmt& d, const std::vector<std::string>& sigma, const Word& w) {
  return build_computation_graph(d, history(d, sigma, w));
}

unsigned ComputationGraph::longest_collapsed_path(unsigned cap, std::vector<int>* path) const {
  const int n = static_cast<int>(node_count());
  UnionFind uf(n);
  for (const auto& [a, b] : equality_edges) uf.unite(a, b);
  std::map<int, std::set<int>> adj;
  for (const auto& [a, b] : edges) {
    int x = uf.find(a), y = uf.find(b);
    if (x == y) continue;
    adj[x].insert(y);
    adj[y].insert(x);
  }
  unsigned best = 0;
  std::vector<int> cur, best_path;
  std::set<int> on;
  std::function<void(int)> dfs = [&](int x) {
    if (cur.size() - 1 > best) {
      best = static_cast<unsigned>(cur.size() - 1);
      best_path = cur;
    }
    if (best > cap) return;
    for (int y : adj[x]) {
      if (on.count(y)) continue;
      on.insert(y);
      cur.push_back(y);
      dfs(y);
      cur.pop_back();
      on.erase(y);
      if (best > cap) return;
    }
  };
  for (const auto& [x, ys] : adj) {
    on = {x};
    cur = {x};
    dfs(x);
    if (best > cap) break;
  }
  if (path) *path = best_path;
  return best;
}

std::string computation_graph_to_dot(const ComputationGraph& g) {
  std::ostringstream os;
  os << "graph computation {\n  node [shape=point];\n";
  for (unsigned i = 0; i <= g.length; ++i)
    for (std::size_t v = 0; v < g.variables.size(); ++v) {
      int n = g.node(v, i);
      os << "  n" << n << " [xlabel=\"" << g.node_name(n) << "\", pos=\"" << i << "," << -static_cast<long>(v) << "!\"];\n";
    }
  for (const auto& [a, b] : g.edges)
    os << "  n" << a << " -- n" << b << (g.equality_edges.count({a, b}) ? " [style=dotted]" : "") << ";\n";
  os << "}\n";
  return os.str();
}

std::string to_string(LookbackResult::Status s) {
  switch (s) {
    case LookbackResult::Status::Holds: return "holds";
    case LookbackResult::Status::Violated: return "violated";
    case LookbackResult::Status::UnknownUpTo: return "unknownUpTo";
  }
  return "?";
}

LookbackResult check_bounded_lookback(const Dmt& d, const Property& psi, unsigned k, unsigned limit, Gateway& gw) {
  LookbackResult res;
  res.k = k;
  res.limit = limit;
  PhaseScope phase(gw, "lookback");
  // constraints over a single variable add no edges and only restrict H
  std::vector<Formula> rel;
  for (const auto& c : leaves(psi)) {
    std::set<std::string> names;
    for (const auto& v : free_variables(c)) names.insert(v.name);
    if (names.size() >= 2) rel.push_back(c);
  }
  std::vector<ConstraintSet> letters;
  for (unsigned m = 0; m < (1u << rel.size()); ++m) {
    ConstraintSet s;
    for (std::size_t i = 0; i < rel.size(); ++i)
      if (m & (1u << i)) s.insert(rel[i]);
    Formula f = Formula::conj(std::vector<Formula>(s.begin(), s.end()));
    bool ok = true;
    try {
      ok = gw.is_sat(f);
    } catch (const SolverUnknown&) {
    }
    if (ok) letters.push_back(std::move(s));
  }
  auto sat = [&]() {
    SatResult r = gw.check();
    return r.verdict != SatVerdict::Unsat;
  };
  auto letter_formula = [](const ConstraintSet& s, unsigned i) {
    return rename_to_index(Formula::conj(std::vector<Formula>(s.begin(), s.end())), i);
  };

  std::vector<std::string> sigma;
  Word w;
  bool cut = false;
  std::optional<unsigned> found;  // length of the shortest violation so far
  std::function<void()> dfs = [&]() {
    ++res.probes;
    const unsigned n = static_cast<unsigned>(sigma.size());
    std::vector<int> path;
    ComputationGraph g = build_computation_graph(d, sigma, w);
    unsigned len = g.longest_collapsed_path(k, &path);
    if (len > k) {
      if (!found || n < *found) {
        found = n;
        res.sigma = sigma;
        res.word = w;
        res.path_length = len;
        res.path.clear();
        for (int p : path) res.path.push_back(g.node_name(p));
      }
      return;  // extensions only add edges
    }
    if (found && n + 1 >= *found) return;
    for (const auto& t : d.transitions) {
      Formula step = instantiate_transition(extended_transition(d, t), n, n + 1);
      for (const auto& l : letters) {
        gw.push();
        gw.add(step && letter_formula(l, n + 1));
        bool ok = sat();
        if (ok && n == limit) {
          cut = true;
          gw.pop();
          return;
        }
        if (ok) {
          sigma.push_back(t.name);
          w.push_back(l);
          dfs();
          sigma.pop_back();
          w.pop_back();
        }
        gw.pop();
      }
    }
  };
  for (const auto& l : letters) {
    gw.push();
    gw.add(initial_formula(d, 0) && letter_formula(l, 0));
    if (sat()) {
      w = {l};
      dfs();
    }
    gw.pop();
  }
  if (found)
    res.status = LookbackResult::Status::Violated;
  else
    res.status = cut ? LookbackResult::Status::UnknownUpTo : LookbackResult::Status::Holds;
  return res;
}

std::string to_string(DecidableClass c) {
  switch (c) {
    case DecidableClass::I: return "I";
    case DecidableClass::II: return "II";
    case DecidableClass::III: return "III";
    case DecidableClass::IV: return "IV";
    case DecidableClass::None: return "none";
  }
  return "?";
}

ClassReport classify(const Dmt& d, const Property& psi, Gateway& gw, const ClassifyOptions& opt) {
  ClassReport r;
  const Signature& sig = d.ctx.signature;
  r.acyclic = check_acyclic(sig);
  r.tame = check_tame(sig);
  r.arithmetic = sig.has_rational();
  r.mc = check_mc(d, psi);
  r.locally_finite_asserted = opt.locally_finite;
  if (r.acyclic.acyclic && !r.arithmetic)
    r.decidable = DecidableClass::I;
  else if (r.acyclic.acyclic && r.tame && r.mc.mc)
    r.decidable = DecidableClass::II;
  else if (opt.locally_finite)
    r.decidable = DecidableClass::III;
  if (r.decidable == DecidableClass::None || opt.always_probe) {
    r.lookback = check_bounded_lookback(d, psi, opt.k, opt.limit, gw);
    if (r.decidable == DecidableClass::None) {
      if (r.lookback->status == LookbackResult::Status::Holds)
        r.decidable = DecidableClass::IV;
      else if (r.lookback->status == LookbackResult::Status::UnknownUpTo)
        r.candidate = DecidableClass::IV;
    }
  }
  return r;
}

}  // namespace dmt
