#include "dmt/product.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "dmt/qe.hpp"

namespace dmt {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::WitnessFound: return "witnessFound";
    case Outcome::NoWitness: return "noWitness";
    case Outcome::BudgetExceeded: return "budgetExceeded";
  }
  return "?";
}

std::size_t ProductGraph::final_count() const {
  std::size_t n = 0;
  for (const auto& p : nodes) n += p.final;
  return n;
}

std::vector<int> ProductGraph::path_to(int n) const {
  std::vector<int> path;
  for (int e = nodes.at(n).parent_edge; e >= 0; e = nodes[edges[e].from].parent_edge) path.push_back(e);
  return {path.rbegin(), path.rend()};
}

namespace {

SolverStats diff(const SolverStats& now, const SolverStats& then) {
  SolverStats s = now;
  s.checks -= then.checks;
  s.wall -= then.wall;
  for (auto& [k, p] : s.phases) {
    auto it = then.phases.find(k);
    if (it == then.phases.end()) continue;
    p.count -= it->second.count;
    p.time -= it->second.time;
  }
  std::erase_if(s.phases, [](const auto& kv) { return kv.second.count == 0; });
  return s;
}

Formula conj_of(const ConstraintSet& s) { return Formula::conj(std::vector<Formula>(s.begin(), s.end())); }

class Expander {
 public:
  Expander(const Dmt& d, const PropertyNfa& nfa, Gateway& gw, const ProductBudget& b)
      : d_(d), nfa_(nfa), gw_(gw), b_(b), out_(nfa_.out_edges()), start_(std::chrono::steady_clock::now()) {}

  ProductResult run() {
    ProductResult res;
    res.nfa = nfa_;
    Verdict& v = res.verdict;
    const SolverStats before = gw_.stats();
    try {
      expand(v);
    } catch (const QeError& e) {
      fail(v, std::string("elimination failed: ") + e.what());
    } catch (const SolverUnknown& e) {
      fail(v, std::string("solver unknown: ") + e.what());
    } catch (const SmtError& e) {
      fail(v, std::string("solver error: ") + e.what());
    }
    res.graph = std::move(g_);
    v.nodes = res.graph.nodes.size();
    v.edges = res.graph.edges.size();
    v.merges = merges_;
    v.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
    v.stats = diff(gw_.stats(), before);
    return res;
  }

 private:
  static void fail(Verdict& v, std::string why) {
    v.outcome = Outcome::BudgetExceeded;
    v.diagnostic = std::move(why);
  }

  bool over_time() const { return std::chrono::steady_clock::now() - start_ > b_.time; }

  void expand(Verdict& v) {
    ProductNode p0;
    p0.nfa_state = nfa_.initial;
    p0.formula = rename_from_index(initial_formula(d_, 0), 0);
    p0.initial = true;
    g_.nodes.push_back(p0);
    std::deque<int> frontier{0};
    std::optional<int> first_final;
    bool cut = false;
    while (!frontier.empty()) {
      if (over_time()) return fail(v, "time budget exhausted");
      int n = frontier.front();
      frontier.pop_front();
      if (b_.max_depth && g_.nodes[n].depth >= b_.max_depth) {
        cut = true;
        continue;
      }
      const bool is_p0 = n == 0;
      std::vector<std::optional<std::string>> steps;
      if (is_p0)
        steps.push_back(std::nullopt);
      else
        for (const auto& t : d_.transitions) steps.push_back(t.name);
      for (const auto& t : steps) {
        const Formula phi = g_.nodes[n].formula;
        Formula u = phi;
        if (t) {
          PhaseScope ps(gw_, "update");
          u = update(d_, phi, d_.transition(*t), &gw_);
          if (!gw_.is_sat(u)) continue;
        }
        for (int ei : out_[g_.nodes[n].nfa_state]) {
          if (over_time()) return fail(v, "time budget exhausted");
          const NfaEdge& e = nfa_.edges[ei];
          Formula xi = Formula::bottom();
          {
            PhaseScope ps(gw_, "update");
            xi = eliminate({}, u && conj_of(e.label), &gw_);
            if (xi.is_false() || !gw_.is_sat(xi)) continue;
          }
          auto [target, created] = place(e.to, xi, g_.nodes[n].depth + 1);
          add_edge(n, target, t, e.label, created);
          if (created) {
            if (g_.nodes[target].final && !first_final) first_final = target;
            frontier.push_back(target);
            if (g_.nodes.size() > b_.max_nodes) return fail(v, "node budget exhausted");
          }
          if (b_.max_edges && g_.edges.size() > b_.max_edges) return fail(v, "edge budget exhausted");
          if (first_final && !b_.exhaustive) {
            v.outcome = Outcome::WitnessFound;
            v.accepting_path = g_.path_to(*first_final);
            return;
          }
        }
      }
    }
    if (first_final) {
      v.outcome = Outcome::WitnessFound;
      v.accepting_path = g_.path_to(*first_final);
    } else if (cut) {
      fail(v, "depth budget exhausted");
    } else {
      v.outcome = Outcome::NoWitness;
    }
  }

  // Existing equivalent node with the same NFA state, or a new node.
  std::pair<int, bool> place(int q, const Formula& xi, unsigned depth) {
    if (b_.merge) {
      for (std::size_t i = 1; i < g_.nodes.size(); ++i)
        if (g_.nodes[i].nfa_state == q && g_.nodes[i].formula == xi) {
          ++merges_;
          return {static_cast<int>(i), false};
        }
      PhaseScope ps(gw_, "merge");
      for (std::size_t i = 1; i < g_.nodes.size(); ++i)
        if (g_.nodes[i].nfa_state == q && gw_.check_equiv(g_.nodes[i].formula, xi)) {
          ++merges_;
          return {static_cast<int>(i), false};
        }
    }
    ProductNode p;
    p.nfa_state = q;
    p.formula = xi;
    p.final = nfa_.states[q].final;
    p.depth = depth;
    g_.nodes.push_back(std::move(p));
    return {static_cast<int>(g_.nodes.size()) - 1, true};
  }

  void add_edge(int from, int to, const std::optional<std::string>& t, const ConstraintSet& s, bool created) {
    for (const auto& e : g_.edges)
      if (e.from == from && e.to == to && e.transition == t && e.symbol == s) return;
    g_.edges.push_back({from, to, t, s});
    if (created) g_.nodes[to].parent_edge = static_cast<int>(g_.edges.size()) - 1;
  }

  const Dmt& d_;
  const PropertyNfa& nfa_;
  Gateway& gw_;
  const ProductBudget& b_;
  std::vector<std::vector<int>> out_;
  std::chrono::steady_clock::time_point start_;
  ProductGraph g_;
  std::size_t merges_ = 0;
};

}  // namespace

ProductResult expand(const Dmt& d, const PropertyNfa& nfa, Gateway& gw, const ProductBudget& budget) {
  return Expander(d, nfa, gw, budget).run();
}

std::vector<std::string> path_transitions(const ProductGraph& g, const std::vector<int>& path) {
  std::vector<std::string> out;
  for (int e : path)
    if (g.edges.at(e).transition) out.push_back(*g.edges[e].transition);
  return out;
}

Word path_word(const ProductGraph& g, const std::vector<int>& path) {
  Word w;
  for (int e : path) w.push_back(g.edges.at(e).symbol);
  return w;
}

Run extract_witness(const Dmt& d, const Property& psi, const ProductGraph& g, const std::vector<int>& path, Gateway& gw) {
  if (path.empty() || g.edges.at(path.front()).from != 0 || g.edges[path.front()].transition)
    throw std::logic_error("witness path must start with the initial step");
  if (!g.nodes.at(g.edges.at(path.back()).to).final) throw std::logic_error("witness path does not end in a final node");
  auto sigma = path_transitions(g, path);
  HistoryFormula h = history(d, sigma, path_word(g, path));
  PhaseScope ps(gw, "witness");
  SatResult r = gw.check_sat(h.formula, true);
  if (r.verdict == SatVerdict::Unknown) throw SolverUnknown("witness history: " + r.diagnostic);
  if (r.verdict == SatVerdict::Unsat || !r.model)
    throw std::logic_error("internal soundness violation: history of an accepting path is unsatisfiable");
  Run run = decode_run(d, *r.model, sigma, h.length);
  if (auto why = check_run(d, run); !why.empty())
    throw std::logic_error("internal soundness violation: decoded run is not a run: " + why);
  if (!evaluate_property(run, psi, d.ctx.signature))
    throw std::logic_error("internal soundness violation: decoded run does not satisfy the property");
  return run;
}

bool verify_path_invariant(const Dmt& d, const ProductGraph& g, const std::vector<int>& path, Gateway& gw) {
  if (path.empty()) return true;
  const Formula& phi = g.nodes.at(g.edges.at(path.back()).to).formula;
  PhaseScope ps(gw, "invariant");
  return gw.check_equiv(phi, history_exists(d, path_transitions(g, path), path_word(g, path), &gw));
}

ProductResult model_check(const Dmt& d, const Property& psi, Gateway& gw, const ProductBudget& budget) {
  const SolverStats before = gw.stats();
  PropertyNfa nfa;
  try {
    PhaseScope ps(gw, "nfa-construction");
    nfa = simplify_nfa(build_nfa(psi, gw));
  } catch (const SolverUnknown& e) {
    ProductResult res;
    res.verdict.diagnostic = std::string("solver unknown during NFA construction: ") + e.what();
    res.verdict.stats = diff(gw.stats(), before);
    return res;
  }
  ProductResult res = expand(d, nfa, gw, budget);
  if (res.verdict.outcome == Outcome::WitnessFound) {
    try {
      res.verdict.witness = extract_witness(d, psi, res.graph, res.verdict.accepting_path, gw);
    } catch (const SolverUnknown& e) {
      res.verdict.outcome = Outcome::BudgetExceeded;
      res.verdict.diagnostic = std::string("solver unknown during witness extraction: ") + e.what();
    }
  }
  res.verdict.stats = diff(gw.stats(), before);
  return res;
}

namespace {

std::string escape_record(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("{}|<>\"\\").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string product_to_dot(const ProductGraph& g, const PropertyNfa& nfa) {
  std::ostringstream os;
  os << "digraph product {\n  node [shape=Mrecord];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const ProductNode& p = g.nodes[i];
    os << "  p" << i << " [label=\"{" << escape_record(nfa.state_name(p.nfa_state)) << "|"
       << escape_record(to_string(p.formula)) << "}\"";
    if (p.final) os << ", peripheries=2";
    if (p.initial) os << ", style=bold";
    os << "];\n";
  }
  for (const auto& e : g.edges) {
    std::string label = (e.transition ? *e.transition : std::string("T")) + ", " + to_string(e.symbol);
    os << "  p" << e.from << " -> p" << e.to << " [label=\"" << escape(label) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dmt
