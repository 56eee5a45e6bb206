#include <algorithm>
#include <deque>
#include <sstream>

#include "dmt/nfa.hpp"

namespace dmt {

namespace {
constexpr std::size_t kMaxNfaStates = 20000;
}  // namespace

std::vector<std::vector<int>> PropertyNfa::out_edges() const {
  std::vector<std::vector<int>> out(states.size());
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(static_cast<int>(i));
  return out;
}

std::string PropertyNfa::state_name(int s) const {
  const auto& st = states[s];
  return st.prop ? to_string(*st.prop) : "q_e";
}

int PropertyNfa::find_state(const Property& p) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].prop && *states[i].prop == p) return static_cast<int>(i);
  return -1;
}

int PropertyNfa::qe() const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!states[i].prop) return static_cast<int>(i);
  return -1;
}

PropertyNfa build_nfa(const Property& psi, Gateway& gw) {
  DeltaContext dc(gw);
  PropertyNfa n;
  n.constraints = leaves(psi);
  std::map<Property, int> ids;
  std::deque<int> work;
  auto intern = [&](const Property& p) {
    auto [it, fresh] = ids.emplace(p, static_cast<int>(n.states.size()));
    if (fresh) {
      n.states.push_back({p, p.is_true()});
      work.push_back(it->second);
    }
    return it->second;
  };
  n.initial = intern(psi);
  intern(Property::top());
  const int qe = static_cast<int>(n.states.size());
  n.states.push_back({std::nullopt, true});
  std::set<NfaEdge> edges;
  while (!work.empty()) {
    if (n.states.size() > kMaxNfaStates) throw std::runtime_error("nfa: more than " + std::to_string(kMaxNfaStates) + " states");
    int q = work.front();
    work.pop_front();
    Property p = *n.states[q].prop;
    for (const auto& e : dc.delta(p)) {
      int t = intern(e.next);
      if (!e.symbol.last)
        edges.insert({q, e.symbol.cs, t});
      else if (e.next.is_true())
        edges.insert({q, e.symbol.cs, qe});
    }
  }
  n.edges.assign(edges.begin(), edges.end());
  return n;
}

namespace {

bool subset(const ConstraintSet& a, const ConstraintSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Keeps the states flagged in keep, renumbering edges.
PropertyNfa restrict(const PropertyNfa& n, const std::vector<bool>& keep, const std::vector<NfaEdge>& edges) {
  PropertyNfa out;
  out.constraints = n.constraints;
  std::vector<int> map(n.states.size(), -1);
  for (std::size_t i = 0; i < n.states.size(); ++i) {
    if (!keep[i]) continue;
    map[i] = static_cast<int>(out.states.size());
    out.states.push_back(n.states[i]);
  }
  out.initial = map[n.initial];
  for (const auto& e : edges)
    if (map[e.from] >= 0 && map[e.to] >= 0) out.edges.push_back({map[e.from], e.label, map[e.to]});
  return out;
}

}  // namespace

PropertyNfa simplify_nfa(const PropertyNfa& n, SimplifyOptions opt) {
  // parallel edges with a strictly larger label are redundant
  std::vector<NfaEdge> edges;
  for (const auto& e : n.edges) {
    bool redundant = std::any_of(n.edges.begin(), n.edges.end(), [&](const NfaEdge& o) {
      return o.from == e.from && o.to == e.to && o.label != e.label && subset(o.label, e.label);
    });
    if (!redundant) edges.push_back(e);
  }
  std::vector<bool> keep(n.states.size(), true);
  int qe = n.qe();
  int qf = n.find_state(Property::top());
  if (!opt.keep_qe && qe >= 0 && qe != n.initial) {
    bool loop = qf >= 0 && std::any_of(edges.begin(), edges.end(), [&](const NfaEdge& e) {
                  return e.from == qf && e.to == qf && e.label.empty();
                });
    bool covered = std::all_of(edges.begin(), edges.end(), [&](const NfaEdge& e) {
      if (e.to != qe) return true;
      return std::any_of(edges.begin(), edges.end(), [&](const NfaEdge& o) {
        return o.from == e.from && o.to == qf && subset(o.label, e.label);
      });
    });
    bool incoming = std::any_of(edges.begin(), edges.end(), [&](const NfaEdge& e) { return e.to == qe; });
    if (!incoming || (loop && covered)) keep[qe] = false;
  }
  // forward reachability from the initial state
  std::vector<bool> fwd(n.states.size(), false);
  std::vector<int> stack = {n.initial};
  fwd[n.initial] = true;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.from == s && keep[e.to] && !fwd[e.to]) {
        fwd[e.to] = true;
        stack.push_back(e.to);
      }
  }
  // backward reachability from final states
  std::vector<bool> bwd(n.states.size(), false);
  for (std::size_t i = 0; i < n.states.size(); ++i)
    if (keep[i] && n.states[i].final) {
      bwd[i] = true;
      stack.push_back(static_cast<int>(i));
    }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.to == s && keep[e.from] && !bwd[e.from]) {
        bwd[e.from] = true;
        stack.push_back(e.from);
      }
  }
  for (std::size_t i = 0; i < n.states.size(); ++i)
    keep[i] = static_cast<int>(i) == n.initial || (keep[i] && fwd[i] && bwd[i]);
  return restrict(n, keep, edges);
}

namespace {

bool run(const PropertyNfa& n, const Word& w, bool consistent) {
  std::set<int> cur = {n.initial};
  for (const auto& letter : w) {
    std::set<int> next;
    for (const auto& e : n.edges)
      if (cur.count(e.from) && (consistent ? subset(e.label, letter) : e.label == letter)) next.insert(e.to);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](int s) { return n.states[s].final; });
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

bool nfa_accepts(const PropertyNfa& n, const Word& w) { return run(n, w, false); }
bool nfa_accepts_consistent(const PropertyNfa& n, const Word& w) { return run(n, w, true); }

std::string nfa_to_dot(const PropertyNfa& n) {
  std::ostringstream os;
  os << "digraph nfa {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t i = 0; i < n.states.size(); ++i)
    os << "  q" << i << " [shape=" << (n.states[i].final ? "doublecircle" : "circle") << ", label=\""
       << escape(n.state_name(static_cast<int>(i))) << "\"];\n";
  os << "  init -> q" << n.initial << ";\n";
  for (const auto& e : n.edges)
    os << "  q" << e.from << " -> q" << e.to << " [label=\"" << escape(to_string(e.label)) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace dmt
