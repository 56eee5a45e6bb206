#include <sstream>

#include "dmt/frontend.hpp"

namespace dmt {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

}  // namespace

std::string print_spec(const Dmt& d, const std::string& theory) {
  const Signature& sig = d.ctx.signature;
  std::ostringstream os;
  if (!d.name.empty()) os << "dmt " << d.name << ";\n";
  os << "theory " << theory << ";\n";
  for (const auto& s : sig.sorts())
    if (s.kind == SortKind::Uninterpreted) os << "sort " << s.name << ";\n";
  for (const auto& c : sig.constants()) os << "const " << c.name << " : " << c.sort << ";\n";
  for (const auto& g : d.ctx.distinct) os << "distinct " << join(g) << ";\n";
  for (const auto& f : sig.functions()) os << "function " << f.name << "(" << join(f.args) << ") : " << f.result << ";\n";
  for (const auto& r : sig.relations()) os << "relation " << r.name << "(" << join(r.args) << ");\n";
  for (const auto& v : sig.variables()) os << "var " << v.name << " : " << v.sort << " = " << to_string(d.initial.at(v.name)) << ";\n";
  for (const auto& t : d.transitions) os << "transition " << t.name << " : " << to_string(t.guard) << ";\n";
  for (const auto& f : d.ctx.facts) os << "fact " << to_string(f) << ";\n";
  return os.str();
}

std::string print_property(const Property& p) { return to_string(p) + ";\n"; }

}  // namespace dmt
