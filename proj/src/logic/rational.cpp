#include "dmt/rational.hpp"

#include <functional>
#include <stdexcept>

namespace dmt {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad number '" + s + "'");
    q.canonicalize();
    return q;
  }
  std::string intpart = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  bool neg = !intpart.empty() && intpart[0] == '-';
  if (neg) intpart.erase(0, 1);
  if (intpart.empty()) intpart = "0";
  for (char c : intpart + frac)
    if (c < '0' || c > '9') throw std::invalid_argument("bad number '" + s + "'");
  mpz_class num(intpart + frac, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational q(num, den);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::size_t hash_value(const Rational& q) {
  return std::hash<std::string>{}(to_string(q));
}

}  // namespace dmt
