#include "sexpr.hpp"

#include <cctype>

#include "dmt/smt.hpp"

namespace dmt {

namespace {

struct Reader {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else if (s[i] == ';') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (i >= s.size()) throw SmtError("unexpected end of solver reply");
    if (s[i] == '(') {
      ++i;
      SExpr e;
      for (;;) {
        skip();
        if (i >= s.size()) throw SmtError("unbalanced solver reply");
        if (s[i] == ')') {
          ++i;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (s[i] == ')') throw SmtError("unexpected ')' in solver reply");
    std::size_t start = i;
    if (s[i] == '|') {
      ++i;
      while (i < s.size() && s[i] != '|') ++i;
      ++i;
    } else if (s[i] == '"') {
      ++i;
      while (i < s.size()) {
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            i += 2;
            continue;
          }
          break;
        }
        ++i;
      }
      ++i;
    } else {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')') ++i;
    }
    SExpr e;
    e.atom = std::string(s.substr(start, i - start));
    return e;
  }
};

}  // namespace

std::string SExpr::str() const {
  if (is_atom()) return atom;
  std::string r = "(";
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (k) r += ' ';
    r += list[k].str();
  }
  return r + ")";
}

SExpr parse_sexpr(std::string_view text) {
  Reader r{text};
  return r.read();
}

}  // namespace dmt
