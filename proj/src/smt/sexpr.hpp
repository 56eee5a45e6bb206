#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dmt {

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> list;
  bool is_atom() const { return !atom.empty(); }
  std::string str() const;
};

SExpr parse_sexpr(std::string_view text);

}  // namespace dmt
