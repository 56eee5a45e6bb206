#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace dmt {

using Rational = mpq_class;

// "4", "-1/5"; always canonical.
std::string to_string(const Rational& q);

// Accepts integers, fractions "a/b" and decimals "0.25".
Rational parse_rational(std::string_view text);

std::size_t hash_value(const Rational& q);

}  // namespace dmt
