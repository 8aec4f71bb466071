#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace vfalg {

/// Exact rational number. GMP keeps every value in lowest terms with a
/// positive denominator as long as it is built through the helpers below.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `a` or `a/b` (optional leading '-', b > 0). Throws
/// std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// `num/den`, or just `num` when the denominator is 1.
std::string to_string(const Rational& value);

Rational factorial(unsigned n);

}  // namespace vfalg
