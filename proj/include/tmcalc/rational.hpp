#pragma once

#include <gmpxx.h>

#include <string>

namespace tmcalc {

/// Exact rational coefficient; every symbolic computation stays inside Q.
using Rational = mpq_class;

/// "p/q" (or "p" when q == 1) in lowest terms.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p", "-p" or "p/q"; throws Error(InvalidArgument) on malformed text.
Rational parse_rational(const std::string& text);

} // namespace tmcalc
