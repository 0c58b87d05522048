#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace bellman {

/// Exact arbitrary-precision rational. Always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Decimal points and exponents are rejected so
/// that no floating-point value can enter the exact engine.
Rational parse_rational(std::string_view text);

/// Canonical text form: "7/6", "-1", "0".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// p/q in canonical form (mpq_class(p, q) alone does not reduce).
inline Rational fraction(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

}  // namespace bellman
