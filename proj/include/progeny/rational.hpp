#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "progeny/errors.hpp"

namespace gw {

// Arbitrary-precision rational, always kept in canonical form (lowest terms,
// positive denominator).  mpq_class does NOT canonicalize on its own when
// constructed from num/den or from a string, so construction funnels through
// the helpers below.
using Rational = mpq_class;
using Integer = mpz_class;

// q = num/den, canonicalized.  den == 0 throws ParseError.
Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

// Accepts "3", "-3", "3/4", "-3/4" (optional whitespace trimmed).  Decimal or
// scientific literals are rejected with a hint naming the exact equivalent,
// so "0.3" fails with a suggestion to write 3/10.
Rational parse_rational(std::string_view text);

// Canonical emission: always an explicit denominator ("3/1", "-2/7").
std::string to_string(const Rational& x);

double to_double(const Rational& x);

// x^e for integer e (e < 0 requires x != 0).
Rational pow_int(const Rational& x, long e);

// Rising factorial x(x+1)...(x+n-1); empty product for n == 0.
Rational pochhammer(const Rational& x, unsigned long n);

Rational factorial(unsigned long n);

// Exact n-th root if one exists in Q, std::nullopt otherwise.  n >= 1;
// negative x only admits odd n.
std::optional<Rational> rational_root(const Rational& x, unsigned long n);

// base^e with rational exponent, exact or nothing: base > 0 (or base == 0
// with e > 0).  Returns std::nullopt when the result is irrational.
std::optional<Rational> rational_pow(const Rational& base, const Rational& e);

} // namespace gw
