#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace ietlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal ("0.05", "-1.5e-3")
/// into an exact rational. Throws InvalidInput on malformed text.
Rational parse_rational(std::string_view text);
/// num / den in canonical form; throws InvalidInput when den == 0.
Rational ratio(const BigInt& num, const BigInt& den);

/// Canonical text form: "p/q" or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Splits a comma-separated list ("1/3, 2/3") into trimmed tokens; without commas, splits on whitespace.
std::vector<std::string> split_list(std::string_view text);

std::vector<Rational> parse_rational_list(std::string_view text);

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b);
Rational sum(const std::vector<Rational>& a);

}  // namespace ietlab
