#include "ietlab/rational.hpp"

#include <cctype>
#include <sstream>
#include <string>

#include "ietlab/error.hpp"

namespace ietlab {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_integer_text(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

BigInt parse_integer(const std::string& s) {
  if (!is_integer_text(s)) throw InvalidInput("not an integer: '" + s + "'");
  return BigInt(s[0] == '+' ? s.substr(1) : s, 10);
}

// Decimal literal with optional fraction and exponent, converted exactly.
Rational parse_decimal(const std::string& s) {
  std::size_t epos = s.find_first_of("eE");
  std::string mant = s.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) {
    std::string e = s.substr(epos + 1);
    if (!is_integer_text(e)) throw InvalidInput("bad exponent in '" + s + "'");
    exp10 = std::stol(e);
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::size_t dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || !is_integer_text(digits)) throw InvalidInput("not a number: '" + s + "'");
  Rational q(BigInt(digits, 10));
  BigInt p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0)
    q /= Rational(p10);
  else
    q *= Rational(p10);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidInput("empty number");
  std::size_t slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt p = parse_integer(trim(s.substr(0, slash)));
    BigInt q = parse_integer(trim(s.substr(slash + 1)));
    if (q == 0) throw InvalidInput("zero denominator in '" + s + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (is_integer_text(s)) return Rational(parse_integer(s));
  return parse_decimal(s);
}

Rational ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const BigInt& z) { return z.get_str(10); }

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (text.find(',') == std::string_view::npos) {
    std::istringstream in{std::string(text)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    if (out.empty()) throw InvalidInput("empty list");
    return out;
  }
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string tok = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (tok.empty()) throw InvalidInput("empty entry in list '" + std::string(text) + "'");
    out.push_back(tok);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  for (const auto& tok : split_list(text)) out.push_back(parse_rational(tok));
  return out;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational sum(const std::vector<Rational>& a) {
  Rational s = 0;
  for (const auto& x : a) s += x;
  return s;
}

}  // namespace ietlab
