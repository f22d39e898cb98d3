#include "ietlab/real.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "ietlab/error.hpp"

namespace ietlab {

namespace {
thread_local mpfr_prec_t g_working_precision = 256;

mpfr_prec_t max_prec(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

mpfr_prec_t working_precision() noexcept { return g_working_precision; }
void set_working_precision(mpfr_prec_t bits) noexcept {
  g_working_precision = std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN);
}

Real::Real(mpfr_prec_t bits, Uninit) { mpfr_init2(v_, bits); }

Real::Real() : Real(working_precision(), Real::Uninit{}) { mpfr_set_zero(v_, 1); }
Real::Real(int v) : Real(working_precision(), Real::Uninit{}) { mpfr_set_si(v_, v, MPFR_RNDN); }
Real::Real(long v) : Real(working_precision(), Real::Uninit{}) { mpfr_set_si(v_, v, MPFR_RNDN); }
Real::Real(double v) : Real(working_precision(), Real::Uninit{}) { mpfr_set_d(v_, v, MPFR_RNDN); }
Real::Real(double v, mpfr_prec_t bits) : Real(bits, Real::Uninit{}) { mpfr_set_d(v_, v, MPFR_RNDN); }
Real::Real(const mpq_class& q, mpfr_prec_t bits) : Real(bits, Real::Uninit{}) {
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}
Real::Real(const mpz_class& z, mpfr_prec_t bits) : Real(bits, Real::Uninit{}) {
  mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
}

Real Real::parse(std::string_view text, mpfr_prec_t bits) {
  Real r(bits, Real::Uninit{});
  std::string s(text);
  char* end = nullptr;
  if (s.empty() || mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN), end != s.c_str() + s.size()) {
    throw InvalidInput("not a decimal number: '" + s + "'");
  }
  return r;
}

Real Real::pi(mpfr_prec_t bits) {
  Real r(bits, Real::Uninit{});
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) : Real(other.precision(), Real::Uninit{}) { mpfr_set(v_, other.v_, MPFR_RNDN); }
Real::Real(Real&& other) noexcept : Real(other.precision(), Real::Uninit{}) { mpfr_swap(v_, other.v_); }
Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (precision() != other.precision()) mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}
Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

void Real::set_precision(mpfr_prec_t bits) { mpfr_prec_round(v_, bits, MPFR_RNDN); }

mpq_class Real::to_rational() const {
  if (!mpfr_number_p(v_)) throw std::domain_error("non-finite Real");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long k) {
  mpfr_mul_si(v_, v_, k, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long k) {
  mpfr_div_si(v_, v_, k, MPFR_RNDN);
  return *this;
}

Real& Real::add_mul(const Real& x, long k) {
  if (k == 0) return *this;
  if (k == 1) return *this += x;
  if (k == -1) return *this -= x;
  Real t(std::max(precision(), x.precision()), Real::Uninit{});
  mpfr_mul_si(t.v_, x.v_, k, MPFR_RNDN);
  return *this += t;
}

Real& Real::add_mul(const Real& x, const Real& y) {
  mpfr_prec_t p = std::max({precision(), x.precision(), y.precision()});
  if (p > precision()) mpfr_prec_round(v_, p, MPFR_RNDN);
  mpfr_fma(v_, x.v_, y.v_, v_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(precision(), Real::Uninit{});
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b), Real::Uninit{});
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b), Real::Uninit{});
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b), Real::Uninit{});
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b), Real::Uninit{});
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long k) {
  Real r(a.precision(), Real::Uninit{});
  mpfr_mul_si(r.v_, a.v_, k, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Real& a, long b) noexcept {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define IETLAB_REAL_UNARY(name, call)             \
  Real name(const Real& x) {                      \
    Real r(x.precision(), Real::Uninit{});        \
    call;                                         \
    return r;                                     \
  }

IETLAB_REAL_UNARY(abs, mpfr_abs(r.v_, x.v_, MPFR_RNDN))
IETLAB_REAL_UNARY(sqrt, mpfr_sqrt(r.v_, x.v_, MPFR_RNDN))
IETLAB_REAL_UNARY(log, mpfr_log(r.v_, x.v_, MPFR_RNDN))
IETLAB_REAL_UNARY(exp, mpfr_exp(r.v_, x.v_, MPFR_RNDN))
IETLAB_REAL_UNARY(floor, mpfr_floor(r.v_, x.v_))
IETLAB_REAL_UNARY(round, mpfr_round(r.v_, x.v_))
IETLAB_REAL_UNARY(sin, mpfr_sin(r.v_, x.v_, MPFR_RNDN))
IETLAB_REAL_UNARY(cos, mpfr_cos(r.v_, x.v_, MPFR_RNDN))

#undef IETLAB_REAL_UNARY

Real frac(const Real& x) {
  Real r = x;
  r -= floor(x);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

}  // namespace ietlab
