#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ietlab {

/// Working precision (bits) used by default-constructed Real values on the
/// calling thread. Each thread starts at 256 bits.
mpfr_prec_t working_precision() noexcept;
void set_working_precision(mpfr_prec_t bits) noexcept;

/// Sets the thread's working precision for the lifetime of the guard.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits) noexcept : saved_(working_precision()) {
    set_working_precision(bits);
  }
  ~PrecisionScope() { set_working_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Multi-precision binary floating point number (round-to-nearest).
///
/// Binary operations produce a result at the larger of the operand
/// precisions; mixed operations with machine integers or doubles keep the
/// Real operand's precision.
class Real {
 public:
  Real();
  Real(int v);  // NOLINT(google-explicit-constructor)
  Real(long v);  // NOLINT(google-explicit-constructor)
  explicit Real(double v);
  Real(double v, mpfr_prec_t bits);
  explicit Real(const mpq_class& q, mpfr_prec_t bits = working_precision());
  explicit Real(const mpz_class& z, mpfr_prec_t bits = working_precision());
  /// Parses a decimal literal ("0.37", "-1e-3") at the given precision.
  static Real parse(std::string_view text, mpfr_prec_t bits = working_precision());
  static Real pi(mpfr_prec_t bits = working_precision());

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(v_); }
  /// Rounds the value to a new precision.
  void set_precision(mpfr_prec_t bits);

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const noexcept { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Exact conversion of the binary value to a rational.
  mpq_class to_rational() const;
  /// Decimal representation with the given number of significant digits.
  std::string to_string(int digits = 40) const;
  int sign() const noexcept { return mpfr_sgn(v_); }
  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  /// Base-2 exponent e with 0.5 <= |x| / 2^e < 1 (0 for zero).
  long exponent() const noexcept { return is_zero() ? 0 : mpfr_get_exp(v_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long k);
  Real& operator/=(long k);
  /// this += x * k without a temporary.
  Real& add_mul(const Real& x, long k);
  Real& add_mul(const Real& x, const Real& y);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator*(const Real& a, long k);
  friend Real operator*(long k, const Real& a) { return a * k; }

  friend bool operator==(const Real& a, const Real& b) noexcept {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept;
  friend bool operator==(const Real& a, long b) noexcept { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const Real& a, long b) noexcept;

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real log(const Real& x);
  friend Real exp(const Real& x);
  friend Real floor(const Real& x);
  /// Nearest integer, halves away from zero.
  friend Real round(const Real& x);
  friend Real sin(const Real& x);
  friend Real cos(const Real& x);

  friend std::ostream& operator<<(std::ostream& os, const Real& x);

 private:
  struct Uninit {};
  Real(mpfr_prec_t bits, Uninit);
  mpfr_t v_;
};

/// Fractional part in [0, 1).
Real frac(const Real& x);

}  // namespace ietlab
