#include <doctest.h>

#include "ietlab/error.hpp"
#include "ietlab/lattice.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/real.hpp"

using namespace ietlab;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational(" -4/6 ") == Rational(-2, 3));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
  CHECK(parse_rational("12") == Rational(12));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
  CHECK(parse_rational_list("1/3, 2/3").size() == 2);
  CHECK(parse_rational_list(" 1/3  2/3 1 ") == std::vector<Rational>{Rational(1, 3), Rational(2, 3), Rational(1)});
  CHECK_THROWS_AS(parse_rational_list("1/3,,2/3"), InvalidInput);
  CHECK_THROWS_AS(parse_rational_list("  "), InvalidInput);
  CHECK(ratio(BigInt(4), BigInt(-6)) == Rational(-2, 3));
  CHECK(ratio(BigInt(4), BigInt(-6)).get_den() == 3);
  CHECK_THROWS_AS(ratio(BigInt(1), BigInt(0)), InvalidInput);
  CHECK_THROWS_AS(Real::parse("1/3", 64), InvalidInput);
}

TEST_CASE("real arithmetic keeps the wider precision") {
  Real a(1.0, 64), b(3.0, 512);
  Real c = a / b;
  CHECK(c.precision() == 512);
  CHECK(c.to_double() == doctest::Approx(1.0 / 3.0));
  PrecisionScope scope(100);
  CHECK(Real().precision() == 100);
  CHECK(frac(Real(-0.25)).to_double() == 0.75);
  CHECK(round(Real(2.5)).to_double() == 3.0);
  CHECK(Real::parse("0.1", 300).to_rational() != Rational(1, 10));
  CHECK(abs(Real::parse("0.1", 300) - Real(Rational(1, 10), 300)).to_double() < 1e-89);
}

TEST_CASE("hermite form and kernels") {
  BigMatrix a{{BigInt(2), BigInt(4), BigInt(6)}, {BigInt(1), BigInt(1), BigInt(1)}};
  auto hr = hermite(a);
  CHECK(hr.rank == 2);
  CHECK(hr.u * a == hr.h);
  CHECK(abs(determinant(hr.u)) == 1);
  BigMatrix k = integer_kernel(a);
  REQUIRE(k.rows() == 1);
  auto z = a * k.transpose();
  CHECK(z(0, 0) == 0);
  CHECK(z(1, 0) == 0);
  // kernel of x1 - x2 + x3 = 0 is the lattice spanned by (1,1,0),(0,1,1)
  BigMatrix eq{{BigInt(1), BigInt(-1), BigInt(1)}};
  BigMatrix expected{{BigInt(1), BigInt(1), BigInt(0)}, {BigInt(0), BigInt(1), BigInt(1)}};
  CHECK(same_lattice(integer_kernel(eq), expected));
  BigMatrix l = integer_kernel(eq).transpose();
  CHECK(integer_left_inverse(l) * l == BigMatrix::identity(2));
}

TEST_CASE("determinant and inverses") {
  BigMatrix m{{BigInt(2), BigInt(1)}, {BigInt(1), BigInt(1)}};
  CHECK(determinant(m) == 1);
  CHECK(unimodular_inverse(m) * m == BigMatrix::identity(2));
  BigMatrix s{{BigInt(2), BigInt(0)}, {BigInt(0), BigInt(1)}};
  CHECK(determinant(s) == 2);
  CHECK_THROWS_AS(unimodular_inverse(s), InvalidInput);
  BigMatrix p{{BigInt(0), BigInt(1), BigInt(0)}, {BigInt(1), BigInt(0), BigInt(0)}, {BigInt(0), BigInt(0), BigInt(1)}};
  CHECK(determinant(p) == -1);
}
