#include "ietlab/lattice.hpp"

#include <utility>

#include "ietlab/error.hpp"

namespace ietlab {

namespace {

void swap_rows(BigMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

// row_i -= q * row_r
void sub_mul_row(BigMatrix& m, std::size_t i, std::size_t r, const BigInt& q) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(r, j) != 0) m(i, j) -= q * m(r, j);
}

// (row_r, row_i) <- (s*row_r + t*row_i, u*row_r + v*row_i)
void combine_rows(BigMatrix& m, std::size_t r, std::size_t i, const BigInt& s, const BigInt& t,
                  const BigInt& u, const BigInt& v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    BigInt a = m(r, j), b = m(i, j);
    m(r, j) = s * a + t * b;
    m(i, j) = u * a + v * b;
  }
}

void negate_row(BigMatrix& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

HermiteResult hermite(const BigMatrix& a) {
  HermiteResult res;
  res.h = a;
  res.u = BigMatrix::identity(a.rows());
  BigMatrix& h = res.h;
  BigMatrix& u = res.u;
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    // Bring a nonzero entry into row r.
    if (h(r, c) == 0) {
      std::size_t k = r + 1;
      while (k < h.rows() && h(k, c) == 0) ++k;
      if (k == h.rows()) continue;
      swap_rows(h, r, k);
      swap_rows(u, r, k);
    }
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      BigInt g, s, t;
      const BigInt a0 = h(r, c), b0 = h(i, c);
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a0.get_mpz_t(), b0.get_mpz_t());
      BigInt uu = -b0 / g, vv = a0 / g;
      combine_rows(h, r, i, s, t, uu, vv);
      combine_rows(u, r, i, s, t, uu, vv);
    }
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t k = 0; k < r; ++k) {
      BigInt q;
      mpz_fdiv_q(q.get_mpz_t(), h(k, c).get_mpz_t(), h(r, c).get_mpz_t());
      if (q != 0) {
        sub_mul_row(h, k, r, q);
        sub_mul_row(u, k, r, q);
      }
    }
    res.pivotCols.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

BigMatrix integer_kernel(const BigMatrix& a) {
  HermiteResult hr = hermite(a.transpose());
  std::size_t n = a.cols();
  BigMatrix k(n - hr.rank, n);
  for (std::size_t i = hr.rank; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - hr.rank, j) = hr.u(i, j);
  return lattice_hnf(k);
}

BigMatrix lattice_hnf(const BigMatrix& rows) {
  HermiteResult hr = hermite(rows);
  BigMatrix out(hr.rank, rows.cols());
  for (std::size_t i = 0; i < hr.rank; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) out(i, j) = hr.h(i, j);
  return out;
}

bool same_lattice(const BigMatrix& rowsA, const BigMatrix& rowsB) {
  return rowsA.cols() == rowsB.cols() && lattice_hnf(rowsA) == lattice_hnf(rowsB);
}

std::size_t rref(RatMatrix& a) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

std::size_t rational_rank(const RatMatrix& a) {
  RatMatrix m = a;
  return rref(m);
}

std::size_t rational_rank(const BigMatrix& a) { return rational_rank(matrix_cast<Rational>(a)); }

RatMatrix rational_kernel(const RatMatrix& a) {
  RatMatrix m = a;
  std::size_t rank = rref(m);
  std::vector<std::size_t> pivots;
  std::vector<bool> isPivot(a.cols(), false);
  for (std::size_t i = 0, c = 0; i < rank; ++i) {
    while (m(i, c) == 0) ++c;
    pivots.push_back(c);
    isPivot[c] = true;
  }
  RatMatrix k(a.cols() - rank, a.cols());
  std::size_t row = 0;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (isPivot[f]) continue;
    k(row, f) = 1;
    for (std::size_t i = 0; i < rank; ++i) k(row, pivots[i]) = -m(i, f);
    ++row;
  }
  return k;
}

BigInt determinant(const BigMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return 1;
  BigMatrix m = a;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

RatMatrix rational_inverse(const RatMatrix& a) {
  std::size_t n = a.rows();
  if (n != a.cols()) throw InvalidInput("inverse of a non-square matrix");
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  rref(aug);
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (aug(i, i) != 1) throw InvalidInput("singular matrix");
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

BigMatrix unimodular_inverse(const BigMatrix& a) {
  RatMatrix inv = rational_inverse(matrix_cast<Rational>(a));
  BigMatrix out(inv.rows(), inv.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) {
      if (inv(i, j).get_den() != 1) throw InvalidInput("matrix is not unimodular");
      out(i, j) = inv(i, j).get_num();
    }
  return out;
}

BigMatrix integer_left_inverse(const BigMatrix& l) {
  std::size_t d = l.rows(), k = l.cols();
  HermiteResult hr = hermite(l);
  if (hr.rank != k) throw InvalidInput("columns are linearly dependent");
  BigMatrix t(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t(i, j) = hr.h(i, j);
  BigMatrix tinv = unimodular_inverse(t);
  BigMatrix utop(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) utop(i, j) = hr.u(i, j);
  return tinv * utop;
}

}  // namespace ietlab
