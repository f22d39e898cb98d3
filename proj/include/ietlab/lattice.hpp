#pragma once

#include <cstddef>
#include <vector>

#include "ietlab/matrix.hpp"

namespace ietlab {

/// Row-style Hermite normal form: U * A = H with U unimodular and H in
/// reduced row echelon form over Z (positive pivots, entries above each
/// pivot reduced into [0, pivot)).
struct HermiteResult {
  BigMatrix h;
  BigMatrix u;
  std::size_t rank = 0;
  std::vector<std::size_t> pivotCols;
};
HermiteResult hermite(const BigMatrix& a);

/// Rows form a Z-basis of {x in Z^n : A x = 0}, in Hermite form.
BigMatrix integer_kernel(const BigMatrix& a);

/// Canonical Hermite basis (nonzero rows) of the lattice spanned by the rows.
BigMatrix lattice_hnf(const BigMatrix& rows);

/// True iff the row lattices coincide.
bool same_lattice(const BigMatrix& rowsA, const BigMatrix& rowsB);

/// Rank over Q.
std::size_t rational_rank(const RatMatrix& a);
std::size_t rational_rank(const BigMatrix& a);

/// Reduced row echelon form over Q; returns the rank.
std::size_t rref(RatMatrix& a);

/// Rows form a Q-basis of {x : A x = 0}, from the RREF.
RatMatrix rational_kernel(const RatMatrix& a);

/// Determinant by fraction-free (Bareiss) elimination.
BigInt determinant(const BigMatrix& a);

/// Exact inverse over Q; throws InvalidInput when singular.
RatMatrix rational_inverse(const RatMatrix& a);

/// Inverse of a unimodular integer matrix; throws InvalidInput otherwise.
BigMatrix unimodular_inverse(const BigMatrix& a);

/// For a d x k matrix L whose columns span a primitive lattice, an integer
/// k x d matrix P with P * L = I. Throws InvalidInput if none exists.
BigMatrix integer_left_inverse(const BigMatrix& l);

}  // namespace ietlab
