#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ietlab/matrix.hpp"
#include "ietlab/rational.hpp"

namespace ietlab {

/// A permutation of {1..d} stored by its images pi(1), ..., pi(d).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidInput unless image is a bijection of {1..d}.
  explicit Permutation(std::vector<int> image);
  /// Parses the 1-based image list "4 3 2 1".
  static Permutation parse(std::string_view text);

  int size() const noexcept { return static_cast<int>(image_.size()); }
  /// pi(i) for 1 <= i <= d.
  int operator()(int i) const { return image_[static_cast<std::size_t>(i - 1)]; }
  /// pi^{-1}(k) for 1 <= k <= d.
  int inv(int k) const { return inverse_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<int>& image() const noexcept { return image_; }
  Permutation inverse() const { return Permutation(inverse_); }

  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.image_ == b.image_; }
  /// Lexicographic order on image lists (the canonical enumeration order).
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<int> image_;
  std::vector<int> inverse_;
};

bool is_irreducible(const Permutation& p);
bool is_rotation(const Permutation& p);
/// pi(1) = d and pi(d) = 1.
bool is_standard(const Permutation& p);
/// Throws ReducibleError when p is reducible.
void require_irreducible(const Permutation& p);

/// All irreducible permutations of size d in canonical order.
std::vector<Permutation> irreducible_permutations(int d);

enum class RauzyType { type1 = 1, type2 = 2 };

Permutation rauzy_successor(const Permutation& p, RauzyType type);
/// (type-1 image, type-2 image).
std::pair<Permutation, Permutation> rauzy_neighbors(const Permutation& p);
/// Closure of {p} under both elementary operations, sorted canonically.
std::vector<Permutation> rauzy_class(const Permutation& p);

struct SingularityData {
  std::vector<int> sigma;                ///< sigma(0..d)
  std::vector<std::vector<int>> orbits;  ///< each sorted; ordered by least element
  int nOrbits = 0;
  std::vector<int> coneOrders;  ///< |S ∩ {1..d-1}| per orbit
  int genus = 0;
};
SingularityData singularity_data(const Permutation& p);

struct HSubspace {
  int d = 0;
  int dim = 0;
  /// One b^S per orbit, in orbit order (zero vector for a single orbit).
  std::vector<std::vector<Rational>> annihilators;
  /// Rows form a basis of H(pi) over Q (dim x d).
  RatMatrix rationalBasis;
  /// Columns form a Z-basis of H(pi) ∩ Z^d (d x dim), Hermite-canonical.
  BigMatrix latticeBasis;
  /// Integer dim x d matrix with leftInverse * latticeBasis = I.
  BigMatrix leftInverse;

  /// Lattice coordinates of an integer vector of H(pi) ∩ Z^d.
  std::vector<BigInt> coordinates(const std::vector<BigInt>& w) const;
  bool contains(const std::vector<Rational>& w) const;
};
HSubspace h_subspace(const Permutation& p);

/// Nogueira-Rudolph vectors v^(1..d), each of length d.
std::vector<std::vector<int>> nr_vectors(const Permutation& p);

}  // namespace ietlab
