#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "ietlab/error.hpp"
#include "ietlab/iet.hpp"
#include "ietlab/matrix.hpp"
#include "ietlab/perm.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/real.hpp"

namespace ietlab {

/// Type of the Rauzy step at (lambda, pi); HaltOnTie when
/// lambda_d == lambda_{pi^{-1}(d)}.
template <class T>
RauzyType rauzy_type(const std::vector<T>& lambda, const Permutation& p) {
  const int d = p.size();
  const T& last = lambda[static_cast<std::size_t>(d - 1)];
  const T& other = lambda[static_cast<std::size_t>(p.inv(d) - 1)];
  if (last < other) return RauzyType::type1;
  if (other < last) return RauzyType::type2;
  throw HaltOnTie("Rauzy induction undefined: lambda_d equals lambda_{pi^-1(d)}");
}

/// Visitation matrix B of one Rauzy step from pi, with lambda = B^T lambda'.
IntMatrix rauzy_matrix(const Permutation& p, RauzyType type);

/// Performs one Rauzy step in place and returns its type.
template <class T>
RauzyType rauzy_advance(std::vector<T>& lambda, Permutation& p) {
  const RauzyType type = rauzy_type(lambda, p);
  const int d = p.size();
  const auto piv = static_cast<std::size_t>(p.inv(d) - 1);
  const auto last = static_cast<std::size_t>(d - 1);
  if (type == RauzyType::type1) {
    lambda[piv] -= lambda[last];
    T moved = std::move(lambda[last]);
    for (std::size_t i = last; i > piv + 1; --i) lambda[i] = std::move(lambda[i - 1]);
    lambda[piv + 1] = std::move(moved);
  } else {
    lambda[last] -= lambda[piv];
  }
  p = rauzy_successor(p, type);
  return type;
}

template <class T>
struct RauzyStep {
  RauzyType kind;
  std::vector<T> lambdaBefore;
  Permutation permBefore;
  std::vector<T> lambdaAfter;
  Permutation permAfter;
  IntMatrix matrix;
};

template <class T>
RauzyStep<T> rauzy_step(const std::vector<T>& lambda, const Permutation& p) {
  require_irreducible(p);
  RauzyStep<T> s{RauzyType::type1, lambda, p, lambda, p, {}};
  s.kind = rauzy_advance(s.lambdaAfter, s.permAfter);
  s.matrix = rauzy_matrix(p, s.kind);
  return s;
}

struct ZorichOptions {
  /// DivergenceGuard once a run exceeds this many Rauzy steps.
  std::size_t maxRun = 1'000'000;
  /// Float mode only: divide the lengths by their sum after the step.
  bool normalize = true;
};

template <class T>
struct ZorichStep {
  RauzyType kind;
  std::size_t n = 0;  ///< number of Rauzy steps composed
  std::vector<T> lambdaBefore;
  Permutation permBefore;
  std::vector<T> lambdaAfter;
  Permutation permAfter;
  IntMatrix matrix;  ///< B^Z = B_n ... B_1
};

/// Performs one Zorich step in place: Rauzy steps of one type until the
/// next step would switch type. Returns (type, n) and left-multiplies the
/// step matrices into *acc when given.
template <class T>
std::pair<RauzyType, std::size_t> zorich_advance(std::vector<T>& lambda, Permutation& p, const ZorichOptions& opt = {},
                                                 IntMatrix* acc = nullptr) {
  const RauzyType type = rauzy_type(lambda, p);
  std::size_t n = 0;
  do {
    if (++n > opt.maxRun) throw DivergenceGuard("Zorich run exceeded " + std::to_string(opt.maxRun) + " Rauzy steps");
    if (acc) *acc = rauzy_matrix(p, type) * *acc;
    rauzy_advance(lambda, p);
  } while (rauzy_type(lambda, p) == type);
  if constexpr (!is_exact_v<T>) {
    if (opt.normalize) {
      T s = lambda[0];
      for (std::size_t i = 1; i < lambda.size(); ++i) s += lambda[i];
      for (auto& x : lambda) x /= s;
    }
  }
  return {type, n};
}

template <class T>
ZorichStep<T> zorich_step(const std::vector<T>& lambda, const Permutation& p, const ZorichOptions& opt = {}) {
  require_irreducible(p);
  ZorichStep<T> z{RauzyType::type1, 0, lambda, p, lambda, p, IntMatrix::identity(static_cast<std::size_t>(p.size()))};
  auto [type, n] = zorich_advance(z.lambdaAfter, z.permAfter, opt, &z.matrix);
  z.kind = type;
  z.n = n;
  return z;
}

/// Accumulated product B_n = M_n ... M_1 of step matrices.
struct CocycleProduct {
  BigMatrix matrix;
  std::size_t steps = 0;
  /// ln of the max-row-sum norm of matrix.
  double logNorm = 0.0;
  /// Step counts n at which a designated window was visited.
  std::vector<std::size_t> visitFlags;

  explicit CocycleProduct(int d) : matrix(BigMatrix::identity(static_cast<std::size_t>(d))) {}
  void push(const IntMatrix& step);
  void push(const BigMatrix& step);
  void flag_visit() { visitFlags.push_back(steps); }
};

/// ln of max_i sum_j |m_ij|.
double log_norm_inf(const BigMatrix& m);

enum class Induction { rauzy, zorich };

struct OracleResult {
  IntMatrix matrix;
  std::vector<Rational> lambdaAfter;
  Permutation permAfter;
  std::size_t rauzySteps = 0;
};

/// Visitation matrix obtained by iterating f itself: the induced map on the
/// cut interval is discovered from backward orbits of the discontinuities,
/// and r_ij counts the visits to I_j of the orbit of the midpoint of I'_i
/// before its first return.
OracleResult induction_oracle(const std::vector<Rational>& lambda, const Permutation& p,
                              Induction kind = Induction::rauzy);
IntMatrix visitation_matrix_oracle(const std::vector<Rational>& lambda, const Permutation& p,
                                   Induction kind = Induction::rauzy);

/// Hilbert projective distance sup_{i,j} |ln(x_i y_j / (x_j y_i))|.
double hilbert_distance(const std::vector<double>& x, const std::vector<double>& y);

/// Parses a Rauzy word over {1,2} ("1221").
std::vector<RauzyType> parse_word(std::string_view text);
std::string word_string(const std::vector<RauzyType>& word);

/// A cylinder of the parameter simplex: the lambdas at perm whose first
/// Rauzy steps have the types of word.
struct Window {
  Permutation perm;
  std::vector<RauzyType> word;

  /// B_w = B_{|w|} ... B_1, so the cylinder is [B_w^T R^d_+].
  BigMatrix matrix() const;
  Permutation end_perm() const;
  bool positive() const;
  /// Lebesgue mass of the cylinder relative to the simplex: 1 / prod_j r_j
  /// with r_j the row sums of B_w.
  Rational mass() const;
  /// A point distributed uniformly (Lebesgue) in the cylinder, sum 1.
  std::vector<Real> sample(std::mt19937_64& rng, mpfr_prec_t bits = working_precision()) const;
  template <class T>
  bool contains(const std::vector<T>& lambda, const Permutation& p) const {
    if (!(p == perm)) return false;
    std::vector<T> l = lambda;
    Permutation q = p;
    try {
      for (RauzyType t : word)
        if (rauzy_advance(l, q) != t) return false;
    } catch (const HaltOnTie&) {
      return false;
    }
    return true;
  }
};

/// The shortest word (then lexicographically least) from p whose composite
/// matrix is strictly positive, or nothing within maxLength.
std::optional<Window> shortest_positive_window(const Permutation& p, std::size_t maxLength = 24);

struct Branch {
  std::vector<RauzyType> word;   ///< Rauzy types of the return path
  std::size_t zorichLength = 0;  ///< Zorich steps in the return path
  BigMatrix matrix;              ///< B_s on R^d
  BigMatrix restricted;          ///< B_s on H(pi) in lattice coordinates
  Rational mass;                 ///< Lebesgue mass of the branch relative to the window
};

/// The map induced by Zorich renormalization on a positive window.
class InducedCocycle {
 public:
  explicit InducedCocycle(Window window);

  const Window& window() const noexcept { return window_; }
  const HSubspace& h() const noexcept { return h_; }
  int dim() const noexcept { return h_.dim; }
  int d() const noexcept { return window_.perm.size(); }

  /// All branches whose return path has at most maxRauzyLength Rauzy steps,
  /// in depth-first order with type 1 before type 2.
  std::vector<Branch> enumerate_branches(std::size_t maxRauzyLength) const;

  struct Return {
    std::vector<RauzyType> word;
    std::size_t zorichLength = 0;
    bool truncated = false;
    std::vector<Real> lambdaAfter;  ///< normalized to sum 1
  };
  /// First return of lambda (a point of the window) to the window, following
  /// at most maxZorich Zorich steps.
  Return first_return(const std::vector<Real>& lambda, std::size_t maxZorich) const;

  /// Builds the branch data (matrices, mass) of a return word.
  Branch make_branch(const std::vector<RauzyType>& word) const;

  /// A point distributed uniformly (Lebesgue) in the window, sum 1.
  std::vector<Real> sample_point(std::mt19937_64& rng, mpfr_prec_t bits = working_precision()) const;

  /// B restricted to H(pi_w) in lattice coordinates, for B mapping H(pi_w)
  /// to itself.
  BigMatrix restrict(const BigMatrix& b) const;

 private:
  Window window_;
  BigMatrix windowMatrix_;
  HSubspace h_;
  std::vector<BigInt> rowSums_;
};

/// Largest observed log density ratio ln(J(x)/J(y)) of the inverse-branch
/// Jacobians J(x) = |B^T x|^{-d} over sampled pairs x, y in the window and
/// sampled branches; with the Hilbert diameter bound d * diam(window).
struct DistortionEstimate {
  double logRatioMax = 0;
  double logBound = 0;
  std::size_t samples = 0;
};
DistortionEstimate estimate_branch_distortion(const InducedCocycle& c, std::size_t branchesMaxLength,
                                              std::size_t samples, std::uint64_t seed);

/// Hilbert diameter of the window cylinder (max distance between rows of B_w).
double window_diameter(const Window& w);

}  // namespace ietlab
