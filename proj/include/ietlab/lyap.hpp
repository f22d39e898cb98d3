#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ietlab/matrix.hpp"
#include "ietlab/perm.hpp"
#include "ietlab/real.hpp"
#include "ietlab/renorm.hpp"

namespace ietlab {

/// Matrix of B : H_before -> H_after in the two lattice bases.
/// Throws BasisMismatch unless B maps the first lattice onto the second.
BigMatrix restrict_to_h(const BigMatrix& b, const HSubspace& before, const HSubspace& after);
BigMatrix restrict_to_h(const IntMatrix& b, const HSubspace& before, const HSubspace& after);

/// ||B||_0 = max(||B||, ||B^-1||) with the operator 2-norm, and its log
/// (safe for entries beyond double range).
double norm0(const BigMatrix& b);
double log_norm0(const BigMatrix& b);
/// ln of the operator 2-norm.
double log_norm2(const BigMatrix& b);

/// Uniform on [0, 1) with every mantissa bit random.
Real random_uniform(std::mt19937_64& rng, mpfr_prec_t bits);
/// Uniform point of the standard simplex (Dirichlet(1,...,1)).
std::vector<Real> random_simplex_point(std::mt19937_64& rng, int d, mpfr_prec_t bits);

/// Orthonormalizes the columns of frame in place by modified Gram-Schmidt
/// with one re-orthogonalization pass; returns ln of the diagonal of R.
/// Throws PrecisionLoss when a column is numerically dependent on the
/// previous ones.
std::vector<double> orthonormalize(std::vector<std::vector<Real>>& frame);

struct SpectrumOptions {
  std::size_t steps = 1'000'000;
  std::uint64_t seed = 1;
  mpfr_prec_t precisionBits = 256;
  std::size_t reorthEvery = 10;
  std::size_t batches = 50;
  /// Optional unimodular change of lattice basis C (coordinates z -> C z).
  std::optional<BigMatrix> basisChange;
  ZorichOptions zorich{};
};

struct SpectrumEstimate {
  std::vector<double> exponents;   ///< descending
  std::vector<double> normalized;  ///< exponents / exponents[0]
  std::vector<double> stdErr;      ///< batch-means standard error
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::string classRep;
  std::size_t restarts = 0;  ///< orbits restarted after a tie or a runaway run
  mpfr_prec_t precisionBits = 0;
  std::size_t reorthEvery = 0;
  std::size_t batches = 0;
};

/// Lyapunov exponents (per Zorich step) of the Zorich cocycle on H(pi).
SpectrumEstimate lyapunov_spectrum(const Permutation& rep, const SpectrumOptions& opt);

struct FiltrationEstimate {
  std::vector<double> lambda;
  Permutation perm;
  std::size_t depth = 0;
  int dimH = 0;
  /// Orthonormal bases (columns) in lattice coordinates.
  std::vector<std::vector<double>> centralStable;
  std::vector<std::vector<double>> stable;
  /// centralStable expressed in R^d via the lattice basis (not orthonormal).
  std::vector<std::vector<double>> centralStableRd;
  /// Finite-time exponents along the orbit, descending.
  std::vector<double> finiteTimeExponents;
  std::size_t nonPositiveCount = 0;
  bool nonConvergence = false;
  double convergenceAngle = 0;  ///< largest principal angle, depth vs depth/2
};

struct FiltrationOptions {
  mpfr_prec_t precisionBits = 256;
  std::size_t reorthEvery = 5;
  double angleThreshold = 1e-6;
  /// Finite-time exponents below -stableMargin * top exponent count as stable.
  double stableMargin = 0.02;
};

FiltrationEstimate oseledets_filtration(const std::vector<Real>& lambda, const Permutation& p, std::size_t depth,
                                        const FiltrationOptions& opt = {});

/// Largest principal angle between the column spans of two frames.
double principal_angle(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

struct OmegaEstimate {
  double kappa = 0;
  double value = 0;
  std::size_t samples = 0;
  std::size_t truncated = 0;
  std::size_t horizon = 0;
};

struct OmegaOptions {
  std::size_t horizon = 10;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t maxZorich = 200;
};

/// Per-sample values (1/N) ln ||A_N(x)||_0 over uniformly sampled x in the
/// window; truncated returns are dropped and counted.
struct OmegaSamples {
  std::vector<double> values;
  std::size_t truncated = 0;
  std::size_t horizon = 0;
};
OmegaSamples omega_samples(const InducedCocycle& c, const OmegaOptions& opt);
/// Worst-kappa-mass estimate: (1/S) * sum of the ceil(kappa S) largest values.
/// A lower bound for the supremum over sets of mass kappa.
OmegaEstimate omega_kappa(const OmegaSamples& s, double kappa);
OmegaEstimate omega_kappa(const InducedCocycle& c, double kappa, const OmegaOptions& opt);

/// One orbit of a cocycle over a sampled basepoint.
class CocycleOrbit {
 public:
  virtual ~CocycleOrbit() = default;
  /// The next matrix A(T^k x) acting on Z^p, or nothing when the orbit
  /// cannot be continued (tie, or a return beyond the cap).
  virtual std::optional<BigMatrix> next() = 0;
};

/// An integral cocycle with basepoints sampled uniformly from a cylinder.
class CocycleModel {
 public:
  virtual ~CocycleModel() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual const Window& window() const = 0;
  virtual std::unique_ptr<CocycleOrbit> start(std::mt19937_64& rng) const = 0;
};

/// The Zorich cocycle on H(pi) in lattice coordinates, one matrix per
/// Zorich step, along the projectivized orbit of a point of the window.
class ZorichCocycle final : public CocycleModel {
 public:
  explicit ZorichCocycle(Window window, mpfr_prec_t bits = 256);
  int dim() const override { return dim_; }
  std::string name() const override { return "zorich"; }
  const Window& window() const override { return window_; }
  std::unique_ptr<CocycleOrbit> start(std::mt19937_64& rng) const override;

 private:
  Window window_;
  mpfr_prec_t bits_;
  int dim_;
  std::shared_ptr<const std::map<Permutation, std::pair<IntMatrix, IntMatrix>>> lattices_;
};

/// The first-return cocycle of an InducedCocycle, one branch per return.
class ReturnCocycle final : public CocycleModel {
 public:
  ReturnCocycle(InducedCocycle cocycle, std::size_t maxZorich, mpfr_prec_t bits = 512);
  int dim() const override { return cocycle_.dim(); }
  std::string name() const override { return "induced"; }
  const Window& window() const override { return cocycle_.window(); }
  std::unique_ptr<CocycleOrbit> start(std::mt19937_64& rng) const override;

 private:
  InducedCocycle cocycle_;
  std::size_t maxZorich_;
  mpfr_prec_t bits_;
};

}  // namespace ietlab
