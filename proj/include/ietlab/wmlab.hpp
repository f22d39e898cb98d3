#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ietlab/iet.hpp"
#include "ietlab/lyap.hpp"
#include "ietlab/matrix.hpp"
#include "ietlab/perm.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/real.hpp"
#include "ietlab/renorm.hpp"

namespace ietlab {

/// Euclidean distance from v to the integer lattice.
double dist_torus(const std::vector<double>& v);
Real dist_torus(const std::vector<Real>& v);
/// Squared distance, exact.
Rational dist_torus_squared(const std::vector<Rational>& v);

/// The line {offset + s * direction : s real} in lattice coordinates.
class LineJ {
 public:
  /// direction must be non-negative and non-zero; the line must miss 0.
  LineJ(std::vector<Rational> offset, std::vector<Rational> direction);

  const std::vector<Rational>& offset() const noexcept { return offset_; }
  const std::vector<Rational>& direction() const noexcept { return direction_; }
  std::size_t dim() const noexcept { return offset_.size(); }
  /// Squared distance from the line to 0.
  const Rational& norm_squared() const noexcept { return normSquared_; }
  double norm() const;
  std::vector<Rational> point(const Rational& s) const;

 private:
  std::vector<Rational> offset_;
  std::vector<Rational> direction_;
  Rational normSquared_;
};

/// Squared distance from 0 to the line {a + s u}, exact; |a|^2 when u = 0.
Rational line_norm_squared(const std::vector<Rational>& a, const std::vector<Rational>& u);

// ---------------------------------------------------------------------------
// Veech criterion scans.

struct ScanOptions {
  std::size_t maxVisits = 200;
  std::size_t maxSteps = 1'000'000;  ///< Rauzy steps
  /// Visits used by the eigenvalue test and the thresholds of the summary.
  std::size_t detectVisits = 30;
  double eigenThreshold = 1e-3;
  double excludeThreshold = 0.1;
  /// When set, the t values are approximations good to this many bits and
  /// the scan stops once |B_n h| makes that error visible.
  std::optional<mpfr_prec_t> tPrecisionBits;
  /// Float lengths only: rescale to sum 1 after every step and follow the
  /// pseudo-orbit without the precision budget.
  bool renormalize = false;
};

struct ScanSummary {
  double min = 0;
  double limsupEstimate = 0;  ///< max over the last half of the visits
  bool eigenCandidate = false;  ///< min over the first detectVisits visits below eigenThreshold
  bool excluded = false;        ///< limsupEstimate above excludeThreshold
};

struct ScanSeries {
  Rational t;
  std::vector<std::pair<std::size_t, double>> visits;  ///< (Rauzy time n, distance)
  ScanSummary summary;
};

struct ScanReport {
  std::vector<std::string> lambda;
  Permutation perm;
  std::vector<Rational> h;
  Window window;
  std::vector<ScanSeries> series;
  std::size_t steps = 0;
  std::size_t visits = 0;
  /// "" when maxVisits was reached, else maxSteps, tie or precision.
  std::string truncation;
};

ScanSummary summarize_scan(const std::vector<std::pair<std::size_t, double>>& visits, const ScanOptions& opt);

/// Follows the Rauzy orbit of (lambda, pi) and, at every time n >= 1 at
/// which it lies in the window cylinder, records dist_torus(B_n t h) for
/// each t. Float lengths stop once the orbit can no longer be trusted.
ScanReport veech_scan(const std::vector<Rational>& lambda, const Permutation& p, const std::vector<Rational>& h,
                      const std::vector<Rational>& tGrid, const Window& window, const ScanOptions& opt = {});
ScanReport veech_scan(const std::vector<Real>& lambda, const Permutation& p, const std::vector<Rational>& h,
                      const std::vector<Rational>& tGrid, const Window& window, const ScanOptions& opt = {});

/// Evenly spaced grid t_min + i (t_max - t_min) / (steps - 1).
std::vector<Rational> t_grid(const Rational& tMin, const Rational& tMax, std::size_t steps);

// ---------------------------------------------------------------------------
// Twisted Birkhoff averages.

/// Catalog observables: "exp:k" is e^{2 pi i k x / |I|}; "ind:i" is the
/// indicator of I_i minus lambda_i / |I|.
struct Observable {
  enum class Kind { exponential, indicator } kind;
  long index;
  static Observable parse(const std::string& id);
  std::string id() const;
};

/// |(1/N) sum_{k<N} e^{-2 pi i t k} g(f^k x0)|. Instantiated for Rational and Real.
template <class T>
double twisted_average(const Iet<T>& f, const Observable& g, double t, const T& x0, std::size_t n);

// ---------------------------------------------------------------------------
// Orthogonal decomposition against H(pi).

struct HProjection {
  std::vector<Rational> hH;
  std::vector<Rational> hPerp;
};
HProjection hperp_projection(const Permutation& p, const std::vector<Rational>& h);

// ---------------------------------------------------------------------------
// Weak-stable exclusion experiment.

struct ProbeOptions {
  Rational delta{1, 20};
  std::size_t blockLength = 1;  ///< cocycle steps per block (N)
  std::size_t blocks = 8;       ///< m = 1..blocks
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  mpfr_prec_t precisionBits = 512;
  std::size_t maxTranslates = 10'000;
};

/// Evidence that a sample survived: a parameter s with w = J(s) and the
/// lattice points c_k with |A_k w - c_k| < delta for every step k.
struct SurvivalCertificate {
  std::size_t sample = 0;
  std::size_t steps = 0;
  Rational s;
  std::vector<BigMatrix> matrices;  ///< A(T^k x), k = 0..steps-1
  std::vector<std::vector<BigInt>> translates;
};

struct ProbeReport {
  /// estimates[m-1]: fraction of samples with J ∩ W^s_{delta,mN}(x) non-empty.
  std::vector<double> estimates;
  std::vector<std::size_t> survivors;
  std::size_t samples = 0;
  /// Samples whose orbit ended early or whose translate count overflowed;
  /// both are counted as survivors from then on.
  std::size_t truncated = 0;
  std::size_t overflowed = 0;
  std::size_t maxLiveTranslates = 0;
  bool precisionWarning = false;
  std::vector<SurvivalCertificate> certificates;
  std::size_t certificatesPassed = 0;
};

/// Smallest N with N * theta >= ln 3: on average a block stretches the
/// slowest expanding direction past the 3 delta covering scale.
std::size_t block_length_for(double theta);

ProbeReport wstable_probe(const CocycleModel& cocycle, const LineJ& j, const ProbeOptions& opt);

/// Exact check of a certificate against the line and delta.
bool replay_certificate(const SurvivalCertificate& c, const LineJ& j, const Rational& delta);

struct PhiCount {
  std::size_t count = 0;
  std::vector<std::vector<BigInt>> translates;
  /// ||A J - c|| for each translate c.
  std::vector<double> lineNorms;
  double norm0 = 0;
};

/// Components of A (J ∩ B_delta(0)) ∩ B_delta(Z^p \ {0}).
PhiCount phi_delta_count(const BigMatrix& a, const LineJ& j, const Rational& delta);

// ---------------------------------------------------------------------------
// Hausdorff dimension estimator.

struct HausdorffEstimate {
  std::vector<double> deltas;
  std::vector<double> betaDelta;
  std::vector<double> dimBound;
  double lambdaHat = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  bool truncated = false;
};

/// beta_delta = (1/n) sum_{k<n} ln(1 + (3 delta ||A(T^k x)||)^p) along one
/// sampled orbit, and beta_delta / lambdaHat.
HausdorffEstimate hausdorff_estimate(const CocycleModel& cocycle, const std::vector<double>& deltas,
                                     std::size_t horizon, double lambdaHat, std::uint64_t seed);

/// Smallest positive exponent of a spectrum estimate.
double smallest_positive_exponent(const SpectrumEstimate& s);

}  // namespace ietlab
