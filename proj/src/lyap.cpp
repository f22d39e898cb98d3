#include "ietlab/lyap.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ietlab/error.hpp"
#include "ietlab/lattice.hpp"
#include "ietlab/parallel.hpp"

namespace ietlab {

BigMatrix restrict_to_h(const BigMatrix& b, const HSubspace& before, const HSubspace& after) {
  if (b.rows() != static_cast<std::size_t>(after.d) || b.cols() != static_cast<std::size_t>(before.d))
    throw BasisMismatch("matrix size does not match the subspaces");
  if (before.dim != after.dim) throw BasisMismatch("subspaces have different dimensions");
  BigMatrix image = b * before.latticeBasis;
  BigMatrix r = after.leftInverse * image;
  if (!(after.latticeBasis * r == image)) throw BasisMismatch("matrix does not map H into the target subspace");
  BigInt det = determinant(r);
  if (det != 1 && det != -1) throw BasisMismatch("matrix does not map the lattice onto the target lattice");
  return r;
}

BigMatrix restrict_to_h(const IntMatrix& b, const HSubspace& before, const HSubspace& after) {
  return restrict_to_h(to_big(b), before, after);
}

namespace {

// Scaled copy m * 2^-e in double, with e chosen so the largest entry is O(1).
Eigen::MatrixXd scaled(const BigMatrix& m, long& e) {
  e = std::numeric_limits<long>::min();
  for (const auto& x : m.data())
    if (x != 0) e = std::max<long>(e, static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)));
  if (e == std::numeric_limits<long>::min()) e = 0;
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      long ex = 0;
      double mant = mpz_get_d_2exp(&ex, m(i, j).get_mpz_t());
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::ldexp(mant, static_cast<int>(ex - e));
    }
  return out;
}

double log_norm2_scaled(const Eigen::MatrixXd& a, long e) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return std::log(svd.singularValues()(0)) + static_cast<double>(e) * std::log(2.0);
}

}  // namespace

double log_norm2(const BigMatrix& b) {
  long e = 0;
  Eigen::MatrixXd a = scaled(b, e);
  return log_norm2_scaled(a, e);
}

double log_norm0(const BigMatrix& b) {
  RatMatrix inv = rational_inverse(matrix_cast<Rational>(b));
  // Clear denominators so the inverse norm is computed from integers.
  BigInt den = 1;
  for (const auto& q : inv.data()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  BigMatrix scaledInv(inv.rows(), inv.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) {
      Rational q = inv(i, j) * den;
      scaledInv(i, j) = q.get_num();
    }
  long dexp = 0;
  double dmant = mpz_get_d_2exp(&dexp, den.get_mpz_t());
  double logInv = log_norm2(scaledInv) - (std::log(dmant) + static_cast<double>(dexp) * std::log(2.0));
  return std::max(log_norm2(b), logInv);
}

double norm0(const BigMatrix& b) { return std::exp(log_norm0(b)); }

Real random_uniform(std::mt19937_64& rng, mpfr_prec_t bits) {
  const auto words = static_cast<std::size_t>(bits / 64 + 2);
  BigInt z = 0;
  for (std::size_t k = 0; k < words; ++k) {
    z <<= 64;
    z += BigInt(static_cast<unsigned long>(rng()));
  }
  Real u(z, bits);
  mpfr_div_2ui(u.get(), u.get(), static_cast<unsigned long>(64 * words), MPFR_RNDN);
  return u;
}

std::vector<Real> random_simplex_point(std::mt19937_64& rng, int d, mpfr_prec_t bits) {
  std::vector<Real> out;
  Real s(0.0, bits);
  for (int i = 0; i < d; ++i) {
    Real u = random_uniform(rng, bits);
    while (u.is_zero()) u = random_uniform(rng, bits);
    out.push_back(-log(u));
    s += out.back();
  }
  for (auto& x : out) x /= s;
  return out;
}

namespace {
Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s(0.0, a[0].precision());
  for (std::size_t i = 0; i < a.size(); ++i) s.add_mul(a[i], b[i]);
  return s;
}
}  // namespace

std::vector<double> orthonormalize(std::vector<std::vector<Real>>& frame) {
  std::vector<double> logs;
  for (std::size_t j = 0; j < frame.size(); ++j) {
    auto& v = frame[j];
    const mpfr_prec_t prec = v[0].precision();
    Real n0 = sqrt(dot(v, v));
    if (n0.is_zero()) throw PrecisionLoss("frame vector vanished");
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < j; ++i) {
        Real r = dot(frame[i], v);
        for (std::size_t k = 0; k < v.size(); ++k) v[k].add_mul(frame[i][k], -r);
      }
    Real rjj = sqrt(dot(v, v));
    if (rjj.is_zero() || (rjj / n0).exponent() < -(prec - 40))
      throw PrecisionLoss("frame lost linear independence at " + std::to_string(prec) + " bits");
    for (auto& x : v) x /= rjj;
    logs.push_back(log(rjj).to_double());
  }
  return logs;
}

namespace {

struct ClassData {
  IntMatrix lattice;  // d x p
  IntMatrix leftInv;  // p x d
};

IntMatrix to_int(const BigMatrix& m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).fits_slong_p()) throw PrecisionLoss("matrix entry exceeds 64 bits");
      out(i, j) = m(i, j).get_si();
    }
  return out;
}

std::map<Permutation, ClassData> class_data(const Permutation& rep) {
  std::map<Permutation, ClassData> out;
  for (const auto& q : rauzy_class(rep)) {
    HSubspace h = h_subspace(q);
    out.emplace(q, ClassData{to_int(h.latticeBasis), to_int(h.leftInverse)});
  }
  return out;
}

// Restriction of one integer step through cached lattice data.
IntMatrix restrict_step(const IntMatrix& b, const IntMatrix& lattice, const IntMatrix& target, const IntMatrix& targetInv) {
  IntMatrix image = b * lattice;
  IntMatrix r = targetInv * image;
  if (!(target * r == image)) throw BasisMismatch("step does not preserve H");
  return r;
}

IntMatrix restrict_step(const IntMatrix& b, const ClassData& before, const ClassData& after) {
  return restrict_step(b, before.lattice, after.lattice, after.leftInv);
}

void apply_step(const IntMatrix& r, std::vector<Real>& v) {
  std::vector<Real> out(r.rows(), Real(0.0, v[0].precision()));
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t k = 0; k < r.cols(); ++k)
      if (r(i, k) != 0) out[i].add_mul(v[k], static_cast<long>(r(i, k)));
  v = std::move(out);
}

std::vector<std::vector<Real>> random_frame(std::mt19937_64& rng, std::size_t p, std::size_t k, mpfr_prec_t bits) {
  std::normal_distribution<double> gauss;
  std::vector<std::vector<Real>> f(k);
  for (auto& v : f)
    for (std::size_t i = 0; i < p; ++i) v.emplace_back(gauss(rng), bits);
  orthonormalize(f);
  return f;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

SpectrumEstimate lyapunov_spectrum(const Permutation& rep, const SpectrumOptions& opt) {
  require_irreducible(rep);
  if (opt.steps < 1 || opt.batches < 2 || opt.reorthEvery < 1) throw InvalidInput("bad spectrum options");
  if (opt.precisionBits < 64) throw InvalidInput("precision must be at least 64 bits");
  PrecisionScope scope(opt.precisionBits);
  const auto data = class_data(rep);
  const int d = rep.size();
  const std::size_t p = data.at(rep).lattice.cols();

  IntMatrix change, changeInv;
  if (opt.basisChange) {
    if (opt.basisChange->rows() != p || opt.basisChange->cols() != p) throw InvalidInput("basis change has the wrong size");
    change = to_int(*opt.basisChange);
    changeInv = to_int(unimodular_inverse(*opt.basisChange));
  }

  std::mt19937_64 rng(opt.seed);
  std::vector<Real> lambda = random_simplex_point(rng, d, opt.precisionBits);
  Permutation perm = rep;
  auto frame = random_frame(rng, p, p, opt.precisionBits);

  const std::size_t batches = std::min(opt.batches, opt.steps);
  std::vector<std::vector<double>> sums(batches, std::vector<double>(p, 0.0));
  std::vector<std::size_t> batchSteps(batches, 0);
  SpectrumEstimate est;

  auto batch_of = [&](std::size_t step) { return step * batches / opt.steps; };
  std::size_t step = 0;
  while (step < opt.steps) {
    IntMatrix b = IntMatrix::identity(static_cast<std::size_t>(d));
    const Permutation before = perm;
    bool restart = false;
    try {
      zorich_advance(lambda, perm, opt.zorich, &b);
    } catch (const HaltOnTie&) {
      restart = true;
    } catch (const DivergenceGuard&) {
      restart = true;
    }
    if (restart) {
      // The frame carries over to a fresh random orbit.
      if (++est.restarts > opt.steps) throw PrecisionLoss("too many orbit restarts");
      lambda = random_simplex_point(rng, d, opt.precisionBits);
      perm = rep;
      continue;
    }
    IntMatrix r = restrict_step(b, data.at(before), data.at(perm));
    if (opt.basisChange) r = change * r * changeInv;
    for (auto& v : frame) apply_step(r, v);
    const std::size_t bi = batch_of(step);
    ++batchSteps[bi];
    ++step;
    if (step % opt.reorthEvery == 0 || step == opt.steps || batch_of(step) != bi) {
      auto logs = orthonormalize(frame);
      for (std::size_t j = 0; j < p; ++j) sums[bi][j] += logs[j];
    }
  }

  std::vector<double> theta(p, 0.0), se(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double tot = 0;
    std::vector<double> means;
    for (std::size_t bi = 0; bi < batches; ++bi) {
      tot += sums[bi][j];
      if (batchSteps[bi]) means.push_back(sums[bi][j] / static_cast<double>(batchSteps[bi]));
    }
    theta[j] = tot / static_cast<double>(opt.steps);
    double m = mean(means), ss = 0;
    for (double x : means) ss += (x - m) * (x - m);
    se[j] = std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
  }
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return theta[a] > theta[b]; });
  for (std::size_t j : order) {
    est.exponents.push_back(theta[j]);
    est.stdErr.push_back(se[j]);
  }
  for (double t : est.exponents) est.normalized.push_back(t / est.exponents[0]);
  est.normalized[0] = 1.0;
  est.steps = opt.steps;
  est.seed = opt.seed;
  est.classRep = rep.to_string();
  est.precisionBits = opt.precisionBits;
  est.reorthEvery = opt.reorthEvery;
  est.batches = batches;
  return est;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> to_double(const std::vector<std::vector<Real>>& f) {
  std::vector<std::vector<double>> out;
  for (const auto& v : f) {
    std::vector<double> w;
    for (const auto& x : v) w.push_back(x.to_double());
    out.push_back(std::move(w));
  }
  return out;
}

// Top-k right singular subspace of M = R_n ... R_1 (columns, orthonormal).
std::vector<std::vector<Real>> top_right_singular(const std::vector<IntMatrix>& steps, std::size_t n, std::size_t p,
                                                  std::size_t k, std::size_t reorthEvery, mpfr_prec_t bits) {
  std::mt19937_64 rng(0x5eedu + k);
  auto w = random_frame(rng, p, k, bits);
  for (int iter = 0; iter < 2; ++iter) {
    for (std::size_t s = 0; s < n; ++s) {
      for (auto& v : w) apply_step(steps[s], v);
      if ((s + 1) % reorthEvery == 0) orthonormalize(w);
    }
    orthonormalize(w);
    for (std::size_t s = n; s-- > 0;) {
      IntMatrix t = steps[s].transpose();
      for (auto& v : w) apply_step(t, v);
      if ((n - s) % reorthEvery == 0) orthonormalize(w);
    }
    orthonormalize(w);
  }
  return w;
}

// Orthonormal basis of the orthogonal complement of span(w) in R^p.
std::vector<std::vector<Real>> complement(const std::vector<std::vector<Real>>& w, std::size_t p, mpfr_prec_t bits) {
  std::vector<std::vector<Real>> basis = w;
  std::vector<std::vector<Real>> out;
  for (std::size_t e = 0; e < p && basis.size() < p; ++e) {
    std::vector<Real> v(p, Real(0.0, bits));
    v[e] = Real(1.0, bits);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        Real r = dot(q, v);
        for (std::size_t i = 0; i < p; ++i) v[i].add_mul(q[i], -r);
      }
    Real nv = sqrt(dot(v, v));
    if (nv.to_double() < 1e-8) continue;
    for (auto& x : v) x /= nv;
    basis.push_back(v);
    out.push_back(v);
  }
  return out;
}

}  // namespace

double principal_angle(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.empty() || b.empty()) return 0;
  const auto p = static_cast<Eigen::Index>(a[0].size());
  auto basis = [&](const std::vector<std::vector<double>>& f) {
    Eigen::MatrixXd m(p, static_cast<Eigen::Index>(f.size()));
    for (std::size_t j = 0; j < f.size(); ++j)
      for (Eigen::Index i = 0; i < p; ++i) m(i, static_cast<Eigen::Index>(j)) = f[j][static_cast<std::size_t>(i)];
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(p, m.cols()));
  };
  Eigen::MatrixXd qa = basis(a), qb = basis(b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  double smin = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smin, -1.0, 1.0));
}

FiltrationEstimate oseledets_filtration(const std::vector<Real>& lambda, const Permutation& p, std::size_t depth,
                                        const FiltrationOptions& opt) {
  require_irreducible(p);
  if (depth < 2) throw InvalidInput("filtration depth must be at least 2");
  PrecisionScope scope(opt.precisionBits);
  const auto data = class_data(p);
  const int d = p.size();
  const std::size_t dimH = data.at(p).lattice.cols();
  const std::size_t g = dimH / 2;

  std::vector<IntMatrix> steps;
  std::vector<Real> l = lambda;
  for (auto& x : l) x.set_precision(opt.precisionBits);
  Permutation q = p;
  for (std::size_t s = 0; s < depth; ++s) {
    IntMatrix b = IntMatrix::identity(static_cast<std::size_t>(d));
    const Permutation before = q;
    zorich_advance(l, q, ZorichOptions{}, &b);
    steps.push_back(restrict_step(b, data.at(before), data.at(q)));
  }

  FiltrationEstimate est;
  for (const auto& x : lambda) est.lambda.push_back(x.to_double());
  est.perm = p;
  est.depth = depth;
  est.dimH = static_cast<int>(dimH);

  // Finite-time exponents from a full frame.
  std::vector<std::vector<Real>> frame(dimH, std::vector<Real>(dimH, Real(0.0, opt.precisionBits)));
  for (std::size_t i = 0; i < dimH; ++i) frame[i][i] = Real(1.0, opt.precisionBits);
  std::vector<double> logs(dimH, 0.0);
  for (std::size_t s = 0; s < depth; ++s) {
    for (auto& v : frame) apply_step(steps[s], v);
    if ((s + 1) % opt.reorthEvery == 0 || s + 1 == depth) {
      auto inc = orthonormalize(frame);
      for (std::size_t j = 0; j < dimH; ++j) logs[j] += inc[j];
    }
  }
  for (double& x : logs) x /= static_cast<double>(depth);
  std::sort(logs.begin(), logs.end(), std::greater<>());
  est.finiteTimeExponents = logs;
  est.nonPositiveCount = static_cast<std::size_t>(std::count_if(logs.begin(), logs.end(), [](double x) { return x <= 0; }));

  auto cs_at = [&](std::size_t n) {
    auto top = top_right_singular(steps, n, dimH, dimH - g, opt.reorthEvery, opt.precisionBits);
    return complement(top, dimH, opt.precisionBits);
  };
  auto cs = cs_at(depth);
  auto csHalf = cs_at(depth / 2);
  est.centralStable = to_double(cs);
  est.convergenceAngle = principal_angle(est.centralStable, to_double(csHalf));
  est.nonConvergence = est.convergenceAngle > opt.angleThreshold;

  const double margin = opt.stableMargin * std::max(logs.front(), 0.0);
  const std::size_t nStable =
      std::min<std::size_t>(g, static_cast<std::size_t>(std::count_if(logs.begin(), logs.end(), [&](double x) { return x < -margin; })));
  if (nStable == g) {
    est.stable = est.centralStable;
  } else if (nStable > 0) {
    auto top = top_right_singular(steps, depth, dimH, dimH - nStable, opt.reorthEvery, opt.precisionBits);
    est.stable = to_double(complement(top, dimH, opt.precisionBits));
  }

  const IntMatrix& lat = data.at(p).lattice;
  for (const auto& v : est.centralStable) {
    std::vector<double> w(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < lat.rows(); ++i)
      for (std::size_t j = 0; j < lat.cols(); ++j) w[i] += static_cast<double>(lat(i, j)) * v[j];
    est.centralStableRd.push_back(std::move(w));
  }
  return est;
}

// ---------------------------------------------------------------------------

OmegaSamples omega_samples(const InducedCocycle& c, const OmegaOptions& opt) {
  if (opt.horizon < 1 || opt.samples < 1) throw InvalidInput("omega needs a positive horizon and sample count");
  std::vector<double> values(opt.samples, std::numeric_limits<double>::quiet_NaN());
  parallel_for(opt.samples, [&](std::size_t i) {
    auto rng = task_rng(opt.seed, i);
    auto x = c.sample_point(rng, 512);
    BigMatrix a = BigMatrix::identity(static_cast<std::size_t>(c.dim()));
    for (std::size_t k = 0; k < opt.horizon; ++k) {
      auto ret = c.first_return(x, opt.maxZorich);
      if (ret.truncated) return;
      a = c.make_branch(ret.word).restricted * a;
      x = std::move(ret.lambdaAfter);
    }
    values[i] = log_norm0(a) / static_cast<double>(opt.horizon);
  });
  OmegaSamples s;
  s.horizon = opt.horizon;
  for (double v : values) {
    if (std::isnan(v))
      ++s.truncated;
    else
      s.values.push_back(v);
  }
  return s;
}

OmegaEstimate omega_kappa(const OmegaSamples& s, double kappa) {
  if (!(kappa > 0) || kappa > 1) throw InvalidInput("kappa must lie in (0, 1]");
  OmegaEstimate est;
  est.kappa = kappa;
  est.samples = s.values.size();
  est.truncated = s.truncated;
  est.horizon = s.horizon;
  if (s.values.empty()) return est;
  std::vector<double> v = s.values;
  std::sort(v.begin(), v.end(), std::greater<>());
  const auto take = static_cast<std::size_t>(std::ceil(kappa * static_cast<double>(v.size()) - 1e-9));
  double tot = 0;
  for (std::size_t i = 0; i < take; ++i) tot += v[i];
  est.value = tot / static_cast<double>(v.size());
  return est;
}

OmegaEstimate omega_kappa(const InducedCocycle& c, double kappa, const OmegaOptions& opt) {
  return omega_kappa(omega_samples(c, opt), kappa);
}

namespace {
class ZorichOrbit final : public CocycleOrbit {
 public:
  ZorichOrbit(std::vector<Real> lambda, Permutation perm,
              std::shared_ptr<const std::map<Permutation, std::pair<IntMatrix, IntMatrix>>> lattices)
      : lambda_(std::move(lambda)), perm_(std::move(perm)), lattices_(std::move(lattices)) {}

  std::optional<BigMatrix> next() override {
    if (dead_) return std::nullopt;
    const auto d = static_cast<std::size_t>(perm_.size());
    IntMatrix b = IntMatrix::identity(d);
    const Permutation before = perm_;
    try {
      PrecisionScope scope(lambda_[0].precision());
      zorich_advance(lambda_, perm_, ZorichOptions{}, &b);
    } catch (const HaltOnTie&) {
      dead_ = true;
    } catch (const DivergenceGuard&) {
      dead_ = true;
    }
    if (dead_) return std::nullopt;
    const auto& from = lattices_->at(before);
    const auto& to = lattices_->at(perm_);
    return to_big(restrict_step(b, from.first, to.first, to.second));
  }

 private:
  std::vector<Real> lambda_;
  Permutation perm_;
  std::shared_ptr<const std::map<Permutation, std::pair<IntMatrix, IntMatrix>>> lattices_;
  bool dead_ = false;
};

class ReturnOrbit final : public CocycleOrbit {
 public:
  ReturnOrbit(const InducedCocycle& c, std::vector<Real> x, std::size_t maxZorich)
      : c_(c), x_(std::move(x)), maxZorich_(maxZorich) {}

  std::optional<BigMatrix> next() override {
    if (dead_) return std::nullopt;
    PrecisionScope scope(x_[0].precision());
    InducedCocycle::Return ret;
    try {
      ret = c_.first_return(x_, maxZorich_);
    } catch (const HaltOnTie&) {
      ret.truncated = true;
    } catch (const DivergenceGuard&) {
      ret.truncated = true;
    }
    if (ret.truncated) {
      dead_ = true;
      return std::nullopt;
    }
    x_ = std::move(ret.lambdaAfter);
    return c_.make_branch(ret.word).restricted;
  }

 private:
  const InducedCocycle& c_;
  std::vector<Real> x_;
  std::size_t maxZorich_;
  bool dead_ = false;
};
}  // namespace

ZorichCocycle::ZorichCocycle(Window window, mpfr_prec_t bits) : window_(std::move(window)), bits_(bits) {
  require_irreducible(window_.perm);
  std::map<Permutation, std::pair<IntMatrix, IntMatrix>> m;
  for (auto& [q, data] : class_data(window_.perm)) m.emplace(q, std::make_pair(data.lattice, data.leftInv));
  dim_ = static_cast<int>(m.at(window_.perm).first.cols());
  lattices_ = std::make_shared<const std::map<Permutation, std::pair<IntMatrix, IntMatrix>>>(std::move(m));
}

std::unique_ptr<CocycleOrbit> ZorichCocycle::start(std::mt19937_64& rng) const {
  return std::make_unique<ZorichOrbit>(window_.sample(rng, bits_), window_.perm, lattices_);
}

ReturnCocycle::ReturnCocycle(InducedCocycle cocycle, std::size_t maxZorich, mpfr_prec_t bits)
    : cocycle_(std::move(cocycle)), maxZorich_(maxZorich), bits_(bits) {}

std::unique_ptr<CocycleOrbit> ReturnCocycle::start(std::mt19937_64& rng) const {
  return std::make_unique<ReturnOrbit>(cocycle_, cocycle_.sample_point(rng, bits_), maxZorich_);
}

}  // namespace ietlab
