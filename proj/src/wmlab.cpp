#include "ietlab/wmlab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "ietlab/lattice.hpp"
#include "ietlab/parallel.hpp"

namespace ietlab {

namespace {

BigInt round_nearest(const Rational& x) {
  Rational y = x + Rational(1, 2);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return q;
}

BigInt floor_of(const Real& x) { return floor(x).to_rational().get_num(); }

BigInt ceil_of(const Real& x) {
  Real f = floor(x);
  BigInt z = f.to_rational().get_num();
  if (!(f == x)) z += 1;
  return z;
}

std::vector<Rational> mat_apply(const BigMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) out[i] += Rational(m(i, j)) * v[j];
  return out;
}

// w <- B w for the Rauzy matrix of one step, in place.
void rauzy_apply(const Permutation& p, RauzyType type, std::vector<Rational>& w) {
  const auto d = w.size();
  const auto piv = static_cast<std::size_t>(p.inv(p.size()) - 1);
  if (type == RauzyType::type2) {
    w[piv] += w[d - 1];
    return;
  }
  if (piv + 1 >= d) return;
  Rational sum = w[piv] + w[d - 1];
  for (std::size_t i = d - 1; i > piv + 1; --i) w[i] = std::move(w[i - 1]);
  w[piv + 1] = std::move(sum);
}

double sqrt_rational(const Rational& q) { return Real(q, 128).to_double() < 0 ? 0.0 : sqrt(Real(q, 128)).to_double(); }

}  // namespace

double dist_torus(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) {
    double r = x - std::round(x);
    s += r * r;
  }
  return std::sqrt(s);
}

Real dist_torus(const std::vector<Real>& v) {
  mpfr_prec_t prec = working_precision();
  for (const auto& x : v) prec = std::max(prec, x.precision());
  Real s(0.0, prec);
  for (const auto& x : v) {
    Real r = x - round(x);
    s.add_mul(r, r);
  }
  return sqrt(s);
}

Rational dist_torus_squared(const std::vector<Rational>& v) {
  Rational s = 0;
  for (const auto& x : v) {
    Rational r = x - Rational(round_nearest(x));
    s += r * r;
  }
  return s;
}

Rational line_norm_squared(const std::vector<Rational>& a, const std::vector<Rational>& u) {
  const Rational uu = dot(u, u);
  if (uu == 0) return dot(a, a);
  const Rational au = dot(a, u);
  return dot(a, a) - au * au / uu;
}

LineJ::LineJ(std::vector<Rational> offset, std::vector<Rational> direction)
    : offset_(std::move(offset)), direction_(std::move(direction)) {
  if (offset_.empty() || offset_.size() != direction_.size())
    throw InvalidInput("line offset and direction must have the same positive length");
  bool nonzero = false;
  for (const auto& x : direction_) {
    if (x < 0) throw InvalidInput("line direction must be non-negative");
    if (x != 0) nonzero = true;
  }
  if (!nonzero) throw InvalidInput("line direction must be non-zero");
  normSquared_ = line_norm_squared(offset_, direction_);
  if (normSquared_ == 0) throw InvalidInput("line passes through the origin");
}

double LineJ::norm() const { return sqrt_rational(normSquared_); }

std::vector<Rational> LineJ::point(const Rational& s) const {
  std::vector<Rational> w = offset_;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += s * direction_[i];
  return w;
}

// ---------------------------------------------------------------------------

ScanSummary summarize_scan(const std::vector<std::pair<std::size_t, double>>& visits, const ScanOptions& opt) {
  ScanSummary s;
  if (visits.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  double early = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < visits.size(); ++i) {
    s.min = std::min(s.min, visits[i].second);
    if (i < opt.detectVisits) early = std::min(early, visits[i].second);
  }
  for (std::size_t i = visits.size() / 2; i < visits.size(); ++i) s.limsupEstimate = std::max(s.limsupEstimate, visits[i].second);
  s.eigenCandidate = early < opt.eigenThreshold;
  s.excluded = s.limsupEstimate > opt.excludeThreshold;
  return s;
}

namespace {

long log2_abs(const Rational& q) {
  if (q == 0) return std::numeric_limits<long>::min();
  return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

long log2_norm(const BigMatrix& m) {
  long best = 0;
  for (const auto& x : m.data())
    if (x != 0) best = std::max(best, static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2)));
  return best + static_cast<long>(std::ceil(std::log2(static_cast<double>(m.cols()))));
}

template <class T>
ScanReport scan_impl(const std::vector<T>& lambda0, const Permutation& p, const std::vector<Rational>& h,
                     const std::vector<Rational>& tGrid, const Window& window, const ScanOptions& opt) {
  require_irreducible(p);
  const auto d = static_cast<std::size_t>(p.size());
  if (lambda0.size() != d) throw InvalidInput("length vector does not match the permutation");
  if (h.size() != d) throw InvalidInput("h does not match the permutation");
  if (std::all_of(h.begin(), h.end(), [](const Rational& x) { return x == 0; })) throw InvalidInput("h must be non-zero");
  for (const auto& x : lambda0)
    if (!(x > 0)) throw InvalidInput("interval lengths must be positive");
  if (window.perm.size() != p.size()) throw InvalidInput("window permutation has the wrong size");
  if (!window.positive()) throw NonPositiveWindow("window word " + word_string(window.word) + " is not positive");
  if (opt.maxVisits < 1) throw InvalidInput("maxVisits must be positive");
  if (opt.renormalize && is_exact_v<T>) throw InvalidInput("renormalized scans need float lengths");

  ScanReport rep;
  for (const auto& x : lambda0) {
    if constexpr (is_exact_v<T>)
      rep.lambda.push_back(to_string(x));
    else
      rep.lambda.push_back(x.to_string(static_cast<int>(static_cast<double>(x.precision()) * 0.30103) + 1));
  }
  rep.perm = p;
  rep.h = h;
  rep.window = window;
  for (const auto& t : tGrid) rep.series.push_back(ScanSeries{t, {}, {}});

  mpfr_prec_t lambdaBits = 0;
  if constexpr (!is_exact_v<T>) {
    lambdaBits = lambda0[0].precision();
    for (const auto& x : lambda0) lambdaBits = std::min(lambdaBits, x.precision());
  }
  std::optional<PrecisionScope> scope;
  if constexpr (!is_exact_v<T>) scope.emplace(lambdaBits);

  std::vector<T> lambda = lambda0;
  Permutation q = p;
  std::vector<Rational> w = h;  // B_n h
  BigMatrix b = BigMatrix::identity(d);
  while (true) {
    if (rep.steps >= opt.maxSteps) {
      rep.truncation = "maxSteps";
      break;
    }
    const Permutation before = q;
    RauzyType type;
    try {
      type = rauzy_advance(lambda, q);
    } catch (const HaltOnTie&) {
      rep.truncation = "tie";
      break;
    }
    ++rep.steps;
    rauzy_apply(before, type, w);
    if constexpr (!is_exact_v<T>) {
      if (opt.renormalize) {
        Real total(0.0, lambdaBits);
        for (const auto& x : lambda) total += x;
        for (auto& x : lambda) x /= total;
      } else {
        b = to_big(rauzy_matrix(before, type)) * b;
        // lambda_n = B_n^{-T} lambda loses about twice the bits of ||B_n||.
        if (2 * log2_norm(b) > static_cast<long>(lambdaBits) - 32) {
          rep.truncation = "precision";
          break;
        }
      }
    }
    if (!window.contains(lambda, q)) continue;
    if (opt.tPrecisionBits) {
      long big = 0;
      for (const auto& x : w) big = std::max(big, log2_abs(x));
      if (big > static_cast<long>(*opt.tPrecisionBits) - 40) {
        rep.truncation = "precision";
        break;
      }
    }
    for (auto& s : rep.series) {
      std::vector<Rational> v = w;
      for (auto& x : v) x *= s.t;
      s.visits.emplace_back(rep.steps, sqrt_rational(dist_torus_squared(v)));
    }
    if (++rep.visits >= opt.maxVisits) break;
  }
  for (auto& s : rep.series) s.summary = summarize_scan(s.visits, opt);
  return rep;
}

}  // namespace

ScanReport veech_scan(const std::vector<Rational>& lambda, const Permutation& p, const std::vector<Rational>& h,
                      const std::vector<Rational>& tGrid, const Window& window, const ScanOptions& opt) {
  return scan_impl(lambda, p, h, tGrid, window, opt);
}

ScanReport veech_scan(const std::vector<Real>& lambda, const Permutation& p, const std::vector<Rational>& h,
                      const std::vector<Rational>& tGrid, const Window& window, const ScanOptions& opt) {
  return scan_impl(lambda, p, h, tGrid, window, opt);
}

std::vector<Rational> t_grid(const Rational& tMin, const Rational& tMax, std::size_t steps) {
  if (steps < 1) throw InvalidInput("t grid needs at least one point");
  if (tMax < tMin) throw InvalidInput("t-max is below t-min");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < steps; ++i) {
    if (steps == 1) {
      out.push_back(tMin);
      break;
    }
    Rational t = tMin + (tMax - tMin) * Rational(static_cast<long>(i)) / Rational(static_cast<long>(steps - 1));
    out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------

Observable Observable::parse(const std::string& id) {
  auto colon = id.find(':');
  if (colon == std::string::npos) throw InvalidInput("observable must look like exp:k or ind:i, got '" + id + "'");
  const std::string kind = id.substr(0, colon);
  long index = 0;
  try {
    std::size_t used = 0;
    index = std::stol(id.substr(colon + 1), &used);
    if (used != id.size() - colon - 1) throw InvalidInput("bad index");
  } catch (const std::exception&) {
    throw InvalidInput("bad observable index in '" + id + "'");
  }
  if (kind == "exp") {
    if (index == 0) throw InvalidInput("exp:0 is not mean-zero");
    return {Kind::exponential, index};
  }
  if (kind == "ind") {
    if (index < 1) throw InvalidInput("indicator index must be at least 1");
    return {Kind::indicator, index};
  }
  throw InvalidInput("unknown observable kind '" + kind + "'");
}

std::string Observable::id() const { return (kind == Kind::exponential ? "exp:" : "ind:") + std::to_string(index); }

namespace {
double as_double(const Rational& x) { return x.get_d(); }
double as_double(const Real& x) { return x.to_double(); }
}  // namespace

template <class T>
double twisted_average(const Iet<T>& f, const Observable& g, double t, const T& x0, std::size_t n) {
  if (n < 1) throw InvalidInput("twisted average needs N >= 1");
  if (g.kind == Observable::Kind::indicator && g.index > f.d()) throw InvalidInput("indicator index exceeds d");
  f.interval_of(x0);
  const double length = as_double(f.length());
  const double twoPi = 2 * std::numbers::pi;
  const double weight = g.kind == Observable::Kind::indicator
                            ? as_double(f.lambda()[static_cast<std::size_t>(g.index - 1)]) / length
                            : 0.0;
  std::complex<double> sum = 0;
  T x = x0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> value;
    if (g.kind == Observable::Kind::exponential) {
      const double u = std::fmod(static_cast<double>(g.index) * as_double(x) / length, 1.0);
      value = std::polar(1.0, twoPi * u);
    } else {
      value = (f.interval_of(x) == g.index ? 1.0 : 0.0) - weight;
    }
    const long double tk = static_cast<long double>(t) * static_cast<long double>(k);
    const double phase = static_cast<double>(tk - std::floor(tk));
    sum += std::polar(1.0, -twoPi * phase) * value;
    if (k + 1 < n) x = f.evaluate(x);
  }
  return std::abs(sum) / static_cast<double>(n);
}

template double twisted_average<Rational>(const Iet<Rational>&, const Observable&, double, const Rational&, std::size_t);
template double twisted_average<Real>(const Iet<Real>&, const Observable&, double, const Real&, std::size_t);

// ---------------------------------------------------------------------------

HProjection hperp_projection(const Permutation& p, const std::vector<Rational>& h) {
  const HSubspace hs = h_subspace(p);
  const auto d = static_cast<std::size_t>(p.size());
  if (h.size() != d) throw InvalidInput("h does not match the permutation");
  RatMatrix a(hs.annihilators.size(), d);
  for (std::size_t i = 0; i < hs.annihilators.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = hs.annihilators[i][j];
  const std::size_t rank = rref(a);
  HProjection out{h, std::vector<Rational>(d, Rational(0))};
  if (rank == 0) return out;
  RatMatrix r(rank, d);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = a(i, j);
  // hPerp = R^T (R R^T)^{-1} R h
  RatMatrix gram = r * r.transpose();
  std::vector<Rational> coef = rational_inverse(gram).apply(r.apply(h));
  out.hPerp = r.apply_transpose(coef);
  for (std::size_t j = 0; j < d; ++j) out.hH[j] = h[j] - out.hPerp[j];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Piece {
  Real lo, hi;
  std::vector<std::vector<BigInt>> chain;
};

// Parameters s in (lo, hi) with |a - c + s u| < delta, as an interval.
std::optional<std::pair<Real, Real>> ball_interval(const std::vector<Rational>& a, const std::vector<BigInt>& c,
                                                   const std::vector<Rational>& u, const Rational& delta, const Real& lo,
                                                   const Real& hi, mpfr_prec_t prec) {
  std::vector<Rational> v = a;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= Rational(c[i]);
  const Rational qa = dot(u, u);
  const Rational qb = 2 * dot(v, u);
  const Rational qc = dot(v, v) - delta * delta;
  const Rational disc = qb * qb - 4 * qa * qc;
  if (disc <= 0) return std::nullopt;
  Real root = sqrt(Real(disc, prec));
  Real den(2 * qa, prec);
  Real mb(-qb, prec);
  Real r1 = (mb - root) / den;
  Real r2 = (mb + root) / den;
  Real l = r1 > lo ? r1 : lo;
  Real hgh = r2 < hi ? r2 : hi;
  if (!(l < hgh)) return std::nullopt;
  return std::make_pair(std::move(l), std::move(hgh));
}

bool tiny(const Piece& piece, mpfr_prec_t prec) {
  Real width = piece.hi - piece.lo;
  Real scale = abs(piece.lo) > abs(piece.hi) ? abs(piece.lo) : abs(piece.hi);
  if (scale.is_zero()) return false;
  return width.exponent() < scale.exponent() - static_cast<long>(prec) + 20;
}

struct SampleOutcome {
  std::size_t survivedBlocks = 0;  // blocks fully survived with an exact piece set
  bool truncated = false;
  bool overflowed = false;
  bool precisionWarning = false;
  std::size_t maxLive = 0;
  std::optional<SurvivalCertificate> certificate;
};

SampleOutcome probe_sample(const CocycleModel& model, const LineJ& j, const ProbeOptions& opt, std::size_t index) {
  SampleOutcome out;
  const mpfr_prec_t prec = opt.precisionBits;
  PrecisionScope scope(prec);
  std::vector<Rational> a = j.offset(), u = j.direction();
  const std::size_t p = a.size();

  std::vector<Piece> pieces;
  {
    Real inf = Real(1, prec);
    mpfr_set_inf(inf.get(), -1);
    Real sup = -inf;
    auto first = ball_interval(a, std::vector<BigInt>(p, BigInt(0)), u, opt.delta, inf, sup, prec);
    if (!first) return out;
    pieces.push_back(Piece{first->first, first->second, {}});
  }
  auto rng = task_rng(opt.seed, index);
  auto orbit = model.start(rng);
  std::vector<BigMatrix> matrices;
  const std::size_t total = opt.blocks * opt.blockLength;
  for (std::size_t k = 1; k <= total; ++k) {
    auto m = orbit->next();
    if (!m) {
      out.truncated = true;
      return out;
    }
    if (m->rows() != p || m->cols() != p) throw InvalidInput("line dimension does not match the cocycle");
    a = mat_apply(*m, a);
    u = mat_apply(*m, u);
    matrices.push_back(std::move(*m));

    std::size_t jmax = 0;
    for (std::size_t i = 1; i < p; ++i)
      if (abs(u[i]) > abs(u[jmax])) jmax = i;
    const Real aj(a[jmax], prec), uj(u[jmax], prec), dl(opt.delta, prec);

    std::vector<Piece> next;
    for (const auto& piece : pieces) {
      Real e1 = aj + piece.lo * uj, e2 = aj + piece.hi * uj;
      if (e2 < e1) std::swap(e1, e2);
      const BigInt cmin = ceil_of(e1 - dl), cmax = floor_of(e2 + dl);
      if (cmax >= cmin && BigInt(cmax - cmin) + next.size() > opt.maxTranslates) {
        out.overflowed = true;
        return out;
      }
      for (BigInt cj = cmin; cj <= cmax; ++cj) {
        // Sub-range where the dominant coordinate is within delta of cj.
        Real s1 = (Real(Rational(cj) - opt.delta - a[jmax], prec)) / uj;
        Real s2 = (Real(Rational(cj) + opt.delta - a[jmax], prec)) / uj;
        if (s2 < s1) std::swap(s1, s2);
        Real lo = s1 > piece.lo ? s1 : piece.lo;
        Real hi = s2 < piece.hi ? s2 : piece.hi;
        if (!(lo < hi)) continue;
        // Other coordinates move by at most 2 delta here, so one candidate each.
        Rational mid = ((lo + hi) / 2).to_rational();
        std::vector<BigInt> c(p);
        for (std::size_t i = 0; i < p; ++i) c[i] = i == jmax ? cj : round_nearest(a[i] + mid * u[i]);
        auto iv = ball_interval(a, c, u, opt.delta, lo, hi, prec);
        if (!iv) continue;
        Piece np{std::move(iv->first), std::move(iv->second), piece.chain};
        np.chain.push_back(std::move(c));
        if (tiny(np, prec)) out.precisionWarning = true;
        next.push_back(std::move(np));
      }
    }
    pieces = std::move(next);
    out.maxLive = std::max(out.maxLive, pieces.size());
    if (pieces.empty()) return out;
    if (k % opt.blockLength == 0) {
      out.survivedBlocks = k / opt.blockLength;
      const Piece* best = &pieces.front();
      for (const auto& pc : pieces)
        if (pc.hi - pc.lo > best->hi - best->lo) best = &pc;
      SurvivalCertificate cert;
      cert.sample = index;
      cert.steps = k;
      cert.s = ((best->lo + best->hi) / 2).to_rational();
      cert.matrices = matrices;
      cert.translates = best->chain;
      out.certificate = std::move(cert);
    }
  }
  return out;
}

}  // namespace

std::size_t block_length_for(double theta) {
  if (!(theta > 0)) throw InvalidInput("block length needs a positive exponent");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(3.0) / theta)));
}

bool replay_certificate(const SurvivalCertificate& c, const LineJ& j, const Rational& delta) {
  if (c.matrices.size() != c.steps || c.translates.size() != c.steps) return false;
  const Rational d2 = delta * delta;
  std::vector<Rational> w = j.point(c.s);
  if (!(dot(w, w) < d2)) return false;
  for (std::size_t k = 0; k < c.steps; ++k) {
    w = mat_apply(c.matrices[k], w);
    const auto& t = c.translates[k];
    if (t.size() != w.size()) return false;
    Rational s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Rational r = w[i] - Rational(t[i]);
      s += r * r;
    }
    if (!(s < d2)) return false;
  }
  return true;
}

ProbeReport wstable_probe(const CocycleModel& cocycle, const LineJ& j, const ProbeOptions& opt) {
  if (!(opt.delta > 0) || !(opt.delta < Rational(1, 10))) throw InvalidInput("delta must lie in (0, 1/10)");
  if (opt.blockLength < 1 || opt.blocks < 1 || opt.samples < 1) throw InvalidInput("probe needs positive block length, blocks and samples");
  if (static_cast<int>(j.dim()) != cocycle.dim()) throw InvalidInput("line dimension does not match the cocycle");
  if (opt.precisionBits < 64) throw InvalidInput("probe precision must be at least 64 bits");

  std::vector<SampleOutcome> outcomes(opt.samples);
  if (j.norm_squared() < opt.delta * opt.delta)
    parallel_for(opt.samples, [&](std::size_t i) { outcomes[i] = probe_sample(cocycle, j, opt, i); });

  ProbeReport rep;
  rep.samples = opt.samples;
  rep.survivors.assign(opt.blocks, 0);
  for (auto& o : outcomes) {
    const bool open = o.truncated || o.overflowed;
    for (std::size_t m = 1; m <= opt.blocks; ++m)
      if (open || o.survivedBlocks >= m) ++rep.survivors[m - 1];
    if (o.truncated) ++rep.truncated;
    if (o.overflowed) ++rep.overflowed;
    rep.precisionWarning = rep.precisionWarning || o.precisionWarning;
    rep.maxLiveTranslates = std::max(rep.maxLiveTranslates, o.maxLive);
    if (o.certificate) {
      if (replay_certificate(*o.certificate, j, opt.delta)) ++rep.certificatesPassed;
      rep.certificates.push_back(std::move(*o.certificate));
    }
  }
  for (std::size_t n : rep.survivors) rep.estimates.push_back(static_cast<double>(n) / static_cast<double>(opt.samples));
  return rep;
}

PhiCount phi_delta_count(const BigMatrix& a, const LineJ& j, const Rational& delta) {
  if (!(delta > 0) || !(delta < Rational(1, 10))) throw InvalidInput("delta must lie in (0, 1/10)");
  if (a.rows() != j.dim() || a.cols() != j.dim()) throw InvalidInput("matrix does not match the line");
  PhiCount out;
  out.norm0 = norm0(a);
  if (!(j.norm_squared() < delta * delta)) return out;
  const mpfr_prec_t prec = 512;
  PrecisionScope scope(prec);
  Real inf(1.0, prec);
  mpfr_set_inf(inf.get(), -1);
  Real sup = -inf;
  const std::size_t p = j.dim();
  auto base = ball_interval(j.offset(), std::vector<BigInt>(p, BigInt(0)), j.direction(), delta, inf, sup, prec);
  if (!base) return out;
  std::vector<Rational> av = mat_apply(a, j.offset()), uv = mat_apply(a, j.direction());
  std::size_t jmax = 0;
  for (std::size_t i = 1; i < p; ++i)
    if (abs(uv[i]) > abs(uv[jmax])) jmax = i;
  const Real aj(av[jmax], prec), uj(uv[jmax], prec), dl(delta, prec);
  Real e1 = aj + base->first * uj, e2 = aj + base->second * uj;
  if (e2 < e1) std::swap(e1, e2);
  for (BigInt cj = ceil_of(e1 - dl); cj <= floor_of(e2 + dl); ++cj) {
    Real s1 = Real(Rational(cj) - delta - av[jmax], prec) / uj;
    Real s2 = Real(Rational(cj) + delta - av[jmax], prec) / uj;
    if (s2 < s1) std::swap(s1, s2);
    Real lo = s1 > base->first ? s1 : base->first;
    Real hi = s2 < base->second ? s2 : base->second;
    if (!(lo < hi)) continue;
    Rational mid = ((lo + hi) / 2).to_rational();
    std::vector<BigInt> c(p);
    bool zero = true;
    for (std::size_t i = 0; i < p; ++i) {
      c[i] = i == jmax ? cj : round_nearest(av[i] + mid * uv[i]);
      if (c[i] != 0) zero = false;
    }
    if (zero || !ball_interval(av, c, uv, delta, lo, hi, prec)) continue;
    std::vector<Rational> shifted = av;
    for (std::size_t i = 0; i < p; ++i) shifted[i] -= Rational(c[i]);
    out.lineNorms.push_back(sqrt_rational(line_norm_squared(shifted, uv)));
    out.translates.push_back(std::move(c));
  }
  out.count = out.translates.size();
  return out;
}

// ---------------------------------------------------------------------------

HausdorffEstimate hausdorff_estimate(const CocycleModel& cocycle, const std::vector<double>& deltas, std::size_t horizon,
                                     double lambdaHat, std::uint64_t seed) {
  if (horizon < 1) throw InvalidInput("horizon must be positive");
  if (!(lambdaHat > 0)) throw InvalidInput("the dimension bound needs a positive exponent");
  for (double d : deltas)
    if (!(d > 0) || !(d < 0.5)) throw InvalidInput("delta must lie in (0, 1/2)");
  HausdorffEstimate est;
  est.deltas = deltas;
  est.lambdaHat = lambdaHat;
  est.seed = seed;
  std::mt19937_64 rng(seed);
  auto orbit = cocycle.start(rng);
  std::vector<double> logNorms;
  for (std::size_t k = 0; k < horizon; ++k) {
    auto m = orbit->next();
    if (!m) {
      est.truncated = true;
      break;
    }
    logNorms.push_back(log_norm2(*m));
  }
  est.horizon = logNorms.size();
  if (logNorms.empty()) throw InvalidInput("orbit ended before the first step");
  const double p = cocycle.dim();
  for (double delta : deltas) {
    double sum = 0;
    for (double ln : logNorms) {
      const double z = p * (std::log(3 * delta) + ln);
      sum += z > 30 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    const double beta = sum / static_cast<double>(logNorms.size());
    est.betaDelta.push_back(beta);
    est.dimBound.push_back(beta / lambdaHat);
  }
  return est;
}

double smallest_positive_exponent(const SpectrumEstimate& s) {
  double best = std::numeric_limits<double>::infinity();
  for (double x : s.exponents)
    if (x > 0) best = std::min(best, x);
  if (!std::isfinite(best)) throw InvalidInput("spectrum has no positive exponent");
  return best;
}

}  // namespace ietlab
