#include "ietlab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ietlab/lattice.hpp"
#include "ietlab/lyap.hpp"

namespace ietlab {

IntMatrix rauzy_matrix(const Permutation& p, RauzyType type) {
  const int d = p.size();
  const int piv = p.inv(d);
  IntMatrix b(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  auto set = [&](int i, int j) { b(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = 1; };
  if (type == RauzyType::type1) {
    for (int i = 1; i <= d; ++i) {
      if (i <= piv) {
        set(i, i);
      } else if (i == piv + 1) {
        set(i, piv);
        set(i, d);
      } else {
        set(i, i - 1);
      }
    }
  } else {
    for (int i = 1; i <= d; ++i) set(i, i);
    set(piv, d);
  }
  return b;
}

double log_norm_inf(const BigMatrix& m) {
  BigInt best = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += abs(m(i, j));
    if (s > best) best = s;
  }
  if (best == 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double mant = mpz_get_d_2exp(&e, best.get_mpz_t());
  return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

void CocycleProduct::push(const IntMatrix& step) { push(to_big(step)); }

void CocycleProduct::push(const BigMatrix& step) {
  matrix = step * matrix;
  ++steps;
  logNorm = log_norm_inf(matrix);
}

// ---------------------------------------------------------------------------
// Oracle: induced maps discovered by iterating f.

namespace {

struct Discovered {
  std::vector<Rational> lambda;
  Permutation perm;
  IntMatrix visits;
};

// First return map of f to [0, c).
Discovered discover_return_map(const Iet<Rational>& f, const Rational& c) {
  const Iet<Rational> finv = f.inverse();
  const auto& b = f.breakpoints();
  const std::size_t cap = 1'000'000;
  auto first_entry = [&](Rational z, bool forceStep) {
    std::size_t k = 0;
    if (forceStep) z = finv.evaluate(z);
    while (!(z < c)) {
      z = finv.evaluate(z);
      if (++k > cap) throw Error("oracle: backward orbit never entered the induction interval");
    }
    return z;
  };
  std::set<Rational> cuts{Rational(0)};
  for (std::size_t i = 1; i + 1 < b.size(); ++i) cuts.insert(first_entry(b[i], false));
  if (c < f.length()) cuts.insert(first_entry(c, true));
  std::vector<Rational> ends(cuts.begin(), cuts.end());
  ends.push_back(c);

  const std::size_t n = ends.size() - 1;
  Discovered out;
  out.visits = IntMatrix(n, static_cast<std::size_t>(f.d()));
  std::vector<Rational> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.lambda.push_back(ends[i + 1] - ends[i]);
    Rational x = (ends[i] + ends[i + 1]) / 2;
    std::size_t steps = 0;
    do {
      int j = f.interval_of(x);
      ++out.visits(i, static_cast<std::size_t>(j - 1));
      x = f.evaluate(x);
      if (++steps > cap) throw Error("oracle: orbit never returned");
    } while (!(x < c));
    images[i] = x;
  }
  std::vector<int> image(n);
  for (std::size_t i = 0; i < n; ++i)
    image[i] = 1 + static_cast<int>(std::count_if(images.begin(), images.end(), [&](const Rational& y) { return y < images[i]; }));
  out.perm = Permutation(std::move(image));
  return out;
}

// Which end is cut from an exchange: 1 when the last interval is shorter
// than the interval landing in the last slot, 2 when longer.
int geometric_type(const std::vector<Rational>& lambda, const Permutation& p) {
  const Rational& last = lambda.back();
  const Rational& landing = lambda[static_cast<std::size_t>(p.inv(p.size()) - 1)];
  if (last == landing) throw HaltOnTie("oracle: induction undefined at a tie");
  return last < landing ? 1 : 2;
}

Rational cut_point(const std::vector<Rational>& lambda, const Permutation& p) {
  const Rational& last = lambda.back();
  const Rational& landing = lambda[static_cast<std::size_t>(p.inv(p.size()) - 1)];
  return sum(lambda) - (last < landing ? last : landing);
}

}  // namespace

OracleResult induction_oracle(const std::vector<Rational>& lambda, const Permutation& p, Induction kind) {
  const Iet<Rational> f(lambda, p);
  const int type0 = geometric_type(lambda, p);
  Rational c = cut_point(lambda, p);
  Discovered level = discover_return_map(f, c);
  std::size_t steps = 1;
  if (level.lambda.size() != lambda.size()) throw Error("oracle: induced map has the wrong number of intervals");
  if (kind == Induction::zorich) {
    while (geometric_type(level.lambda, level.perm) == type0) {
      c = cut_point(level.lambda, level.perm);
      level = discover_return_map(f, c);
      ++steps;
      if (level.lambda.size() != lambda.size()) throw Error("oracle: induced map has the wrong number of intervals");
    }
  }
  return {level.visits, level.lambda, level.perm, steps};
}

IntMatrix visitation_matrix_oracle(const std::vector<Rational>& lambda, const Permutation& p, Induction kind) {
  return induction_oracle(lambda, p, kind).matrix;
}

double hilbert_distance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidInput("hilbert_distance: size mismatch");
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidInput("hilbert_distance: components must be positive");
    double r = std::log(x[i]) - std::log(y[i]);
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return hi - lo;
}

// ---------------------------------------------------------------------------
// Words and windows.

std::vector<RauzyType> parse_word(std::string_view text) {
  std::vector<RauzyType> w;
  for (char ch : text) {
    if (ch == '1')
      w.push_back(RauzyType::type1);
    else if (ch == '2')
      w.push_back(RauzyType::type2);
    else
      throw InvalidInput("Rauzy words use the letters 1 and 2: '" + std::string(text) + "'");
  }
  if (w.empty()) throw InvalidInput("empty Rauzy word");
  return w;
}

std::string word_string(const std::vector<RauzyType>& word) {
  std::string s;
  for (RauzyType t : word) s += t == RauzyType::type1 ? '1' : '2';
  return s;
}

BigMatrix Window::matrix() const {
  BigMatrix m = BigMatrix::identity(static_cast<std::size_t>(perm.size()));
  Permutation q = perm;
  for (RauzyType t : word) {
    m = to_big(rauzy_matrix(q, t)) * m;
    q = rauzy_successor(q, t);
  }
  return m;
}

Permutation Window::end_perm() const {
  Permutation q = perm;
  for (RauzyType t : word) q = rauzy_successor(q, t);
  return q;
}

bool Window::positive() const {
  for (const auto& x : matrix().data())
    if (x <= 0) return false;
  return true;
}

namespace {
std::vector<BigInt> row_sums(const BigMatrix& m) {
  std::vector<BigInt> r(m.rows(), BigInt(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i] += m(i, j);
  return r;
}

BigInt product(const std::vector<BigInt>& v) {
  BigInt p = 1;
  for (const auto& x : v) p *= x;
  return p;
}
}  // namespace

Rational Window::mass() const {
  Rational q(BigInt(1), product(row_sums(matrix())));
  q.canonicalize();
  return q;
}

std::optional<Window> shortest_positive_window(const Permutation& p, std::size_t maxLength) {
  require_irreducible(p);
  const auto d = static_cast<std::size_t>(p.size());
  // Iterative deepening keeps the first hit both shortest and lexicographically least.
  for (std::size_t len = 1; len <= maxLength; ++len) {
    std::vector<RauzyType> word;
    std::optional<Window> found;
    auto dfs = [&](auto&& self, const Permutation& q, const IntMatrix& m) -> void {
      if (found) return;
      if (word.size() == len) {
        for (auto x : m.data())
          if (x <= 0) return;
        found = Window{p, word};
        return;
      }
      for (RauzyType t : {RauzyType::type1, RauzyType::type2}) {
        word.push_back(t);
        self(self, rauzy_successor(q, t), rauzy_matrix(q, t) * m);
        word.pop_back();
        if (found) return;
      }
    };
    dfs(dfs, p, IntMatrix::identity(d));
    if (found) return found;
  }
  return std::nullopt;
}

double window_diameter(const Window& w) {
  BigMatrix m = w.matrix();
  double best = 0;
  for (std::size_t a = 0; a < m.rows(); ++a)
    for (std::size_t b = a + 1; b < m.rows(); ++b) {
      std::vector<double> x, y;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        x.push_back(m(a, j).get_d());
        y.push_back(m(b, j).get_d());
      }
      best = std::max(best, hilbert_distance(x, y));
    }
  return best;
}

// ---------------------------------------------------------------------------
// Induced cocycle.

InducedCocycle::InducedCocycle(Window window) : window_(std::move(window)) {
  require_irreducible(window_.perm);
  if (window_.word.empty()) throw InvalidInput("empty window word");
  windowMatrix_ = window_.matrix();
  for (const auto& x : windowMatrix_.data())
    if (x <= 0) throw NonPositiveWindow("window word " + word_string(window_.word) + " has a non-positive matrix");
  h_ = h_subspace(window_.perm);
  rowSums_ = row_sums(windowMatrix_);
}

BigMatrix InducedCocycle::restrict(const BigMatrix& b) const { return restrict_to_h(b, h_, h_); }

namespace {
std::size_t count_runs(const std::vector<RauzyType>& s) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i == 0 || s[i] != s[i - 1]) ++runs;
  return runs;
}
}  // namespace

Branch InducedCocycle::make_branch(const std::vector<RauzyType>& word) const {
  Branch br;
  br.word = word;
  br.zorichLength = count_runs(word);
  br.matrix = BigMatrix::identity(static_cast<std::size_t>(d()));
  Permutation q = window_.perm;
  for (RauzyType t : word) {
    br.matrix = to_big(rauzy_matrix(q, t)) * br.matrix;
    q = rauzy_successor(q, t);
  }
  if (!(q == window_.perm)) throw InvalidInput("return word does not come back to the window permutation");
  br.restricted = restrict(br.matrix);
  Rational mass(product(rowSums_), product(row_sums(windowMatrix_ * br.matrix)));
  mass.canonicalize();
  br.mass = mass;
  return br;
}

std::vector<Branch> InducedCocycle::enumerate_branches(std::size_t maxRauzyLength) const {
  const auto& w = window_.word;
  const std::size_t wl = w.size();
  std::vector<Branch> out;
  std::vector<RauzyType> u = w;
  std::vector<Permutation> perms{window_.perm};
  for (RauzyType t : w) perms.push_back(rauzy_successor(perms.back(), t));

  auto is_return_at = [&](std::size_t m) {
    if (m < 1 || !(perms[m] == window_.perm) || u[m - 1] == w[0]) return false;
    for (std::size_t k = 0; k < wl; ++k)
      if (u[m + k] != w[k]) return false;
    return true;
  };
  // Earlier returns are impossible on the initial path when none is detected.
  for (std::size_t m = 1; m + wl <= u.size(); ++m)
    if (is_return_at(m)) {
      out.push_back(make_branch(std::vector<RauzyType>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m))));
      return out;
    }

  auto dfs = [&](auto&& self) -> void {
    const std::size_t m = u.size() - wl;
    if (m >= 1 && is_return_at(m)) {
      out.push_back(make_branch(std::vector<RauzyType>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(m))));
      return;
    }
    if (m + 1 > maxRauzyLength) return;
    for (RauzyType t : {RauzyType::type1, RauzyType::type2}) {
      u.push_back(t);
      perms.push_back(rauzy_successor(perms.back(), t));
      self(self);
      u.pop_back();
      perms.pop_back();
    }
  };
  dfs(dfs);
  return out;
}

InducedCocycle::Return InducedCocycle::first_return(const std::vector<Real>& lambda, std::size_t maxZorich) const {
  const auto& w = window_.word;
  Return r;
  std::vector<Real> l = lambda;
  Permutation q = window_.perm;
  std::size_t runs = 0;
  auto normalize = [&l] {
    Real s = l[0];
    for (std::size_t i = 1; i < l.size(); ++i) s += l[i];
    for (auto& x : l) x /= s;
  };
  while (true) {
    RauzyType t = rauzy_advance(l, q);
    if (r.word.empty() || t != r.word.back()) {
      ++runs;
      normalize();
      if (runs > maxZorich) {
        r.truncated = true;
        r.zorichLength = runs - 1;
        break;
      }
    }
    r.word.push_back(t);
    if (q == window_.perm && t != w[0]) {
      std::vector<Real> look = l;
      Permutation lq = q;
      bool match = true;
      for (RauzyType wt : w)
        if (rauzy_advance(look, lq) != wt) {
          match = false;
          break;
        }
      if (match) {
        r.zorichLength = runs;
        break;
      }
    }
  }
  if (!r.truncated) normalize();
  r.lambdaAfter = std::move(l);
  return r;
}

std::vector<Real> Window::sample(std::mt19937_64& rng, mpfr_prec_t bits) const {
  const BigMatrix m = matrix();
  const std::size_t n = m.rows();
  std::vector<double> r;
  for (const auto& x : row_sums(m)) r.push_back(x.get_d());
  const double rmin = *std::min_element(r.begin(), r.end());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // The cylinder is the image of the simplex under y -> m^T y / |m^T y|; a
  // Dirichlet y accepted with probability (rmin / sum_j y_j r_j)^d has a
  // uniform image.
  while (true) {
    std::vector<Real> y = random_simplex_point(rng, static_cast<int>(n), bits);
    double weight = 0;
    for (std::size_t j = 0; j < n; ++j) weight += y[j].to_double() * r[j];
    if (unif(rng) >= std::pow(rmin / weight, static_cast<double>(n))) continue;
    std::vector<Real> lam = m.apply_transpose(y);
    Real s = lam[0];
    for (std::size_t i = 1; i < n; ++i) s += lam[i];
    for (auto& x : lam) x /= s;
    return lam;
  }
}

std::vector<Real> InducedCocycle::sample_point(std::mt19937_64& rng, mpfr_prec_t bits) const {
  return window_.sample(rng, bits);
}

DistortionEstimate estimate_branch_distortion(const InducedCocycle& c, std::size_t branchesMaxLength,
                                              std::size_t samples, std::uint64_t seed) {
  DistortionEstimate est;
  est.logBound = c.d() * window_diameter(c.window());
  std::vector<Branch> branches = c.enumerate_branches(branchesMaxLength);
  if (branches.empty()) return est;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, branches.size() - 1);
  auto log_image_norm = [](const BigMatrix& m, const std::vector<Real>& x) {
    Real s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) s.add_mul(x[i], Real(m(i, j), x[i].precision()));
    return log(s).to_double();
  };
  for (std::size_t k = 0; k < samples; ++k) {
    const Branch& b = branches[pick(rng)];
    auto x = c.sample_point(rng, 128);
    auto y = c.sample_point(rng, 128);
    double r = c.d() * (log_image_norm(b.matrix, y) - log_image_norm(b.matrix, x));
    est.logRatioMax = std::max(est.logRatioMax, std::abs(r));
    ++est.samples;
  }
  return est;
}

}  // namespace ietlab
