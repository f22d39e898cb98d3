#pragma once

#include <algorithm>
#include <string>
#include <type_traits>
#include <vector>

#include "ietlab/error.hpp"
#include "ietlab/perm.hpp"
#include "ietlab/rational.hpp"
#include "ietlab/real.hpp"

namespace ietlab {

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline std::vector<Real> to_real(const std::vector<Rational>& v, mpfr_prec_t bits = working_precision()) {
  std::vector<Real> out;
  out.reserve(v.size());
  for (const auto& q : v) out.emplace_back(q, bits);
  return out;
}

/// The interval exchange f(lambda, pi) on [0, |lambda|).
///
/// Intervals are half-open, I_i = [beta_i, beta_{i+1}), and points are
/// located by raw comparison with the breakpoint table in both modes.
template <class T>
class Iet {
 public:
  Iet(std::vector<T> lambda, Permutation perm) : lambda_(std::move(lambda)), perm_(std::move(perm)) {
    const int d = perm_.size();
    if (static_cast<int>(lambda_.size()) != d)
      throw InvalidInput("length vector has " + std::to_string(lambda_.size()) + " entries, permutation has " +
                         std::to_string(d));
    require_irreducible(perm_);
    for (const auto& x : lambda_)
      if (!(x > 0)) throw InvalidInput("interval lengths must be positive");
    breakpoints_.assign(static_cast<std::size_t>(d + 1), T(0));
    for (int i = 0; i < d; ++i) breakpoints_[static_cast<std::size_t>(i + 1)] = breakpoints_[static_cast<std::size_t>(i)] + lambda_[static_cast<std::size_t>(i)];
    // Left endpoint of the image slot of interval i is the total length of
    // the intervals that land before it.
    std::vector<T> imageStart(static_cast<std::size_t>(d + 1), T(0));
    for (int k = 1; k <= d; ++k)
      imageStart[static_cast<std::size_t>(k)] = imageStart[static_cast<std::size_t>(k - 1)] + lambda_[static_cast<std::size_t>(perm_.inv(k) - 1)];
    for (int i = 1; i <= d; ++i)
      translations_.push_back(imageStart[static_cast<std::size_t>(perm_(i) - 1)] - breakpoints_[static_cast<std::size_t>(i - 1)]);
  }

  int d() const noexcept { return perm_.size(); }
  const std::vector<T>& lambda() const noexcept { return lambda_; }
  const Permutation& perm() const noexcept { return perm_; }
  /// beta_1 = 0, ..., beta_{d+1} = |lambda| (0-based vector of size d+1).
  const std::vector<T>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<T>& translations() const noexcept { return translations_; }
  const T& length() const { return breakpoints_.back(); }

  /// 1-based index i with x in I_i.
  int interval_of(const T& x) const {
    if (x < 0 || !(x < length())) throw DomainError("point outside [0, |lambda|)");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<int>(it - breakpoints_.begin());
  }

  T evaluate(const T& x) const { return x + translations_[static_cast<std::size_t>(interval_of(x) - 1)]; }

  /// f(lambda', pi^{-1}) with lambda'_k = lambda_{pi^{-1}(k)}.
  Iet inverse() const {
    std::vector<T> l;
    for (int k = 1; k <= d(); ++k) l.push_back(lambda_[static_cast<std::size_t>(perm_.inv(k) - 1)]);
    return Iet(std::move(l), perm_.inverse());
  }

 private:
  std::vector<T> lambda_;
  Permutation perm_;
  std::vector<T> breakpoints_;
  std::vector<T> translations_;
};

template <class T>
struct Orbit {
  std::vector<T> points;
  std::vector<int> itinerary;
};

template <class T>
Orbit<T> orbit(const Iet<T>& f, T x, std::size_t n) {
  Orbit<T> o;
  if (n == 0) {
    f.interval_of(x);
    return o;
  }
  o.points.reserve(n);
  o.itinerary.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    int i = f.interval_of(x);
    o.points.push_back(x);
    o.itinerary.push_back(i);
    if (k + 1 < n) x += f.translations()[static_cast<std::size_t>(i - 1)];
  }
  return o;
}

/// True iff no image f^k(beta_i), 1 <= k <= depth, of an interior
/// discontinuity beta_2..beta_d equals an interior discontinuity.
/// Exact mode only.
template <class T>
bool keane_probe(const Iet<T>& f, int depth) {
  if constexpr (!is_exact_v<T>) {
    throw InvalidInput("keane_probe requires exact rational lengths");
  } else {
    if (depth < 1) throw InvalidInput("keane_probe depth must be at least 1");
    const auto& b = f.breakpoints();
    std::vector<T> interior(b.begin() + 1, b.end() - 1);
    for (const auto& beta : interior) {
      T x = beta;
      for (int k = 1; k <= depth; ++k) {
        x = f.evaluate(x);
        if (std::binary_search(interior.begin(), interior.end(), x)) return false;
      }
    }
    return true;
  }
}

/// A point (base, height) of the suspension flow with roof h_i over I_i.
template <class T>
struct FlowState {
  T base;
  T height;
  std::vector<T> roof;
};

template <class T>
FlowState<T> flow_advance(FlowState<T> state, const Iet<T>& f, const T& tau) {
  if (tau < 0) throw InvalidInput("flow time must be non-negative");
  if (static_cast<int>(state.roof.size()) != f.d()) throw InvalidInput("roof vector has the wrong size");
  for (const auto& h : state.roof)
    if (!(h > 0)) throw InvalidInput("roof heights must be positive");
  int i = f.interval_of(state.base);
  if (state.height < 0 || !(state.height < state.roof[static_cast<std::size_t>(i - 1)]))
    throw InvalidInput("height outside the rectangle");
  T s = state.height + tau;
  while (!(s < state.roof[static_cast<std::size_t>(i - 1)])) {
    s -= state.roof[static_cast<std::size_t>(i - 1)];
    state.base += f.translations()[static_cast<std::size_t>(i - 1)];
    i = f.interval_of(state.base);
  }
  state.height = std::move(s);
  return state;
}

}  // namespace ietlab
