#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ietlab/lattice.hpp"
#include "ietlab/renorm.hpp"

using namespace ietlab;

namespace {
Rational q(const char* s) { return parse_rational(s); }

std::vector<Rational> random_lengths(std::mt19937_64& rng, int d, long range) {
  std::vector<Rational> l;
  for (int i = 0; i < d; ++i) {
    Rational x(static_cast<long>(rng() % static_cast<unsigned long>(range)) + 1);
    x /= Rational(static_cast<long>(rng() % 89) + 1);
    l.push_back(x);
  }
  return l;
}

std::vector<Rational> big_transpose_apply(const IntMatrix& b, const std::vector<Rational>& v) {
  return matrix_cast<Rational>(b).apply_transpose(v);
}
}  // namespace

TEST_CASE("single Rauzy steps") {
  auto s = rauzy_step(std::vector<Rational>{q("1/3"), q("2/3")}, Permutation::parse("2 1"));
  CHECK(s.kind == RauzyType::type2);
  CHECK(s.lambdaAfter == std::vector<Rational>{q("1/3"), q("1/3")});
  CHECK(s.matrix == IntMatrix{{1, 1}, {0, 1}});

  auto e = rauzy_step(std::vector<Rational>{5, 2}, Permutation::parse("2 1"));
  CHECK(e.kind == RauzyType::type1);
  CHECK(e.lambdaAfter == std::vector<Rational>{3, 2});

  CHECK_THROWS_AS(rauzy_step(std::vector<Rational>{q("1/2"), q("1/2")}, Permutation::parse("2 1")), HaltOnTie);
  CHECK_THROWS_AS(rauzy_step(std::vector<Rational>{1, 1}, Permutation::parse("1 2")), ReducibleError);
}

TEST_CASE("Zorich steps") {
  auto z = zorich_step(std::vector<Rational>{5, 2}, Permutation::parse("2 1"));
  CHECK(z.n == 2);
  CHECK(z.kind == RauzyType::type1);
  CHECK(z.lambdaAfter == std::vector<Rational>{1, 2});
  CHECK(big_transpose_apply(z.matrix, z.lambdaAfter) == z.lambdaBefore);

  // Golden ratio: every Zorich step is a single Rauzy step.
  PrecisionScope scope(512);
  std::vector<Real> l{Real(1), (Real(1) + sqrt(Real(5))) / Real(2)};
  Permutation p = Permutation::parse("2 1");
  for (int k = 0; k < 60; ++k) {
    auto [type, n] = zorich_advance(l, p);
    CHECK(n == 1);
  }
}

TEST_CASE("divergence guard") {
  ZorichOptions opt;
  opt.maxRun = 10;
  // lambda_2 tiny: type 1 runs for about 1/lambda_2 steps.
  std::vector<Rational> l{1, q("1/1000")};
  Permutation p = Permutation::parse("2 1");
  CHECK_THROWS_AS(zorich_advance(l, p, opt), DivergenceGuard);
}

TEST_CASE("orbit-counting oracle reproduces the step matrices") {
  CHECK(visitation_matrix_oracle({q("1/3"), q("2/3")}, Permutation::parse("2 1")) == IntMatrix{{1, 1}, {0, 1}});

  std::mt19937_64 rng(11);
  for (int d = 2; d <= 5; ++d)
    for (const auto& p : irreducible_permutations(d)) {
      auto l = random_lengths(rng, d, 1000);
      try {
        auto r = induction_oracle(l, p, Induction::rauzy);
        auto s = rauzy_step(l, p);
        CHECK(r.matrix == s.matrix);
        CHECK(r.permAfter == s.permAfter);
        CHECK(r.lambdaAfter == s.lambdaAfter);

        auto rz = induction_oracle(l, p, Induction::zorich);
        auto z = zorich_step(l, p);
        CHECK(rz.matrix == z.matrix);
        CHECK(rz.rauzySteps == z.n);
        CHECK(rz.lambdaAfter == z.lambdaAfter);
      } catch (const HaltOnTie&) {
      }
    }
}

TEST_CASE("lengths transform by the transpose along long paths") {
  std::mt19937_64 rng(3);
  for (const auto& p : {Permutation::parse("4 3 2 1"), Permutation::parse("5 4 3 2 1"), Permutation::parse("4 2 5 1 3")}) {
    auto l0 = random_lengths(rng, p.size(), 1'000'000'000L);
    auto l = l0;
    Permutation cur = p;
    CocycleProduct prod(p.size());
    for (int k = 0; k < 200; ++k) {
      try {
        auto s = rauzy_step(l, cur);
        prod.push(s.matrix);
        l = s.lambdaAfter;
        cur = s.permAfter;
      } catch (const HaltOnTie&) {
        break;
      }
    }
    CHECK(matrix_cast<Rational>(prod.matrix).apply_transpose(l) == l0);
    CHECK(abs(determinant(prod.matrix)) == 1);
    CHECK(prod.logNorm >= 0);
  }
}

TEST_CASE("Hilbert distance") {
  CHECK(hilbert_distance({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0));
  CHECK(hilbert_distance({1, 2}, {2, 1}) == doctest::Approx(std::log(4.0)));
  CHECK(hilbert_distance({1, 2}, {3, 6}) == doctest::Approx(0));
  CHECK_THROWS(hilbert_distance({1, 0}, {1, 1}));
}

TEST_CASE("words and windows") {
  CHECK(word_string(parse_word("1221")) == "1221");
  CHECK_THROWS_AS(parse_word("123"), InvalidInput);

  auto w = shortest_positive_window(Permutation::parse("2 1"));
  REQUIRE(w.has_value());
  CHECK(w->word.size() == 2);
  CHECK(w->positive());
  CHECK(w->end_perm() == Permutation::parse("2 1"));

  auto w4 = shortest_positive_window(Permutation::parse("4 3 2 1"));
  REQUIRE(w4.has_value());
  CHECK(w4->positive());
  // No shorter word is positive.
  for (std::size_t len = 1; len < w4->word.size(); ++len)
    for (unsigned bits = 0; bits < (1u << len); ++bits) {
      Window t{w4->perm, {}};
      for (std::size_t i = 0; i < len; ++i) t.word.push_back((bits >> i) & 1u ? RauzyType::type2 : RauzyType::type1);
      CHECK_FALSE(t.positive());
    }
}

TEST_CASE("window mass matches Monte Carlo frequency") {
  auto w = *shortest_positive_window(Permutation::parse("4 3 2 1"));
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  const int n = 200000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> l(4);
    for (auto& x : l) x = e(rng);
    if (w.contains(l, w.perm)) ++hits;
  }
  const double m = w.mass().get_d();
  const double freq = static_cast<double>(hits) / n;
  CHECK(std::abs(freq - m) < 4 * std::sqrt(m * (1 - m) / n) + 1e-4);
}

TEST_CASE("induced cocycle on the golden cylinder") {
  auto w = *shortest_positive_window(Permutation::parse("2 1"));
  InducedCocycle c(w);
  CHECK(c.dim() == 2);
  auto branches = c.enumerate_branches(14);
  REQUIRE(!branches.empty());
  Rational total = 0;
  for (const auto& b : branches) {
    total += b.mass;
    CHECK(b.restricted == b.matrix);
    CHECK(Window{w.perm, b.word}.positive());
    // d = 2 Rauzy matrices are the elementary Euclid matrices.
    CHECK(abs(determinant(b.matrix)) == 1);
  }
  CHECK(total < 1);
  Rational shorter = 0;
  for (const auto& b : c.enumerate_branches(10)) shorter += b.mass;
  CHECK(shorter < total);

  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    auto x = c.sample_point(rng, 256);
    CHECK(w.contains(x, w.perm));
    auto r = c.first_return(x, 500);
    REQUIRE_FALSE(r.truncated);
    CHECK(w.contains(r.lambdaAfter, w.perm));
    CHECK(Window{w.perm, r.word}.contains(x, w.perm));
  }
  CHECK_THROWS_AS(InducedCocycle(Window{Permutation::parse("2 1"), parse_word("1")}), NonPositiveWindow);
}

TEST_CASE("long genus-two returns do not end in ties") {
  auto w = *shortest_positive_window(Permutation::parse("4 3 2 1"));
  InducedCocycle c(w);
  std::mt19937_64 rng(8);
  int returned = 0;
  for (int k = 0; k < 4; ++k) {
    InducedCocycle::Return r;
    CHECK_NOTHROW(r = c.first_return(c.sample_point(rng, 512), 20000));
    if (r.truncated) continue;
    ++returned;
    CHECK(w.contains(r.lambdaAfter, w.perm));
    CHECK(r.zorichLength > 0);
  }
  CHECK(returned >= 1);
}

TEST_CASE("branch masses match sampled return frequencies") {
  auto w = *shortest_positive_window(Permutation::parse("2 1"));
  InducedCocycle c(w);
  auto branches = c.enumerate_branches(16);
  std::mt19937_64 rng(21);
  std::map<std::string, int> counts;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    auto r = c.first_return(c.sample_point(rng, 256), 1000);
    REQUIRE_FALSE(r.truncated);
    ++counts[word_string(r.word)];
  }
  int checked = 0;
  for (const auto& b : branches) {
    const double m = b.mass.get_d();
    if (m < 0.01) continue;
    const double f = static_cast<double>(counts[word_string(b.word)]) / n;
    CHECK(std::abs(f - m) < 5 * std::sqrt(m * (1 - m) / n));
    ++checked;
  }
  CHECK(checked >= 3);

  auto dist = estimate_branch_distortion(c, 12, 200, 4);
  CHECK(dist.samples == 200);
  CHECK(dist.logRatioMax <= dist.logBound + 1e-9);
}

TEST_CASE("genus two window branches") {
  auto w = *shortest_positive_window(Permutation::parse("4 3 2 1"));
  InducedCocycle c(w);
  CHECK(c.dim() == 4);
  auto branches = c.enumerate_branches(w.word.size() + 10);
  REQUIRE(!branches.empty());
  Rational total = 0;
  for (const auto& b : branches) {
    total += b.mass;
    CHECK(abs(determinant(b.restricted)) == 1);
  }
  CHECK(total < 1);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) CHECK(w.contains(w.sample(rng, 128), w.perm));
}
