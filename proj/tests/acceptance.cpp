// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance CLI_BINARY SCHEMA_DIR CHECK_SCRIPT PYTHON

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "ietlab/lattice.hpp"
#include "ietlab/parallel.hpp"
#include "ietlab/wmlab.hpp"

using namespace ietlab;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

Permutation random_irreducible(std::mt19937_64& rng, int d) {
  static std::map<int, std::vector<Permutation>> cache;
  auto& all = cache[d];
  if (all.empty()) all = irreducible_permutations(d);
  return all[rng() % all.size()];
}

BigInt random_bits(std::mt19937_64& rng, int bits) {
  BigInt z = 0;
  for (int k = 0; k < bits; k += 64) z = (z << 64) + BigInt(std::to_string(rng()));
  return z;
}

// 1. Rauzy-step formulas against the orbit-counting oracle.
Result oracle_equivalence() {
  std::mt19937_64 rng(101);
  int equal = 0, cases = 0;
  while (cases < 200) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const auto p = random_irreducible(rng, d);
    std::vector<Rational> l;
    const Rational den(static_cast<long>(rng() % 100000 + 1));
    for (int i = 0; i < d; ++i) l.push_back(Rational(static_cast<long>(rng() % 1000000 + 1)) / den);
    IntMatrix formula, oracle;
    try {
      formula = rauzy_step(l, p).matrix;
      oracle = visitation_matrix_oracle(l, p);
    } catch (const HaltOnTie&) {
      continue;
    }
    ++cases;
    equal += formula == oracle;
  }
  return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) + " step matrices equal the oracle"};
}

// 2. lambda = B^T lambda' and <lambda, w> = <lambda_n, B_n w> along long paths.
Result exact_identities() {
  std::mt19937_64 rng(202);
  const std::size_t steps = 10'000;
  std::size_t checked = 0;
  for (int d = 2; d <= 6; ++d) {
    const auto p0 = random_irreducible(rng, d);
    const BigInt den = random_bits(rng, 64) | 1;
    std::vector<Rational> l0;
    for (int i = 0; i < d; ++i) l0.push_back(ratio(random_bits(rng, 40000) + 1, den));
    std::vector<Rational> perp(static_cast<std::size_t>(d), Rational(0)), w(static_cast<std::size_t>(d));
    perp[0] = l0[1];
    perp[1] = -l0[0];
    for (auto& x : w) x = Rational(static_cast<long>(rng() % 2001) - 1000);
    const Rational lw = dot(l0, w);
    if (lw == 0) return {false, "degenerate test vector"};

    std::vector<Rational> l = l0, bPerp = perp, bw = w;
    Permutation p = p0;
    BigMatrix b = BigMatrix::identity(static_cast<std::size_t>(d));
    for (std::size_t n = 0; n < steps; ++n) {
      const Permutation before = p;
      RauzyType t;
      try {
        t = rauzy_advance(l, p);
      } catch (const HaltOnTie&) {
        return {false, "tie after " + std::to_string(n) + " steps at d=" + std::to_string(d)};
      }
      const BigMatrix m = to_big(rauzy_matrix(before, t));
      b = m * b;
      bPerp = m.apply(bPerp);
      bw = m.apply(bw);
      if (b.apply_transpose(l) != l0) return {false, "lambda != B^T lambda' at step " + std::to_string(n + 1)};
      if (dot(l, bPerp) != 0) return {false, "orthogonal vector not preserved at step " + std::to_string(n + 1)};
      if (dot(l, bw) != lw) return {false, "pairing changed at step " + std::to_string(n + 1)};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " Rauzy steps on 5 paths (d=2..6), all identities exact"};
}

// 3. Combinatorial invariants for every irreducible permutation with d <= 7.
Result combinatorial_invariants() {
  std::size_t perms = 0, edges = 0, classes = 0;
  for (int d = 2; d <= 7; ++d) {
    const auto all = irreducible_permutations(d);
    std::map<Permutation, int> classOf;
    std::map<Permutation, HSubspace> hs;
    auto h = [&](const Permutation& q) -> const HSubspace& {
      auto it = hs.find(q);
      if (it == hs.end()) it = hs.emplace(q, h_subspace(q)).first;
      return it->second;
    };
    for (const auto& p : all) {
      ++perms;
      const auto s = singularity_data(p);
      const auto& hp = h(p);
      if (hp.dim != d - s.nOrbits + 1 || hp.dim % 2 != 0) return {false, "dim H fails at " + p.to_string()};
      int excess = 0;
      for (int nu : s.coneOrders) excess += nu - 1;
      if (excess != 2 * s.genus - 2) return {false, "cone orders fail at " + p.to_string()};
      if (classOf.count(p)) continue;
      const int id = classes++;
      bool standard = false;
      for (const auto& q : rauzy_class(p)) {
        if (classOf.count(q)) return {false, "classes overlap at " + q.to_string()};
        classOf[q] = id;
        standard = standard || is_standard(q);
        for (RauzyType t : {RauzyType::type1, RauzyType::type2}) {
          const auto next = rauzy_successor(q, t);
          const BigMatrix image = to_big(rauzy_matrix(q, t)) * h(q).latticeBasis;
          if (!same_lattice(image.transpose(), h(next).latticeBasis.transpose()))
            return {false, "lattice not preserved on edge from " + q.to_string()};
          ++edges;
        }
      }
      if (!standard) return {false, "class of " + p.to_string() + " has no standard member"};
    }
    if (classOf.size() != all.size()) return {false, "classes do not cover d=" + std::to_string(d)};
  }
  return {true, std::to_string(perms) + " permutations, " + std::to_string(classes) + " classes, " + std::to_string(edges) +
                    " diagram edges preserve the lattice"};
}

// 4. Nogueira-Rudolph vectors span H for standard permutations.
Result nr_span() {
  std::size_t count = 0;
  for (int d = 2; d <= 7; ++d)
    for (const auto& p : irreducible_permutations(d)) {
      if (!is_standard(p)) continue;
      const auto hs = h_subspace(p);
      const auto v = nr_vectors(p);
      BigMatrix m(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        std::vector<Rational> row;
        for (int j = 0; j < d; ++j) {
          m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          row.push_back(Rational(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
        }
        if (!hs.contains(row)) return {false, "v outside H for " + p.to_string()};
      }
      if (static_cast<int>(rational_rank(m)) != hs.dim) return {false, "rank deficit for " + p.to_string()};
      ++count;
    }
  return {true, std::to_string(count) + " standard permutations, span = H(pi) in each"};
}

// 5. Lyapunov spectrum of the (4 3 2 1) class.
Result lyapunov(const SpectrumEstimate& a, const SpectrumEstimate& b, double seconds) {
  const auto& t = a.exponents;
  const auto& e = a.stdErr;
  if (t.size() != 4) return {false, "expected 4 exponents"};
  const bool ordered = t[0] - 3 * e[0] > t[1] + 3 * e[1] && t[1] - 3 * e[1] > 0 && t[2] + 3 * e[2] < 0 &&
                       t[2] - 3 * e[2] > t[3] + 3 * e[3];
  const double sym1 = std::abs(t[0] + t[3]) / t[0], sym2 = std::abs(t[1] + t[2]) / t[0];
  auto nu = [](const SpectrumEstimate& s) { return s.exponents[1] / s.exponents[0]; };
  auto nuErr = [&](const SpectrumEstimate& s) {
    return nu(s) * std::hypot(s.stdErr[1] / s.exponents[1], s.stdErr[0] / s.exponents[0]);
  };
  const double diff = std::abs(nu(a) - nu(b)), combined = std::hypot(nuErr(a), nuErr(b));
  const bool pass = ordered && sym1 < 0.05 && sym2 < 0.05 && diff < 3 * combined && seconds < 600;
  return {pass, "theta = (" + fmt(t[0]) + ", " + fmt(t[1]) + ", " + fmt(t[2]) + ", " + fmt(t[3]) + "), ordered=" +
                    (ordered ? "yes" : "no") + ", symmetry " + fmt(std::max(sym1, sym2), 2) + ", nu2 " + fmt(nu(a)) + " vs " +
                    fmt(nu(b)) + " (|diff| " + fmt(diff, 2) + " < 3*" + fmt(combined, 2) + "), " + fmt(seconds, 3) + " s"};
}

// 6. Veech scan controls on the golden rotation.
Result veech_controls() {
  const auto p = Permutation::parse("2 1");
  const auto w = *shortest_positive_window(p);
  PrecisionScope scope(512);
  const Real phi = (Real(1, 512) + sqrt(Real(5, 512))) / 2;
  const std::vector<Real> lambda{Real(1, 512) / (phi * phi), Real(1, 512) / phi};
  ScanOptions opt;
  opt.maxVisits = 30;
  const Rational tGold = parse_rational("0.6180339887498948482045868343656381177203");
  auto pos = veech_scan(lambda, p, {1, 1}, {tGold}, w, opt);
  const double minGold = pos.series[0].summary.min;

  std::mt19937_64 rng(606);
  std::vector<Rational> ts;
  for (int i = 0; i < 100; ++i) ts.push_back(ratio(BigInt(std::to_string(rng() >> 32)), BigInt(1) << 32));
  auto neg = veech_scan(lambda, p, {1, 1}, ts, w, opt);
  int excluded = 0;
  for (const auto& s : neg.series) excluded += s.summary.limsupEstimate > 0.1;
  const bool pass = pos.visits == 30 && minGold < 1e-3 && neg.visits == 30 && excluded >= 95;
  return {pass, "t=1/phi min distance " + fmt(minGold, 3) + " in " + std::to_string(pos.visits) + " visits; " +
                    std::to_string(excluded) + "/100 random t with tail max > 0.1"};
}

// 7. Exclusion probe on the genus-two cocycle.
Result exclusion(double theta2) {
  const auto p = Permutation::parse("4 3 2 1");
  const auto window = *shortest_positive_window(p);
  ZorichCocycle model(window);
  const Rational o(37, 4000);
  LineJ j({o, -o, o, -o}, {1, 1, 1, 1});
  ProbeOptions opt;
  opt.delta = Rational(1, 20);
  opt.blockLength = block_length_for(theta2);
  opt.blocks = 8;
  opt.samples = 1000;
  opt.seed = 1;
  const auto rep = wstable_probe(model, j, opt);

  bool monotone = true;
  for (std::size_t m = 1; m < rep.estimates.size(); ++m) monotone = monotone && rep.estimates[m] <= rep.estimates[m - 1];
  const std::size_t open = rep.truncated + rep.overflowed;
  const bool certified = rep.certificates.size() + open == rep.survivors[0] && rep.certificatesPassed == rep.certificates.size();

  // phi bounds on the enumerated return branches and on the block matrices.
  std::vector<BigMatrix> mats;
  InducedCocycle induced(window);
  for (const auto& b : induced.enumerate_branches(24)) mats.push_back(b.restricted);
  const std::size_t branchCount = mats.size();
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = task_rng(99, s);
    auto orbit = model.start(rng);
    BigMatrix a = BigMatrix::identity(4);
    for (std::size_t k = 1; k <= opt.blocks * opt.blockLength; ++k) {
      auto m = orbit->next();
      if (!m) break;
      a = *m * a;
      if (k % opt.blockLength == 0) {
        mats.push_back(a);
        a = BigMatrix::identity(4);
      }
    }
  }
  std::size_t phiOk = 0, translates = 0;
  for (const auto& a : mats) {
    const auto phi = phi_delta_count(a, j, opt.delta);
    bool ok = static_cast<double>(phi.count) <= phi.norm0;
    for (double n : phi.lineNorms) ok = ok && n >= (1 - 2 * 0.05) / phi.norm0 - 1e-9;
    phiOk += ok;
    translates += phi.count;
  }
  const bool pass = monotone && rep.estimates.back() < 0.05 && certified && phiOk == mats.size();
  std::string est;
  for (double e : rep.estimates) est += (est.empty() ? "" : " ") + fmt(e, 3);
  return {pass, "zorich cocycle from the positive window, N=" + std::to_string(opt.blockLength) + ", estimates [" + est + "], " + std::to_string(rep.certificatesPassed) + "/" +
                    std::to_string(rep.certificates.size()) + " certificates replayed, " + std::to_string(open) +
                    " open samples; phi bounds hold on " + std::to_string(phiOk) + "/" + std::to_string(mats.size()) + " matrices (" +
                    std::to_string(branchCount) + " enumerated branches, " + std::to_string(translates) + " translates)"};
}

// 8. Covering estimator.
Result hausdorff(double lambdaHat) {
  ZorichCocycle model(*shortest_positive_window(Permutation::parse("4 3 2 1")));
  const auto est = hausdorff_estimate(model, {1e-4, 1e-3, 1e-2, 1e-1}, 10'000, lambdaHat, 1);
  bool monotone = true;
  for (std::size_t i = 1; i < est.betaDelta.size(); ++i) monotone = monotone && est.betaDelta[i] >= est.betaDelta[i - 1];
  const bool pass = monotone && !est.truncated && est.dimBound[1] < 0.5;
  return {pass, "beta = [" + fmt(est.betaDelta[0], 3) + " " + fmt(est.betaDelta[1], 3) + " " + fmt(est.betaDelta[2], 3) + " " +
                    fmt(est.betaDelta[3], 3) + "], dimBound(1e-3) = " + fmt(est.dimBound[1], 3) + ", lambdaHat " + fmt(lambdaHat)};
}

// 9. Every subcommand twice, byte-compared and schema-validated.
Result determinism(const std::string& cli, const std::string& schemas, const std::string& script, const std::string& python) {
  const std::vector<std::string> runs{
      "class --perm '4 3 2 1'",
      "lyapunov --perm '4 3 2 1' --steps 20000",
      "scan --perm '2 1' --t-steps 7 --visits 20",
      "scan --perm '3 2 1' --lambda '1/3,1/5,1/7' --h 1,2,3 --t-random 5",
      "exclude --samples 100",
      "dim --steps 1000",
      "induct --perm '4 3 2 1' --lambda 0.1,0.2,0.3,0.4 --mode zorich --steps 5",
      "orbit --perm '3 2 1' --lambda 1/2,1/3,1/6 --x 1/10 --steps 30 --observable exp:1,ind:2 --t 0,1/4",
  };
  std::size_t ok = 0;
  std::string failed;
  for (const auto& r : runs) {
    std::string expect = r.rfind("scan --perm '3 2 1'", 0) == 0 ? "--exit 4 " : "";
    for (const char* fmtName : {"json", "csv"}) {
      if (!expect.empty() && std::string(fmtName) == "csv") continue;
      const std::string cmd = python + " " + script + " --bin " + cli + " --schemas " + schemas + " --format " + fmtName + " " +
                              expect + "-- " + r + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) == 0)
        ++ok;
      else
        failed += " [" + r + " " + fmtName + "]";
    }
  }
  return {failed.empty(), std::to_string(ok) + " runs reproducible and schema-valid" + (failed.empty() ? "" : "; failed:" + failed)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: acceptance CLI_BINARY SCHEMA_DIR CHECK_SCRIPT PYTHON\n";
    return 2;
  }
  int failures = 0;
  auto report = [&](int n, const char* name, const std::function<Result()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = f();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !r.pass;
    std::cout << "criterion " << n << " " << (r.pass ? "PASS" : "FAIL") << " " << name << ": " << r.detail << " [" << fmt(s, 3)
              << " s]" << std::endl;
  };

  report(1, "oracle equivalence", [] {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = oracle_equivalence();
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > 60) r = {false, r.detail + " (over 1 min)"};
    return r;
  });
  report(2, "exact identities", exact_identities);
  report(3, "combinatorial invariants", combinatorial_invariants);
  report(4, "Nogueira-Rudolph span", nr_span);

  SpectrumEstimate s1, s2;
  report(5, "Lyapunov spectrum", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    auto run = [](std::uint64_t seed, SpectrumEstimate& out) {
      SpectrumOptions opt;
      opt.steps = 1'000'000;
      opt.seed = seed;
      opt.precisionBits = 256;
      out = lyapunov_spectrum(Permutation::parse("4 3 2 1"), opt);
    };
    std::thread other(run, 2, std::ref(s2));
    run(1, s1);
    other.join();
    return lyapunov(s1, s2, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  });
  const double theta2 = s1.exponents.size() == 4 ? smallest_positive_exponent(s1) : 0.0;

  report(6, "Veech scan controls", veech_controls);
  report(7, "exclusion probe", [&] { return exclusion(theta2); });
  report(8, "dimension estimator", [&] { return hausdorff(theta2); });
  report(9, "CLI determinism", [&] { return determinism(argv[1], argv[2], argv[3], argv[4]); });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failures ? 1 : 0;
}
