// Batch front end: every run is a pure function of its command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ietlab/lattice.hpp"
#include "ietlab/parallel.hpp"
#include "ietlab/wmlab.hpp"

using namespace ietlab;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
  std::string perm;
  std::string lambda;
  std::string h;
  std::string offset;
  std::string x;
  std::string tMin = "0";
  std::string tMax = "1";
  std::size_t tSteps = 11;
  std::size_t tRandom = 0;
  std::string window;
  std::size_t visits = 200;
  std::size_t steps = 0;
  std::string delta;
  std::size_t blocks = 8;
  std::size_t blockLength = 0;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  mpfr_prec_t prec = 256;
  std::size_t cap = 10'000;
  std::size_t spectrumSteps = 100'000;
  std::size_t maxZorich = 200;
  std::string cocycle = "zorich";
  std::string mode = "rauzy";
  std::string observables;
  std::string tValues;
  bool renormalize = false;
  std::string format = "json";
  std::string out;
};

// Exit 4 is reserved for ties that leave nothing to report.
struct TieBeforeOutput : Error {
  using Error::Error;
};

int digits_for(mpfr_prec_t bits) { return static_cast<int>(static_cast<double>(bits) * 0.30103) + 1; }

std::string str(const Real& x) { return x.to_string(digits_for(x.precision())); }

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

json reals(const std::vector<Real>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(str(x));
  return a;
}

json integers(const std::vector<BigInt>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_string(z));
  return a;
}

template <class T>
json matrix(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, std::int64_t>)
        r.push_back(m(i, j));
      else
        r.push_back(to_string(m(i, j)));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

bool exact_text(const std::string& text) { return text.find('/') != std::string::npos; }

std::vector<Real> parse_reals(const std::string& text, mpfr_prec_t prec) {
  std::vector<Real> out;
  for (const auto& tok : split_list(text))
    out.push_back(exact_text(tok) ? Real(parse_rational(tok), prec) : Real::parse(tok, prec));
  return out;
}

Permutation parse_perm(const std::string& text) {
  auto p = Permutation::parse(text);
  require_irreducible(p);
  return p;
}

std::vector<Rational> ones(int d) { return std::vector<Rational>(static_cast<std::size_t>(d), Rational(1)); }

Window parse_window(const Permutation& p, const std::string& text) {
  if (text.empty()) {
    auto w = shortest_positive_window(p);
    if (!w) throw InvalidInput("no positive window within the search depth");
    return *w;
  }
  Window w{p, parse_word(text)};
  if (!w.positive()) throw NonPositiveWindow("window word " + text + " is not positive");
  return w;
}

json header(const std::string& sub, json config) {
  json j;
  j["tool"] = "ietlab";
  j["version"] = kVersion;
  config["subcommand"] = sub;
  j["config"] = std::move(config);
  return j;
}

struct Output {
  json doc;
  std::string csv;
};

// ---------------------------------------------------------------------------

Output cmd_class(const Config& c) {
  const auto p = parse_perm(c.perm);
  json cfg{{"perm", c.perm}, {"format", c.format}};
  Output o{header("class", cfg), "perm,standard,genus,nOrbits,dimH\n"};
  const auto members = rauzy_class(p);
  const auto sd = singularity_data(p);
  const auto hs = h_subspace(p);
  o.doc["size"] = members.size();
  o.doc["genus"] = sd.genus;
  o.doc["nOrbits"] = sd.nOrbits;
  o.doc["dimH"] = hs.dim;
  json list = json::array(), standard = json::array();
  for (const auto& q : members) {
    const auto sq = singularity_data(q);
    list.push_back({{"perm", q.to_string()}, {"standard", is_standard(q)}, {"genus", sq.genus}});
    if (is_standard(q)) standard.push_back(q.to_string());
    o.csv += q.to_string() + "," + (is_standard(q) ? "1" : "0") + "," + std::to_string(sq.genus) + "," +
             std::to_string(sq.nOrbits) + "," + std::to_string(h_subspace(q).dim) + "\n";
  }
  o.doc["members"] = std::move(list);
  o.doc["standard"] = std::move(standard);
  return o;
}

Output cmd_lyapunov(const Config& c) {
  const auto p = parse_perm(c.perm);
  SpectrumOptions opt;
  opt.steps = c.steps ? c.steps : 1'000'000;
  opt.seed = c.seed;
  opt.precisionBits = c.prec;
  json cfg{{"perm", c.perm}, {"steps", opt.steps}, {"seed", c.seed}, {"prec", c.prec}, {"format", c.format}};
  Output o{header("lyapunov", cfg), "index,exponent,normalized,stdErr\n"};
  const auto est = lyapunov_spectrum(p, opt);
  o.doc["classRep"] = est.classRep;
  o.doc["exponents"] = est.exponents;
  o.doc["normalized"] = est.normalized;
  o.doc["stdErr"] = est.stdErr;
  o.doc["steps"] = est.steps;
  o.doc["seed"] = est.seed;
  o.doc["restarts"] = est.restarts;
  o.doc["reorthEvery"] = est.reorthEvery;
  o.doc["batches"] = est.batches;
  std::ostringstream csv;
  csv.precision(17);
  for (std::size_t i = 0; i < est.exponents.size(); ++i)
    csv << i + 1 << "," << est.exponents[i] << "," << est.normalized[i] << "," << est.stdErr[i] << "\n";
  o.csv += csv.str();
  return o;
}

Output cmd_scan(const Config& c) {
  const auto p = parse_perm(c.perm);
  const auto d = p.size();
  const std::vector<Rational> h = c.h.empty() ? ones(d) : parse_rational_list(c.h);
  const Window w = parse_window(p, c.window);

  std::vector<Rational> grid;
  if (c.tRandom) {
    auto rng = task_rng(c.seed, 1);
    const BigInt scale = BigInt(1) << 32;
    for (std::size_t i = 0; i < c.tRandom; ++i) grid.push_back(ratio(BigInt(std::to_string(rng() >> 32)), scale));
  } else {
    grid = t_grid(parse_rational(c.tMin), parse_rational(c.tMax), c.tSteps);
  }
  ScanOptions opt;
  opt.maxVisits = c.visits;
  if (c.steps) opt.maxSteps = c.steps;
  opt.renormalize = c.renormalize;

  json cfg{{"perm", c.perm},     {"lambda", c.lambda.empty() ? "random" : c.lambda},
           {"h", c.h.empty() ? "1" : c.h},
           {"tMin", c.tMin},     {"tMax", c.tMax},
           {"tSteps", c.tSteps}, {"tRandom", c.tRandom},
           {"window", word_string(w.word)},
           {"visits", opt.maxVisits}, {"steps", opt.maxSteps},
           {"prec", c.prec},     {"seed", c.seed},
           {"renormalize", c.renormalize},
           {"detectVisits", opt.detectVisits}, {"eigenThreshold", opt.eigenThreshold},
           {"excludeThreshold", opt.excludeThreshold}, {"format", c.format}};
  Output o{header("scan", cfg), "t,visit,n,distance\n"};

  ScanReport rep;
  if (!c.lambda.empty() && exact_text(c.lambda)) {
    rep = veech_scan(parse_rational_list(c.lambda), p, h, grid, w, opt);
  } else {
    // The orbit stays faithful while 2 log2 ||B_n|| fits in the working
    // precision, so --prec bits of growth need about twice as many.
    const mpfr_prec_t bits = 2 * c.prec + 64;
    std::vector<Real> lambda;
    if (c.lambda.empty()) {
      auto rng = task_rng(c.seed, 0);
      lambda = random_simplex_point(rng, d, bits);
    } else {
      lambda = parse_reals(c.lambda, bits);
    }
    rep = veech_scan(lambda, p, h, grid, w, opt);
  }
  if (rep.visits == 0 && rep.truncation == "tie") throw TieBeforeOutput("tie before the first window visit");

  const auto proj = hperp_projection(p, h);
  o.doc["lambda"] = rep.lambda;
  o.doc["perm"] = rep.perm.to_string();
  o.doc["h"] = rationals(rep.h);
  o.doc["hH"] = rationals(proj.hH);
  o.doc["hPerp"] = rationals(proj.hPerp);
  o.doc["window"] = word_string(rep.window.word);
  o.doc["tGrid"] = rationals(grid);
  json visits = json::array(), summary = json::array();
  std::size_t excluded = 0, candidates = 0;
  std::ostringstream csv;
  csv.precision(17);
  for (const auto& s : rep.series) {
    json v = json::array();
    std::size_t k = 0;
    for (const auto& [n, dist] : s.visits) {
      v.push_back(json::array({n, dist}));
      csv << to_string(s.t) << "," << ++k << "," << n << "," << dist << "\n";
    }
    visits.push_back(std::move(v));
    summary.push_back({{"t", to_string(s.t)},
                       {"min", s.summary.min},
                       {"limsupEstimate", s.summary.limsupEstimate},
                       {"eigenCandidate", s.summary.eigenCandidate},
                       {"excluded", s.summary.excluded}});
    excluded += s.summary.excluded;
    candidates += s.summary.eigenCandidate;
  }
  o.doc["visits"] = std::move(visits);
  o.doc["summary"] = std::move(summary);
  o.doc["excludedCount"] = excluded;
  o.doc["eigenCandidateCount"] = candidates;
  o.doc["seed"] = c.seed;
  o.doc["steps"] = rep.steps;
  o.doc["visitCount"] = rep.visits;
  o.doc["truncation"] = rep.truncation.empty() ? json(nullptr) : json(rep.truncation);
  if (!rep.truncation.empty()) std::cerr << "warning: scan truncated (" << rep.truncation << ")\n";
  o.csv += csv.str();
  return o;
}

std::vector<Rational> default_offset(int d) {
  std::vector<Rational> v;
  for (int i = 0; i < d; ++i) v.push_back(Rational(i % 2 ? -37 : 37, 4000));
  return v;
}

Output cmd_exclude(const Config& c) {
  const auto p = parse_perm(c.perm.empty() ? "4 3 2 1" : c.perm);
  const Window w = parse_window(p, c.window);
  const auto offset = c.offset.empty() ? default_offset(p.size()) : parse_rational_list(c.offset);
  const auto direction = c.h.empty() ? ones(p.size()) : parse_rational_list(c.h);
  LineJ line(offset, direction);

  ProbeOptions opt;
  opt.delta = c.delta.empty() ? Rational(1, 20) : parse_rational(c.delta);
  opt.blocks = c.blocks;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.precisionBits = c.prec;
  opt.maxTranslates = c.cap;
  if (!(opt.delta > 0) || !(opt.delta < Rational(1, 10))) throw InvalidInput("delta must lie in (0, 1/10)");

  std::unique_ptr<CocycleModel> model;
  if (c.cocycle == "zorich")
    model = std::make_unique<ZorichCocycle>(w);
  else if (c.cocycle == "induced")
    model = std::make_unique<ReturnCocycle>(InducedCocycle(w), c.maxZorich);
  else
    throw InvalidInput("unknown cocycle '" + c.cocycle + "'");

  json rule = nullptr;
  if (c.blockLength) {
    opt.blockLength = c.blockLength;
  } else if (c.cocycle == "zorich") {
    SpectrumOptions so;
    so.steps = c.spectrumSteps;
    so.seed = c.seed;
    const auto spec = lyapunov_spectrum(p, so);
    const double theta = smallest_positive_exponent(spec);
    opt.blockLength = block_length_for(theta);
    rule = {{"theta", theta}, {"spectrumSteps", so.steps}};
  } else {
    opt.blockLength = 1;
  }

  json cfg{{"perm", p.to_string()},   {"window", word_string(w.word)},
           {"offset", rationals(offset)}, {"direction", rationals(direction)},
           {"delta", to_string(opt.delta)}, {"blocks", opt.blocks},
           {"blockLength", c.blockLength}, {"samples", opt.samples},
           {"seed", opt.seed},          {"prec", opt.precisionBits},
           {"cap", opt.maxTranslates},  {"cocycle", c.cocycle},
           {"maxZorich", c.maxZorich},  {"spectrumSteps", c.spectrumSteps},
           {"format", c.format}};
  Output o{header("exclude", cfg), "m,estimate,survivors\n"};
  const auto rep = wstable_probe(*model, line, opt);
  o.doc["cocycle"] = model->name();
  o.doc["lineNorm"] = line.norm();
  o.doc["blockLength"] = opt.blockLength;
  o.doc["blockLengthRule"] = rule;
  o.doc["estimates"] = rep.estimates;
  o.doc["survivors"] = rep.survivors;
  o.doc["samples"] = rep.samples;
  o.doc["truncated"] = rep.truncated;
  o.doc["overflowed"] = rep.overflowed;
  o.doc["maxLiveTranslates"] = rep.maxLiveTranslates;
  o.doc["precisionWarning"] = rep.precisionWarning;
  o.doc["certificates"] = rep.certificates.size();
  o.doc["certificatesPassed"] = rep.certificatesPassed;
  json certs = json::array();
  for (const auto& cert : rep.certificates)
    certs.push_back({{"sample", cert.sample}, {"steps", cert.steps}, {"s", to_string(cert.s)}, {"lastTranslate", integers(cert.translates.back())}});
  o.doc["certificateSummaries"] = std::move(certs);
  if (rep.truncated || rep.overflowed)
    std::cerr << "warning: " << rep.truncated << " truncated and " << rep.overflowed << " overflowed samples counted as survivors\n";
  if (rep.precisionWarning) std::cerr << "warning: surviving intervals approach the working precision\n";
  std::ostringstream csv;
  csv.precision(17);
  for (std::size_t m = 0; m < rep.estimates.size(); ++m) csv << m + 1 << "," << rep.estimates[m] << "," << rep.survivors[m] << "\n";
  o.csv += csv.str();
  return o;
}

Output cmd_dim(const Config& c) {
  const auto p = parse_perm(c.perm.empty() ? "4 3 2 1" : c.perm);
  const Window w = parse_window(p, c.window);
  std::vector<double> deltas;
  for (const auto& tok : split_list(c.delta.empty() ? "1/10000,1/1000,1/100,1/10" : c.delta))
    deltas.push_back(parse_rational(tok).get_d());
  const std::size_t horizon = c.steps ? c.steps : 10'000;
  if (horizon < 100) throw InvalidInput("horizon must be at least 100");

  SpectrumOptions so;
  so.steps = c.spectrumSteps;
  so.seed = c.seed;
  const auto spec = lyapunov_spectrum(p, so);
  const double lambdaHat = smallest_positive_exponent(spec);

  json cfg{{"perm", p.to_string()}, {"window", word_string(w.word)}, {"delta", c.delta.empty() ? "1/10000,1/1000,1/100,1/10" : c.delta},
           {"steps", horizon}, {"seed", c.seed}, {"spectrumSteps", so.steps}, {"format", c.format}};
  Output o{header("dim", cfg), "delta,betaDelta,dimBound\n"};
  ZorichCocycle model(w);
  const auto est = hausdorff_estimate(model, deltas, horizon, lambdaHat, c.seed);
  o.doc["cocycle"] = model.name();
  o.doc["deltas"] = est.deltas;
  o.doc["betaDelta"] = est.betaDelta;
  o.doc["dimBound"] = est.dimBound;
  o.doc["lambdaHat"] = est.lambdaHat;
  o.doc["spectrum"] = {{"exponents", spec.exponents}, {"stdErr", spec.stdErr}};
  o.doc["horizon"] = est.horizon;
  o.doc["seed"] = est.seed;
  o.doc["truncated"] = est.truncated;
  if (est.truncated) std::cerr << "warning: orbit ended after " << est.horizon << " steps\n";
  std::ostringstream csv;
  csv.precision(17);
  for (std::size_t i = 0; i < est.deltas.size(); ++i) csv << est.deltas[i] << "," << est.betaDelta[i] << "," << est.dimBound[i] << "\n";
  o.csv += csv.str();
  return o;
}

template <class T>
json vec(const std::vector<T>& v) {
  if constexpr (is_exact_v<T>)
    return rationals(v);
  else
    return reals(v);
}

template <class T>
std::string csv_vec(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    if constexpr (is_exact_v<T>)
      s += to_string(v[i]);
    else
      s += str(v[i]);
  }
  return s;
}

template <class T>
void induct_run(std::vector<T> lambda, Permutation p, const Config& c, std::size_t count, Output& o) {
  json steps = json::array();
  std::string truncation;
  ZorichOptions zo;
  zo.normalize = false;
  for (std::size_t k = 0; k < count; ++k) {
    try {
      if (c.mode == "rauzy") {
        auto s = rauzy_step(lambda, p);
        steps.push_back({{"type", static_cast<int>(s.kind)}, {"n", 1}, {"permAfter", s.permAfter.to_string()},
                         {"lambdaAfter", vec(s.lambdaAfter)}, {"matrix", matrix(s.matrix)}});
        o.csv += std::to_string(k + 1) + "," + std::to_string(static_cast<int>(s.kind)) + ",1," + s.permAfter.to_string() + "," +
                 csv_vec(s.lambdaAfter) + "\n";
        lambda = std::move(s.lambdaAfter);
        p = std::move(s.permAfter);
      } else {
        auto z = zorich_step(lambda, p, zo);
        steps.push_back({{"type", static_cast<int>(z.kind)}, {"n", z.n}, {"permAfter", z.permAfter.to_string()},
                         {"lambdaAfter", vec(z.lambdaAfter)}, {"matrix", matrix(z.matrix)}});
        o.csv += std::to_string(k + 1) + "," + std::to_string(static_cast<int>(z.kind)) + "," + std::to_string(z.n) + "," +
                 z.permAfter.to_string() + "," + csv_vec(z.lambdaAfter) + "\n";
        lambda = std::move(z.lambdaAfter);
        p = std::move(z.permAfter);
      }
    } catch (const HaltOnTie&) {
      if (k == 0) throw TieBeforeOutput("tie at the first step");
      truncation = "tie";
      break;
    }
  }
  o.doc["steps"] = std::move(steps);
  o.doc["truncation"] = truncation.empty() ? json(nullptr) : json(truncation);
  if (!truncation.empty()) std::cerr << "warning: induction halted on a tie\n";
}

Output cmd_induct(const Config& c) {
  const auto p = parse_perm(c.perm);
  if (c.mode != "rauzy" && c.mode != "zorich") throw InvalidInput("mode must be rauzy or zorich");
  const std::size_t count = c.steps ? c.steps : 1;
  const bool exact = exact_text(c.lambda);
  json cfg{{"perm", c.perm}, {"lambda", c.lambda}, {"mode", c.mode}, {"steps", count}, {"prec", c.prec}, {"format", c.format}};
  Output o{header("induct", cfg), "step,type,n,perm,lambda\n"};
  o.doc["exact"] = exact;
  if (exact) {
    const auto lambda = parse_rational_list(c.lambda);
    o.doc["lambda"] = rationals(lambda);
    induct_run(lambda, p, c, count, o);
  } else {
    PrecisionScope scope(c.prec);
    const auto lambda = parse_reals(c.lambda, c.prec);
    o.doc["lambda"] = reals(lambda);
    induct_run(lambda, p, c, count, o);
  }
  return o;
}

template <class T>
void orbit_run(const Iet<T>& f, const T& x, const Config& c, std::size_t count, Output& o) {
  const auto orb = orbit(f, x, count);
  json pts = json::array();
  for (std::size_t k = 0; k < orb.points.size(); ++k) {
    std::string s;
    if constexpr (is_exact_v<T>)
      s = to_string(orb.points[k]);
    else
      s = str(orb.points[k]);
    pts.push_back(s);
    o.csv += std::to_string(k) + "," + std::to_string(orb.itinerary[k]) + "," + s + "\n";
  }
  o.doc["points"] = std::move(pts);
  o.doc["itinerary"] = orb.itinerary;
  json twisted = json::array();
  if (!c.observables.empty()) {
    for (const auto& id : split_list(c.observables)) {
      const auto g = Observable::parse(id);
      for (const auto& t : split_list(c.tValues.empty() ? "0" : c.tValues)) {
        const double tv = parse_rational(t).get_d();
        twisted.push_back({{"observable", g.id()}, {"t", t}, {"value", twisted_average(f, g, tv, x, count)}});
      }
    }
  }
  o.doc["twisted"] = std::move(twisted);
}

Output cmd_orbit(const Config& c) {
  const auto p = parse_perm(c.perm);
  const std::size_t count = c.steps ? c.steps : 10;
  const bool exact = exact_text(c.lambda) || exact_text(c.x);
  json cfg{{"perm", c.perm},   {"lambda", c.lambda}, {"x", c.x.empty() ? "0" : c.x}, {"steps", count},
           {"prec", c.prec},   {"observables", c.observables}, {"t", c.tValues}, {"format", c.format}};
  Output o{header("orbit", cfg), "k,interval,point\n"};
  o.doc["exact"] = exact;
  if (exact) {
    Iet<Rational> f(parse_rational_list(c.lambda), p);
    orbit_run(f, parse_rational(c.x.empty() ? "0" : c.x), c, count, o);
  } else {
    PrecisionScope scope(c.prec);
    Iet<Real> f(parse_reals(c.lambda, c.prec), p);
    orbit_run(f, parse_reals(c.x.empty() ? "0" : c.x, c.prec).at(0), c, count, o);
  }
  return o;
}

void emit(const Output& o, const Config& c) {
  const std::string text = c.format == "csv" ? o.csv : o.doc.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + c.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval exchange renormalization lab"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", c.out, "output file (default stdout)");
  };

  auto* cls = app.add_subcommand("class", "Rauzy class listing");
  cls->add_option("--perm", c.perm, "permutation, e.g. \"4 3 2 1\"")->required();
  common(cls);

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum of the Zorich cocycle");
  lyap->add_option("--perm", c.perm)->required();
  lyap->add_option("--steps", c.steps, "Zorich steps (default 1000000)");
  lyap->add_option("--seed", c.seed);
  lyap->add_option("--prec", c.prec, "bits");
  common(lyap);

  auto* scan = app.add_subcommand("scan", "Veech criterion scan");
  scan->add_option("--perm", c.perm)->required();
  scan->add_option("--lambda", c.lambda, "lengths; random from --seed when omitted");
  scan->add_option("--h", c.h, "heights (default all ones)");
  scan->add_option("--t-min", c.tMin);
  scan->add_option("--t-max", c.tMax);
  scan->add_option("--t-steps", c.tSteps);
  scan->add_option("--t-random", c.tRandom, "use this many uniform random t in [0,1) instead of the grid");
  scan->add_option("--window", c.window, "Rauzy word (default: shortest positive)");
  scan->add_option("--visits", c.visits);
  scan->add_option("--steps", c.steps, "Rauzy step cap (default 1000000)");
  scan->add_option("--prec", c.prec);
  scan->add_option("--seed", c.seed);
  scan->add_flag("--renormalize", c.renormalize, "follow the renormalized pseudo-orbit");
  common(scan);

  auto* excl = app.add_subcommand("exclude", "weak-stable exclusion probe");
  excl->add_option("--perm", c.perm, "default \"4 3 2 1\"");
  excl->add_option("--window", c.window);
  excl->add_option("--offset", c.offset, "line offset (default 37/4000 * (1,-1,...))");
  excl->add_option("--h", c.h, "line direction (default all ones)");
  excl->add_option("--delta", c.delta, "default 1/20");
  excl->add_option("--blocks", c.blocks);
  excl->add_option("--block-len", c.blockLength, "cocycle steps per block; 0 derives it from the spectrum");
  excl->add_option("--samples", c.samples);
  excl->add_option("--seed", c.seed);
  auto* exclPrec = excl->add_option("--prec", c.prec, "bits (default 512)");
  excl->add_option("--cap", c.cap, "live translate cap per sample");
  excl->add_option("--cocycle", c.cocycle)->check(CLI::IsMember({"zorich", "induced"}));
  excl->add_option("--max-zorich", c.maxZorich, "return length cap of the induced cocycle");
  excl->add_option("--spectrum-steps", c.spectrumSteps);
  common(excl);

  auto* dim = app.add_subcommand("dim", "Hausdorff dimension estimator");
  dim->add_option("--perm", c.perm, "default \"4 3 2 1\"");
  dim->add_option("--window", c.window);
  dim->add_option("--delta", c.delta, "comma-separated deltas");
  dim->add_option("--steps", c.steps, "orbit horizon (default 10000)");
  dim->add_option("--seed", c.seed);
  dim->add_option("--spectrum-steps", c.spectrumSteps);
  common(dim);

  auto* ind = app.add_subcommand("induct", "dump Rauzy or Zorich steps");
  ind->add_option("--perm", c.perm)->required();
  ind->add_option("--lambda", c.lambda)->required();
  ind->add_option("--mode", c.mode)->check(CLI::IsMember({"rauzy", "zorich"}));
  ind->add_option("--steps", c.steps);
  ind->add_option("--prec", c.prec);
  common(ind);

  auto* orb = app.add_subcommand("orbit", "orbit of a point and twisted averages");
  orb->add_option("--perm", c.perm)->required();
  orb->add_option("--lambda", c.lambda)->required();
  orb->add_option("--x", c.x);
  orb->add_option("--steps", c.steps);
  orb->add_option("--prec", c.prec);
  orb->add_option("--observable", c.observables, "exp:k or ind:i, comma-separated");
  orb->add_option("--t", c.tValues, "comma-separated frequencies");
  common(orb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*excl && exclPrec->count() == 0) c.prec = 512;
  try {
    Output o;
    if (*cls)
      o = cmd_class(c);
    else if (*lyap)
      o = cmd_lyapunov(c);
    else if (*scan)
      o = cmd_scan(c);
    else if (*excl)
      o = cmd_exclude(c);
    else if (*dim)
      o = cmd_dim(c);
    else if (*ind)
      o = cmd_induct(c);
    else
      o = cmd_orbit(c);
    emit(o, c);
  } catch (const TieBeforeOutput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const HaltOnTie& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionLoss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DivergenceGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
