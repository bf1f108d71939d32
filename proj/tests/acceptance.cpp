// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gaugelab/completeness.hpp"
#include "gaugelab/derived_gauges.hpp"
#include "gaugelab/experiment.hpp"

using namespace gaugelab;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      if (ok) detail.str("");
      ok = false;
      detail << what;
    }
  }
};

constexpr std::uint64_t kSeed = 20240607;

MeasureSpace random_space(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.log_uniform_pow2(-3, 3);
  return make_space(w);
}

Gauge power_gauge(const MeasureSpace& s, double p) {
  return make_musielak_gauge(s, MusielakOrliczFunction::shared(s.size(), OrliczFunction::power(p)));
}

std::vector<Gauge> shipped_gauges(const MeasureSpace& s) {
  const std::size_t n = s.size();
  std::vector<double> exps(n);
  for (std::size_t i = 0; i < n; ++i) exps[i] = 1.0 + 0.5 * static_cast<double>(i % 5);
  return {power_gauge(s, 0.5), power_gauge(s, 1.0), power_gauge(s, 2.0),
          make_musielak_gauge(s, MusielakOrliczFunction::shared(n, OrliczFunction::capped_power(2.0, 1.0))),
          make_musielak_gauge(s, MusielakOrliczFunction::shared(n, OrliczFunction::bounded_rational())),
          make_musielak_gauge(s, MusielakOrliczFunction::variable_exponent(exps))};
}

bool relative_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void ball_algebra(Outcome& o) {
  Rng rng(kSeed);
  std::size_t runs = 0;
  for (std::size_t n : {2, 3, 5, 8, 10}) {
    for (double p : {1.0, 0.5}) {
      const FunctionSpace X{random_space(n, rng), QuasiNormSpace::lp(2, p)};
      const double kappa = X.values.modulus();
      const AxiomReport r = verify_ball_algebra(X, kappa, 1000, rng.bits());
      for (const AxiomResult& a : r.results()) {
        o.require(a.passed(), a.name + " fails on n=" + std::to_string(n) + " p=" + std::to_string(p));
        if (a.name != "DF2") o.require(a.checks >= 1000, a.name + " ran fewer than 1000 trials");
      }
      const AxiomReport bad = verify_ball_algebra(X, kappa / 2, 1000, rng.bits());
      o.require(!bad.at("DF4").passed() && bad.at("DF4").witness.has_value(),
                "halved kappa not caught on n=" + std::to_string(n));
      ++runs;
    }
  }
  if (o.ok) o.detail << runs << " spaces x 1000 trials, halved kappa caught on all";
}

void modular_axioms(Outcome& o) {
  std::size_t gauges = 0;
  for (std::size_t n : {3, 10, 20}) {
    Rng rng(kSeed + n);
    const MeasureSpace s = random_space(n, rng);
    for (const Gauge& g : shipped_gauges(s)) {
      const AxiomReport r = verify_modular_axioms(g, {{1.0, 2.0}}, {1000, rng.bits(), 1e-9, 24});
      const std::string tag = g.name() + " on " + std::to_string(n) + " atoms";
      for (const char* name : {"monotone", "convexity-pair", "condition-CM", "vanishing-dilation", "rough-Fatou",
                               "G1", "G2", "G3"}) {
        o.require(r.at(name).passed(), std::string(name) + " fails for " + tag);
      }
      o.require(r.at("convexity-pair").constant == 1.0, "pair (1, 2) not certified for " + tag);
      o.require(std::abs(r.at("rough-Fatou").constant.value_or(0) - 1.0) <= 1e-9, "Fatou constant off for " + tag);
      o.require(r.at("condition-CM").note == "exhaustive subset enumeration", "CM not exhaustive for " + tag);
      ++gauges;
    }
  }
  if (o.ok) o.detail << gauges << " gauge/space combinations, CM exhaustive up to 20 atoms";
}

void luxemburg_oracle(Outcome& o) {
  Rng rng(kSeed + 3);
  double worst = 0;
  for (double p : {0.5, 1.0, 2.0}) {
    const MeasureSpace s = make_space({1, 1, 1, 1, 1, 1});
    const Gauge g = power_gauge(s, p);
    for (int i = 0; i < 1000; ++i) {
      const PlusFunction f = random_plus_function(6, rng);
      double sum = 0;
      for (std::size_t k = 0; k < 6; ++k) sum += std::pow(f[k].value(), p);
      const double want = std::pow(sum, 1 / p), got = luxemburg_eval(g, f).value();
      if (want > 0) worst = std::max(worst, std::abs(got - want) / want);
      o.require(relative_close(got, want, 1e-9), "p=" + std::to_string(p) + " mismatch");
    }
  }
  if (o.ok) o.detail << "3000 samples, max relative error " << worst;
}

void bar_oracle(Outcome& o) {
  Rng rng(kSeed + 4);
  const MeasureSpace s = make_space({1, 1, 1, 1, 1});
  const Gauge l1 = power_gauge(s, 1.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const PlusFunction f = random_plus_function(5, rng);
    double sum = 0;
    for (std::size_t k = 0; k < 5; ++k) sum += f[k].value();
    const double want = std::sqrt(sum), got = bar_eval(l1, f).value();
    if (want > 0) worst = std::max(worst, std::abs(got - want) / want);
    o.require(relative_close(got, want, 1e-9), "bar mismatch");
  }
  const AxiomReport r = relation_report(l1, {1000, kSeed});
  std::size_t checks = 0;
  for (const char* name : {"A.1", "A.2", "A.3", "B.1", "B.2"}) {
    o.require(r.at(name).passed(), std::string(name) + " violated");
    checks += r.at(name).checks;
  }
  if (o.ok) o.detail << "1000 samples, max relative error " << worst << "; A.1-B.2 " << checks << " probes";
}

void homogeneity(Outcome& o) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  const auto pool = standard_pool(s, kSeed);
  for (double p : {0.5, 1.0, 2.0}) {
    const Gauge g = power_gauge(s, p);
    for (int i = 0; i < 20; ++i) {
      const double t = std::pow(10.0, -3.0 + 6.0 * i / 19.0);
      const double d = delta_at(g, t, pool, false).value.value();
      o.require(relative_close(d, std::pow(t, p), 1e-6), "Delta(t) != t^p at t=" + std::to_string(t));
    }
  }
  std::size_t pairs = 0;
  for (const Gauge& g : shipped_gauges(s)) {
    std::vector<double> ts;
    for (int k = -6; k <= 6; ++k) ts.push_back(std::exp2(k));
    std::vector<double> delta;
    for (double t : ts) {
      delta.push_back(delta_at(g, t, pool).value.value());
      if (t <= 1) o.require(delta.back() <= 1.0, g.name() + ": Delta > 1 on (0, 1]");
    }
    for (std::size_t a = 0; a < ts.size(); ++a) {
      for (std::size_t b = 0; b < ts.size(); ++b) {
        const double st = ts[a] * ts[b];
        const double lhs = delta_at(g, st, pool).value.value();
        o.require(lhs <= delta[a] * delta[b] * (1 + 1e-6), g.name() + ": submultiplicativity fails");
        ++pairs;
      }
    }
  }
  if (o.ok) o.detail << "60 t-points within 1e-6, " << pairs << " submultiplicative pairs";
}

void aoki(Outcome& o) {
  for (double p : {1.0, 0.5, 0.25}) {
    const ModulusEstimate m = modulus_of_concavity(QuasiNormSpace::lp(3, p), 10000, kSeed);
    const double analytic = std::exp2(1 / p - 1);
    o.require(std::abs(m.estimate - analytic) <= 0.02 * analytic, "modulus off for p=" + std::to_string(p));
    o.require(aoki_exponent(analytic) == p, "aoki_exponent does not invert for p=" + std::to_string(p));
    o.detail << "p=" << p << ": " << m.estimate << " vs " << analytic << "  ";
  }
}

void completeness(Outcome& o) {
  const QuasiNormSpace q = QuasiNormSpace::lp(2, 0.5);
  const double kappa = q.modulus();
  o.require(is_strongly_nested(lp_sequence(q, make_schedule(kappa, 40)), 1000, kSeed).nested,
            "(2 kappa)^-n schedule rejected");
  o.require(!is_strongly_nested(lp_sequence(q, make_schedule(1.0, 40)), 1000, kSeed).nested,
            "2^-n schedule accepted");
  const AxiomReport series = series_convergence_test(lp_sequence(q, make_schedule(kappa, 40)), 100, kSeed);
  o.require(series.at("tail").passed(), "tail outside V_m");
  o.require(series.at("sum-in-V0").passed(), "sum outside V_0");
  double max_m = 0;
  for (const auto& [k, v] : series.at("tail").values) {
    if (k == "max m checked") max_m = v;
  }
  o.require(max_m >= 38, "tail checked only up to m=" + std::to_string(max_m));
  const FunctionSpace X{make_space({1, 0.5, 2, 0.25, 1, 1, 3, 0.125, 1, 0.5}), q};
  const AxiomReport l0 = l0_construction_check(X, make_schedule(kappa, 40), 100, kSeed);
  o.require(l0.passed(), "L0 construction fails");
  if (o.ok) o.detail << "tails checked for m <= " << max_m << ", 100 draws; mu(A_j) < delta_j at every j";
}

void local_basis(Outcome& o) {
  const LocalBasisOptions opts{200, 16, 60, {1, -1, 0.5, -0.5}, kSeed};
  for (double p : {1.0, 0.5}) {
    o.require(check_local_basis_axioms(lp_family(QuasiNormSpace::lp(2, p)), opts).passed(),
              "lp family fails for p=" + std::to_string(p));
  }
  const FunctionSpace X{make_space({0.5, 1, 2, 0.25}), QuasiNormSpace::lp(2, 0.5)};
  SetFamily F;
  F.members = {Subset::of(4, {0, 1}), Subset::of(4, {2, 3}), Subset::full(4)};
  o.require(check_local_basis_axioms(l0_family(X, F), opts).passed(), "L0 family fails");
  const AxiomReport iv = check_local_basis_axioms(interval_family(), opts);
  o.require(!iv.at("E.3").passed() && iv.at("E.3").witness.has_value(), "intervals pass E.3");
  o.require(!iv.at("E.5").passed() && iv.at("E.5").witness.has_value(), "intervals pass E.5");
  o.require(iv.at("E.1").passed() && iv.at("E.2").passed() && iv.at("E.4").passed(), "intervals fail E.1/E.2/E.4");
  if (o.ok) o.detail << "lp and L0 pass E.1-E.5; intervals fail E.3 and E.5 with witnesses";
}

void equivalence(Outcome& o) {
  const std::vector<double> grid = {2.0, 1.0, 0.5, 0.1, 0.01};
  {
    const FunctionSpace X{make_space({1, 1, 1, 1}), QuasiNormSpace::lp(2, 0.5)};
    const auto M = MusielakOrliczFunction::shared(4, OrliczFunction::power(1.0));
    const auto N = MusielakOrliczFunction::shared(
        4, OrliczFunction::piecewise(1.0, OrliczFunction::power(1.0), OrliczFunction::power(3.0)));
    const AxiomReport r = equivalence_near_origin(M, N, 1.0, X, {grid, 1000, kSeed});
    o.require(r.passed(), "near-origin fails");
    // eps = 2 lies above R0 and is skipped.
    o.require(r.at("inclusion").checks == 1000 * (grid.size() - 1), "near-origin sample count");
  }
  {
    const FunctionSpace X{make_space({0.5, 1, 2, 0.25, 1}), QuasiNormSpace::lp(2, 0.5)};
    const auto M = MusielakOrliczFunction::shared(5, OrliczFunction::power(2.0));
    const auto N = MusielakOrliczFunction::shared(
        5, OrliczFunction::piecewise(1.0, OrliczFunction::plateau(0.5), OrliczFunction::power(2.0)));
    const AxiomReport r = equivalence_near_infinity(M, N, 1.0, X, {grid, 1000, kSeed});
    o.require(r.passed(), "near-infinity fails");
    o.require(r.at("inclusion").checks == 1000 * grid.size(), "near-infinity sample count");
    o.require(r.at("Chebyshev").passed() && r.at("Chebyshev").checks == 1000 * grid.size(), "Chebyshev fails");
  }
  if (o.ok) o.detail << "1000 samples per eps on " << grid.size() << " eps values, zero violations";
}

void lattice(Outcome& o) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1, 0.25});
  const std::vector<double> exps = {1.0, 1.5, 2.0, 3.0, 2.5};
  const Gauge g = make_musielak_gauge(s, MusielakOrliczFunction::variable_exponent(exps));
  const LatticeEstimate cvx = lattice_convexity_constant(g, 1.0, 1000, kSeed);
  const LatticeEstimate ccv = lattice_concavity_constant(g, 3.0, 1000, kSeed);
  o.require(std::abs(cvx.constant - 1) <= 1e-9, "p-convexity constant " + std::to_string(cvx.constant));
  o.require(std::abs(ccv.constant - 1) <= 1e-9, "q-concavity constant " + std::to_string(ccv.constant));
  Rng rng(kSeed + 10);
  std::size_t samples = 0;
  for (int i = 0; i < 200; ++i) {
    const PlusFunction f = random_plus_function(5, rng);
    const double rho = g(f).value();
    const double env = convexification_envelope(g, 1.0, f, 4, LatticeKind::convex, rng.bits());
    o.require(env <= rho * (1 + 1e-12), "envelope above rho");
    o.require(rho <= cvx.constant * env * (1 + 1e-12), "rho above C * envelope");
    ++samples;
  }
  if (o.ok) {
    o.detail << "convex " << cvx.constant << ", concave " << ccv.constant << ", sandwich on " << samples
             << " samples";
  }
}

void determinism(Outcome& o) {
  const ExperimentConfig cfg = load_config(GAUGELAB_CONFIG_DIR "/default.json");
  const RunResult a = run_experiment(cfg), b = run_experiment(cfg);
  o.require(a.report.dump() == b.report.dump(), "reports differ");
  o.require(a.passed, "default configuration fails");
  if (o.ok) o.detail << "two runs of the default configuration are byte-identical";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"ball algebra", ball_algebra},        {"modular axioms", modular_axioms},
      {"Luxemburg oracle", luxemburg_oracle}, {"bar oracle and relations", bar_oracle},
      {"homogeneity function", homogeneity}, {"modulus and Aoki exponent", aoki},
      {"completeness harness", completeness}, {"local-basis axioms", local_basis},
      {"space equivalence", equivalence},    {"lattice constants and envelope", lattice},
      {"determinism", determinism}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail.str("");
      o.detail << "exception: " << e.what();
    }
    std::printf("criterion %2zu %-32s %s  %s\n", i + 1, criteria[i].first, o.ok ? "PASS" : "FAIL",
                o.detail.str().c_str());
    if (std::getenv("ACCEPTANCE_TIMING")) {
      std::printf("    %.2f s\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    failures += o.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
