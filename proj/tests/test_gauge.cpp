#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gaugelab/derived_gauges.hpp"
#include "gaugelab/gauge.hpp"
#include "gaugelab/musielak_orlicz.hpp"

using namespace gaugelab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUlp = std::numeric_limits<double>::epsilon();

Gauge power_gauge(const MeasureSpace& s, double p) {
  return make_musielak_gauge(s, MusielakOrliczFunction::shared(s.size(), OrliczFunction::power(p)));
}

/// (sum w f^q)^(1/q), homogeneous.
Gauge lq_norm_gauge(const MeasureSpace& s, double q) {
  GaugeTraits traits;
  traits.homogeneous = true;
  return Gauge("lq", s,
               [s, q](const PlusFunction& f) {
                 return ExtReal(std::pow(integrate(s, f.pow(q)).value(), 1.0 / q));
               },
               traits);
}

std::vector<Gauge> shipped_gauges(const MeasureSpace& s) {
  const std::size_t n = s.size();
  std::vector<double> exps(n);
  for (std::size_t i = 0; i < n; ++i) exps[i] = 1.0 + static_cast<double>(i % 3) * 0.5;
  return {power_gauge(s, 0.5), power_gauge(s, 1.0), power_gauge(s, 2.0),
          make_musielak_gauge(s, MusielakOrliczFunction::shared(n, OrliczFunction::capped_power(2.0, 1.0)), "capped"),
          make_musielak_gauge(s, MusielakOrliczFunction::shared(n, OrliczFunction::bounded_rational()), "rational"),
          make_musielak_gauge(s, MusielakOrliczFunction::variable_exponent(exps), "varexp")};
}

PlusFunction unflat(const std::vector<double>& v) { return PlusFunction::from(v); }

}  // namespace

TEST(EvalGauge, Examples) {
  const MeasureSpace s2 = make_space({1, 1});
  EXPECT_EQ(eval_gauge(power_gauge(s2, 2.0), PlusFunction{3, 4}).value(), 25.0);
  const MeasureSpace s3 = make_space({1, 1, 1});
  EXPECT_EQ(eval_gauge(power_gauge(s3, 1.0), PlusFunction{1, 2, 3}).value(), 6.0);
  for (const Gauge& g : shipped_gauges(s3)) EXPECT_TRUE(eval_gauge(g, PlusFunction(3)).is_zero()) << g.name();
  EXPECT_THROW(eval_gauge(power_gauge(s3, 1.0), PlusFunction{1, 2}), std::invalid_argument);
  EXPECT_TRUE(eval_gauge(power_gauge(s3, 1.0), PlusFunction{kInf, 0, 0}).is_infinite());
}

TEST(DeltaAt, PowerModularClosedFormAndEstimate) {
  const MeasureSpace s = make_space({1, 1, 1});
  const Gauge g = power_gauge(s, 0.5);
  const auto pool = standard_pool(s, 3);
  EXPECT_EQ(delta_at(g, 4.0, pool).value.value(), 2.0);
  const DeltaEstimate est = delta_at(g, 4.0, pool, false);
  EXPECT_FALSE(est.closed_form);
  EXPECT_NEAR(est.value.value(), 2.0, 2.0 * 1e-12);
  for (const Gauge& gg : shipped_gauges(s)) {
    EXPECT_NEAR(delta_at(gg, 1.0, pool, false).value.value(), 1.0, 1e-15) << gg.name();
  }
}

TEST(DeltaAt, HomogeneousGaugeGivesIdentity) {
  const MeasureSpace s = make_space({0.5, 1, 2});
  const Gauge g = lq_norm_gauge(s, 3.0);
  const auto pool = standard_pool(s, 4);
  for (double t : {0.125, 0.3, 1.0, 2.5, 16.0}) {
    EXPECT_NEAR(delta_at(g, t, pool, false).value.value(), t, t * 1e-12);
  }
}

TEST(DeltaAt, MatchesPowerLawOnLogGrid) {
  const MeasureSpace s = make_space({1, 2, 0.5, 1});
  const auto pool = standard_pool(s, 5);
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const Gauge g = power_gauge(s, p);
    for (int k = 0; k < 20; ++k) {
      const double t = std::pow(10.0, -3.0 + 6.0 * k / 19.0);
      const double d = delta_at(g, t, pool, false).value.value();
      EXPECT_NEAR(d, std::pow(t, p), 1e-6 * std::pow(t, p)) << "p=" << p << " t=" << t;
    }
  }
}

TEST(DeltaAt, EmptyAdmissiblePoolThrows) {
  const MeasureSpace s = make_space({1, 1});
  const Gauge g = power_gauge(s, 1.0);
  EXPECT_THROW(delta_at(g, 2.0, {PlusFunction(2)}, false), std::runtime_error);
}

TEST(ClassifyHomogeneity, PowerModular) {
  const MeasureSpace s = make_space({1, 1, 1});
  for (double p : {0.5, 1.0, 2.0}) {
    const Gauge g = power_gauge(s, p);
    const HomogeneityProfile h = classify_homogeneity(g, {0.125, 0.5, 2.0, 8.0}, standard_pool(s, 1), false);
    EXPECT_TRUE(h.pseudo_origin);
    EXPECT_TRUE(h.pseudo_infinity);
    for (const auto& [t, d] : h.delta) EXPECT_NEAR(d.value(), std::pow(t, p), 1e-9 * std::pow(t, p));
  }
}

TEST(ClassifyHomogeneity, CappedModularMatchesBruteForce) {
  const MeasureSpace s = make_space({1, 1, 1});
  const Gauge g = make_musielak_gauge(s, MusielakOrliczFunction::shared(3, OrliczFunction::capped_power(1.0, 1.0)));
  // Brute-force sup over c chi_E on a fine log grid of c.
  auto brute = [&](double t) {
    double best = 0.0;
    for (std::uint64_t m = 1; m < 8; ++m) {
      for (int k = -400; k <= 400; ++k) {
        const PlusFunction f = PlusFunction::indicator(Subset::from_mask(3, m), std::ldexp(1.0, k / 8) * std::exp2((k % 8) / 8.0));
        best = std::max(best, g(f.scaled(t)).value() / g(f).value());
      }
    }
    return best;
  };
  const HomogeneityProfile h = classify_homogeneity(g, {0.01, 0.25, 0.5, 2.0, 8.0}, standard_pool(s, 1));
  EXPECT_FALSE(h.pseudo_origin);
  for (const auto& [t, d] : h.delta) {
    EXPECT_NEAR(d.value(), brute(t), 1e-12) << "t=" << t;
    EXPECT_NEAR(d.value(), std::max(t, 1.0), 1e-12) << "t=" << t;
  }
}

TEST(HomogeneityProperty, DeltaAtMostOneBelowOne) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  const auto pool = standard_pool(s, 6);
  for (const Gauge& g : shipped_gauges(s)) {
    for (int k = 1; k <= 20; ++k) {
      const double t = std::pow(2.0, -k / 2.0);
      EXPECT_LE(delta_at(g, t, pool, false).value, ExtReal(1.0)) << g.name() << " t=" << t;
    }
  }
}

TEST(HomogeneityProperty, Submultiplicative) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  const auto pool = standard_pool(s, 7);
  Rng rng(8);
  for (const Gauge& g : shipped_gauges(s)) {
    for (int trial = 0; trial < 40; ++trial) {
      const double a = rng.log_uniform_pow2(-6, 6) * rng.uniform(1.0, 2.0);
      const double b = rng.log_uniform_pow2(-6, 6) * rng.uniform(1.0, 2.0);
      const ExtReal dab = delta_at(g, a * b, pool, false).value;
      const ExtReal prod = delta_at(g, a, pool, false).value * delta_at(g, b, pool, false).value;
      if (prod.is_infinite()) continue;
      ASSERT_LE(dab.value(), prod.value() * (1 + 1e-6)) << g.name() << " s=" << a << " t=" << b;
    }
  }
}

TEST(HomogeneityProperty, HomogeneousGaugesScaleExactly) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  const Gauge g = power_gauge(s, 1.0);
  ASSERT_TRUE(g.traits().homogeneous);
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const PlusFunction f = random_plus_function(4, rng);
    const double t = rng.log_uniform_pow2(-10, 10) * rng.uniform(1.0, 2.0);
    const double lhs = g(f.scaled(t)).value();
    const double rhs = t * g(f).value();
    ASSERT_LE(std::abs(lhs - rhs), 4 * kUlp * std::max(lhs, rhs));
  }
}

TEST(VerifyModularAxioms, SquareModular) {
  const MeasureSpace s = make_space({0.5, 0.5});
  const Gauge g = power_gauge(s, 2.0);
  const AxiomReport r = verify_modular_axioms(g, {{1.0, 2.0}});
  EXPECT_TRUE(r.passed());
  for (const char* name : {"monotone", "convexity-pair", "condition-CM", "vanishing-dilation", "rough-Fatou", "G1",
                           "G2", "G3"}) {
    EXPECT_TRUE(r.contains(name)) << name;
  }
  EXPECT_EQ(r.at("convexity-pair").constant.value(), 1.0);
  EXPECT_NEAR(r.at("rough-Fatou").constant.value(), 1.0, 1e-9);
}

TEST(VerifyModularAxioms, ConditionCMCertificateByEnumeration) {
  const MeasureSpace s = make_space({0.5, 0.5});
  const Gauge g = power_gauge(s, 2.0);
  const AxiomReport r = verify_modular_axioms(g, {{1.0, 2.0}});
  double u = 0.0;
  for (const auto& [k, v] : r.at("condition-CM").values) {
    if (k == "u_E{0,1}") u = v;
  }
  ASSERT_EQ(u, 1.0);
  // eps = 0.4, delta = 0.25: only A = {} has rho(chi_A) <= 0.25.
  for (std::uint64_t m = 0; m < 4; ++m) {
    const Subset A = Subset::from_mask(2, m);
    if (g(PlusFunction::indicator(A, u)) <= ExtReal(0.25)) EXPECT_TRUE(A.empty());
  }
}

TEST(VerifyModularAxioms, ShippedGaugesPass) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1, 0.25});
  for (const Gauge& g : shipped_gauges(s)) {
    const AxiomReport r = verify_modular_axioms(g, {{1.0, 2.0}}, {500, 11});
    EXPECT_TRUE(r.passed()) << g.name();
    EXPECT_NEAR(r.at("rough-Fatou").constant.value(), 1.0, 1e-9) << g.name();
    EXPECT_EQ(r.at("condition-CM").note, "exhaustive subset enumeration");
  }
}

TEST(VerifyModularAxioms, FailuresCarryReplayableWitnesses) {
  const MeasureSpace s = make_space({1, 1, 1});
  // Decreasing in f: not a gauge.
  const Gauge bad("bad", s, [](const PlusFunction& f) {
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) v += f[i].is_infinite() ? 0.0 : std::exp(-f[i].value());
    return ExtReal(v);
  });
  const AxiomReport r = verify_modular_axioms(bad, {{1.0, 1.0}}, {200, 3});
  const AxiomResult& mono = r.at("monotone");
  ASSERT_FALSE(mono.passed());
  ASSERT_TRUE(mono.witness.has_value());
  const PlusFunction f = unflat(mono.witness->get("f"));
  const PlusFunction h = unflat(mono.witness->get("g"));
  EXPECT_TRUE(f <= h);
  EXPECT_GT(bad(f), bad(h));

  // Too small a pair for the square modular.
  const Gauge sq = power_gauge(s, 2.0);
  const AxiomReport r2 = verify_modular_axioms(sq, {{1.0, 1.0}}, {500, 3});
  const AxiomResult& pair = r2.at("convexity-pair");
  ASSERT_FALSE(pair.passed());
  ASSERT_TRUE(pair.witness.has_value());
  const PlusFunction a = unflat(pair.witness->get("f"));
  const PlusFunction b = unflat(pair.witness->get("g"));
  EXPECT_GT(compare_gauge(sq, a + b, 1.0, {a, b}, 0.0), 0);
}

TEST(VerifyModularAxioms, PositivePartTestsG2) {
  const MeasureSpace s = make_space({1, 1});
  const Gauge g = make_musielak_gauge(s, MusielakOrliczFunction::shared(2, OrliczFunction::plateau(1.0)));
  const PlusFunction f{0.001, 0.002};
  bool positive = false;
  for (int k = -60; k <= 60 && !positive; ++k) positive = !g(f.scaled(std::ldexp(1.0, k))).is_zero();
  EXPECT_TRUE(positive);
  EXPECT_TRUE(verify_modular_axioms(g, {{1.0, 2.0}}, {200, 1}).at("G2").passed());
}

TEST(LatticeConvexity, Examples) {
  const MeasureSpace s = make_space({1, 1, 1});
  const LatticeEstimate l1 = lattice_convexity_constant(power_gauge(s, 1.0), 1.0, 500, 1);
  EXPECT_NEAR(l1.constant, 1.0, 1e-12);
  for (double q : {1.5, 2.0, 3.0}) {
    const LatticeEstimate lq = lattice_convexity_constant(lq_norm_gauge(s, q), q, 500, 2);
    EXPECT_TRUE(lq.homogeneous_criterion);
    EXPECT_NEAR(lq.constant, 1.0, 1e-9) << "q=" << q;
    const LatticeEstimate cq = lattice_concavity_constant(lq_norm_gauge(s, q), q, 500, 2);
    EXPECT_NEAR(cq.constant, 1.0, 1e-9) << "q=" << q;
  }
}

TEST(ConvexificationEnvelope, Examples) {
  const MeasureSpace s = make_space({1, 1});
  const Gauge l1 = power_gauge(s, 1.0);
  EXPECT_NEAR(convexification_envelope(l1, 1.0, PlusFunction{1, 1}), 2.0, 1e-12);
  EXPECT_GE(convexification_envelope(l1, 1.0, PlusFunction{1, 1}, 4, LatticeKind::concave), 2.0 * (1 - 1e-12));
}

TEST(ConvexificationEnvelopeProperty, BelowTheGauge) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  Rng rng(12);
  for (const Gauge& g : shipped_gauges(s)) {
    for (int trial = 0; trial < 50; ++trial) {
      const PlusFunction f = random_plus_function(4, rng);
      const double rho = g(f).value();
      ASSERT_LE(convexification_envelope(g, 1.0, f, 4, LatticeKind::convex, rng.bits()), rho * (1 + 1e-12));
      ASSERT_GE(convexification_envelope(g, 1.0, f, 4, LatticeKind::concave, rng.bits()), rho * (1 - 1e-12));
    }
  }
}

TEST(StandardPool, ContainsScaledIndicators) {
  const MeasureSpace s = make_space({1, 1, 1});
  const auto pool = standard_pool(s, 1);
  bool found = false;
  for (const PlusFunction& f : pool) found = found || f == PlusFunction::indicator(Subset::of(3, {0, 2}), 1.0);
  EXPECT_TRUE(found);
}
