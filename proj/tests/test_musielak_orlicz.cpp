#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gaugelab/musielak_orlicz.hpp"

using namespace gaugelab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<MusielakOrliczFunction> shipped(std::size_t n) {
  std::vector<double> exps(n), exps_inf(n);
  std::vector<OrliczFunction> mixed;
  for (std::size_t i = 0; i < n; ++i) {
    exps[i] = 0.5 + static_cast<double>(i % 4) * 0.75;
    exps_inf[i] = i == 0 ? kInf : 1.0 + static_cast<double>(i % 3);
    mixed.push_back(i % 2 ? OrliczFunction::exp_power(1.0) : OrliczFunction::capped_power(1.5, 2.0));
  }
  return {MusielakOrliczFunction::shared(n, OrliczFunction::power(2.0)),
          MusielakOrliczFunction::shared(n, OrliczFunction::capped_power(2.0, 1.0)),
          MusielakOrliczFunction::shared(n, OrliczFunction::bounded_rational()),
          MusielakOrliczFunction::shared(n, OrliczFunction::plateau(0.5)),
          MusielakOrliczFunction::variable_exponent(exps),
          MusielakOrliczFunction::variable_exponent(exps_inf),
          MusielakOrliczFunction::per_atom(mixed)};
}

FunctionSpace l2_space(std::initializer_list<double> w) {
  return FunctionSpace{make_space(w), QuasiNormSpace::lp(2, 2.0)};
}

}  // namespace

TEST(OrliczEval, Examples) {
  EXPECT_EQ(orlicz_eval(OrliczFunction::power(2.0), 3.0).value(), 9.0);
  const OrliczFunction inf = OrliczFunction::power(kInf);
  EXPECT_TRUE(orlicz_eval(inf, 0.9).is_zero());
  EXPECT_TRUE(orlicz_eval(inf, 1.5).is_infinite());
  EXPECT_TRUE(orlicz_eval(inf, 1.0).is_zero());
  EXPECT_EQ(orlicz_eval(OrliczFunction::bounded_rational(), ExtReal::infinity()).value(), 1.0);
  EXPECT_EQ(orlicz_eval(OrliczFunction::capped_power(2.0, 3.0), 10.0).value(), 3.0);
  EXPECT_TRUE(orlicz_eval(OrliczFunction::plateau(1.0), 1.0).is_zero());
  EXPECT_EQ(orlicz_eval(OrliczFunction::plateau(1.0), 1.0000001).value(), 1.0);
  EXPECT_NEAR(orlicz_eval(OrliczFunction::exp_power(2.0), 1e-5).value(), std::expm1(1e-10), 1e-24);
  EXPECT_EQ(orlicz_eval(OrliczFunction::scaled(OrliczFunction::power(2.0), 3.0, 2.0), 1.0).value(), 12.0);
}

TEST(OrliczFunction, RejectsBadParameters) {
  EXPECT_THROW(OrliczFunction::power(0.0), std::invalid_argument);
  EXPECT_THROW(OrliczFunction::power(-1.0), std::invalid_argument);
  EXPECT_THROW(OrliczFunction::capped_power(2.0, 0.0), std::invalid_argument);
  EXPECT_THROW(OrliczFunction::plateau(-1.0), std::invalid_argument);
  EXPECT_THROW(OrliczFunction::scaled(OrliczFunction::power(1.0), 0.0, 1.0), std::invalid_argument);
}

TEST(OrliczProperty, NondecreasingVanishingAtZeroPositiveAtInfinity) {
  std::vector<OrliczFunction> kinds = {
      OrliczFunction::power(0.5), OrliczFunction::power(3.0), OrliczFunction::power(kInf),
      OrliczFunction::capped_power(2.0, 0.5), OrliczFunction::bounded_rational(), OrliczFunction::plateau(2.0),
      OrliczFunction::exp_power(0.5), OrliczFunction::exp_power(2.0),
      OrliczFunction::scaled(OrliczFunction::bounded_rational(), 2.0, 0.25),
      OrliczFunction::piecewise(1.0, OrliczFunction::power(1.0), OrliczFunction::power(3.0)),
      OrliczFunction::piecewise(1.0, OrliczFunction::plateau(0.5), OrliczFunction::power(2.0))};
  for (const OrliczFunction& F : kinds) {
    ExtReal prev = F(0.0);
    EXPECT_TRUE(prev.is_zero()) << F.describe();
    for (int k = -200; k <= 200; ++k) {
      const ExtReal v = F(std::exp2(k / 8.0));
      ASSERT_GE(v, prev) << F.describe();
      prev = v;
    }
    EXPECT_GT(F.at_infinity(), ExtReal(0.0)) << F.describe();
    EXPECT_LT(F(1e-30), ExtReal(1e-6)) << F.describe();
  }
}

TEST(RhoM, Examples) {
  const MeasureSpace s = make_space({1, 1});
  EXPECT_EQ(rho_M(MusielakOrliczFunction::shared(2, OrliczFunction::power(2.0)), PlusFunction{3, 4}, s).value(), 25.0);
  const MeasureSpace w = make_space({0.5, 0.25, 0.25});
  EXPECT_EQ(rho_M(MusielakOrliczFunction::shared(3, OrliczFunction::bounded_rational()), PlusFunction(3, ExtReal::infinity()), w)
                .value(),
            w.total_mass());
  for (const MusielakOrliczFunction& M : shipped(3)) EXPECT_TRUE(rho_M(M, PlusFunction(3), w).is_zero());
}

TEST(NuM, Examples) {
  const MeasureSpace h = make_space({0.5, 0.5});
  EXPECT_EQ(nu_M(MusielakOrliczFunction::shared(2, OrliczFunction::power(1.0)), Subset::full(2), 2.0, h).value(), 2.0);
  EXPECT_TRUE(nu_M(MusielakOrliczFunction::shared(2, OrliczFunction::power(1.0)), Subset(2), 2.0, h).is_zero());
  const MeasureSpace c = make_space({1, 1});
  EXPECT_EQ(nu_M(MusielakOrliczFunction::variable_exponent({1, 2}), Subset::full(2), 3.0, c).value(), 12.0);
}

static bool has_infinite_slice(const MusielakOrliczFunction& M) {
  return M.describe().find("inf") != std::string::npos;
}

TEST(FindU, CertifiesTheUERequirement) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  for (const MusielakOrliczFunction& M : shipped(4)) {
    if (has_infinite_slice(M)) continue;
    const auto u = find_u(M, s);
    ASSERT_TRUE(u.has_value()) << M.describe();
    EXPECT_TRUE(nu_M(M, Subset::full(4), *u, s).is_finite());
    for (std::size_t i = 0; i < 4; ++i) EXPECT_GT(M(i, *u), ExtReal(0.0)) << M.describe();
  }
}

TEST(FindU, InfiniteSliceHasNoPositiveFiniteLevel) {
  // t^inf is 0 on [0, 1] and inf beyond, so no u is both positive and finite there.
  const MeasureSpace s = make_space({1, 1});
  EXPECT_FALSE(find_u(MusielakOrliczFunction::variable_exponent({kInf, 2.0}), s).has_value());
  const Gauge g = make_musielak_gauge(s, MusielakOrliczFunction::variable_exponent({kInf, 2.0}));
  EXPECT_FALSE(verify_modular_axioms(g, {{1.0, 2.0}}, {200, 1}).at("condition-CM").passed());
}

TEST(DoublingConstant, Examples) {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const DoublingResult d = doubling_constant(MusielakOrliczFunction::shared(3, OrliczFunction::power(p)));
    ASSERT_TRUE(d.D.has_value());
    EXPECT_DOUBLE_EQ(*d.D, std::exp2(p));
  }
  const DoublingResult v = doubling_constant(MusielakOrliczFunction::variable_exponent({1, 2.5, 3}));
  ASSERT_TRUE(v.D.has_value());
  EXPECT_EQ(*v.D, 8.0);
  const DoublingResult inf = doubling_constant(MusielakOrliczFunction::variable_exponent({1, kInf}));
  EXPECT_FALSE(inf.D.has_value());
  ASSERT_TRUE(inf.witness.has_value());
  const DoublingResult plateau = doubling_constant(MusielakOrliczFunction::shared(2, OrliczFunction::plateau(1.0)));
  EXPECT_FALSE(plateau.D.has_value());
  // Sampled path agrees with the closed form on a capped kind below the cap.
  const DoublingResult capped = doubling_constant(MusielakOrliczFunction::shared(2, OrliczFunction::capped_power(2.0, 1.0)));
  ASSERT_TRUE(capped.D.has_value());
  EXPECT_NEAR(*capped.D, 4.0, 1e-12);
}

TEST(DoublingProperty, ImpliesPseudoHomogeneityAtInfinity) {
  const MeasureSpace s = make_space({0.5, 1, 2});
  const auto pool = standard_pool(s, 1);
  for (const MusielakOrliczFunction& M : shipped(3)) {
    const DoublingResult d = doubling_constant(M);
    if (!d.D) continue;
    const Gauge g = make_musielak_gauge(s, M);
    for (double t : {1.5, 2.0, 3.0, 8.0, 100.0}) {
      const double bound = std::pow(*d.D, std::ceil(std::log2(t)));
      EXPECT_LE(delta_at(g, t, pool, false).value.value(), bound * (1 + 1e-12)) << M.describe() << " t=" << t;
    }
  }
}

TEST(PcoConstants, Examples) {
  const PcoResult p2 = pco_constants(MusielakOrliczFunction::shared(2, OrliczFunction::power(2.0)));
  ASSERT_TRUE(p2.cd.has_value());
  EXPECT_EQ(p2.cd->first, 0.5);
  EXPECT_EQ(p2.cd->second, 0.25);
  const PcoResult p1 = pco_constants(MusielakOrliczFunction::shared(2, OrliczFunction::power(1.0)));
  ASSERT_TRUE(p1.cd.has_value());
  EXPECT_EQ(p1.cd->first, 0.5);
  EXPECT_EQ(p1.cd->second, 0.5);
  EXPECT_FALSE(pco_constants(MusielakOrliczFunction::shared(2, OrliczFunction::bounded_rational())).cd.has_value());
}

TEST(PcoProperty, CertifiedPairsHoldOnTheGrid) {
  for (const MusielakOrliczFunction& M : shipped(4)) {
    const PcoResult r = pco_constants(M);
    if (!r.cd) continue;
    const auto [c, d] = *r.cd;
    EXPECT_LT(d, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      for (double s : default_grid()) {
        const ExtReal lhs = M(i, c * s), rhs = ExtReal(d) * M(i, s);
        ASSERT_LE(lhs, rhs * ExtReal(1 + 1e-12)) << M.describe() << " s=" << s;
      }
    }
  }
}

TEST(BallMemberM, Examples) {
  const FunctionSpace X = l2_space({1, 1});
  const MusielakOrliczFunction M = MusielakOrliczFunction::shared(2, OrliczFunction::power(2.0));
  Eigen::MatrixXd f(2, 2);
  f << 3, 0, 0, 4;
  EXPECT_TRUE(ball_member_M(M, 26.0, f, X));
  EXPECT_FALSE(ball_member_M(M, 25.0, f, X));
  EXPECT_TRUE(ball_member_M(M, 1e-300, X.zero(), X));
  const GaugeBall b{make_musielak_gauge(X.measure, M), 26.0, 1.0};
  EXPECT_TRUE(ball_member(X, b, f));
  EXPECT_FALSE(ball_member(X, GaugeBall{b.gauge, 25.0, 1.0}, f));
  EXPECT_TRUE(ball_member(X, GaugeBall{b.gauge, 7.0, 2.0}, f));
}

TEST(MusielakGauge, ShippedKindsPassTheAxioms) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1, 0.25});
  for (const MusielakOrliczFunction& M : shipped(5)) {
    if (has_infinite_slice(M)) continue;
    const Gauge g = make_musielak_gauge(s, M);
    const AxiomReport r = verify_modular_axioms(g, {{1.0, 2.0}}, {1000, 3});
    EXPECT_TRUE(r.passed()) << M.describe();
    EXPECT_EQ(r.at("convexity-pair").constant.value(), 1.0);
    EXPECT_NEAR(r.at("rough-Fatou").constant.value(), 1.0, 1e-9);
    EXPECT_TRUE(pointwise_pair_bound(M, default_grid())) << M.describe();
  }
}

TEST(MusielakGauge, AbsolutelyContinuousOnDecreasingChains) {
  const MeasureSpace s = make_space({0.5, 1, 2});
  Rng rng(61);
  for (const MusielakOrliczFunction& M : shipped(3)) {
    for (int trial = 0; trial < 50; ++trial) {
      PlusFunction f = random_plus_function(3, rng);
      ExtReal prev = rho_M(M, f, s);
      if (prev.is_infinite()) continue;
      for (int k = 0; k < 400; ++k) {
        f = f.scaled(0.75);
        const ExtReal v = rho_M(M, f, s);
        ASSERT_LE(v, prev);
        prev = v;
      }
      EXPECT_LT(prev.value(), 1e-12) << M.describe();
    }
  }
}

TEST(VariableExponent, LatticeConstantsAreOne) {
  const MeasureSpace s = make_space({0.5, 1, 2, 1});
  const std::vector<double> exps = {1.0, 1.5, 2.0, 3.0};
  const Gauge g = make_musielak_gauge(s, MusielakOrliczFunction::variable_exponent(exps));
  const LatticeEstimate cvx = lattice_convexity_constant(g, 1.0, 1000, 1);
  EXPECT_NEAR(cvx.constant, 1.0, 1e-9);
  const LatticeEstimate ccv = lattice_concavity_constant(g, 3.0, 1000, 2);
  EXPECT_NEAR(ccv.constant, 1.0, 1e-9);
}

TEST(VariableExponent, NormSplitsTheInfiniteAtoms) {
  const MeasureSpace s = make_space({1, 1, 1});
  // Atom 2 has exponent inf: ess sup part.
  const std::vector<double> exps = {1.0, 1.0, kInf};
  EXPECT_NEAR(variable_exponent_norm(exps, PlusFunction{1, 2, 0.5}, s).value(), 3.0, 3e-12);
  EXPECT_NEAR(variable_exponent_norm(exps, PlusFunction{0.1, 0.2, 5}, s).value(), 5.0, 5e-12);
  EXPECT_TRUE(variable_exponent_norm(exps, PlusFunction(3), s).is_zero());
}

TEST(EquivalenceNearOrigin, AgreeingBelowOne) {
  const FunctionSpace X = l2_space({1, 1, 1, 1});
  const auto M = MusielakOrliczFunction::shared(4, OrliczFunction::power(1.0));
  const auto N = MusielakOrliczFunction::shared(
      4, OrliczFunction::piecewise(1.0, OrliczFunction::power(1.0), OrliczFunction::power(3.0)));
  const AxiomReport r = equivalence_near_origin(M, N, 1.0, X, {{2.0, 1.0, 0.5, 0.1, 0.01}, 1000, 4});
  EXPECT_TRUE(r.passed());
  double u0 = 0, R0 = 0;
  for (const auto& [k, v] : r.at("precondition").values) {
    if (k == "u0") u0 = v;
    if (k == "R0") R0 = v;
  }
  EXPECT_EQ(u0, 1.0);
  EXPECT_EQ(R0, 1.0);
  EXPECT_EQ(r.at("inclusion").checks, 4000u);
  EXPECT_GE(r.at("inclusion").skipped, 1u);  // eps = 2 > R0
}

TEST(EquivalenceNearOrigin, IdenticalFunctions) {
  const FunctionSpace X = l2_space({1, 1, 1});
  const auto M = MusielakOrliczFunction::shared(3, OrliczFunction::power(2.0));
  EXPECT_TRUE(equivalence_near_origin(M, M, 1.0, X, {{0.5, 0.1}, 500, 1}).passed());
}

TEST(EquivalenceNearOrigin, RequiresCountingMeasure) {
  const FunctionSpace X = l2_space({0.5, 1});
  const auto M = MusielakOrliczFunction::shared(2, OrliczFunction::power(2.0));
  EXPECT_THROW(equivalence_near_origin(M, M, 1.0, X), std::invalid_argument);
}

TEST(EquivalenceNearInfinity, PlateauAdjustedBelowOne) {
  const FunctionSpace X = l2_space({0.5, 1, 2, 0.25, 1});
  const auto M = MusielakOrliczFunction::shared(5, OrliczFunction::power(2.0));
  const auto N = MusielakOrliczFunction::shared(
      5, OrliczFunction::piecewise(1.0, OrliczFunction::plateau(0.5), OrliczFunction::power(2.0)));
  const AxiomReport r = equivalence_near_infinity(M, N, 1.0, X, {{2.0, 1.0, 0.5, 0.1, 0.01}, 1000, 5});
  for (const char* name : {"precondition", "inclusion", "three-term", "Chebyshev"}) {
    EXPECT_TRUE(r.at(name).passed()) << name;
  }
  EXPECT_EQ(r.at("inclusion").checks, 5000u);
  EXPECT_EQ(r.at("Chebyshev").checks, 5000u);
}

TEST(EquivalenceNearInfinity, IdenticalFunctions) {
  const FunctionSpace X = l2_space({1, 2, 3});
  const auto M = MusielakOrliczFunction::shared(3, OrliczFunction::exp_power(1.0));
  EXPECT_TRUE(equivalence_near_infinity(M, M, 1.0, X, {{1.0, 0.1}, 500, 6}).passed());
}

TEST(L0fRepresentation, Construction) {
  const MeasureSpace s = make_space({1, 1});
  const auto M = l0f_as_musielak(PlusFunction{0.5, 0.5}, OrliczFunction::bounded_rational(), s);
  for (double t : {0.0, 0.5, 1.0, 3.0, 1e6}) {
    EXPECT_NEAR(M(0, t).value(), 0.5 * t / (1 + t), 1e-15);
    EXPECT_NEAR(M(1, t).value(), 0.5 * t / (1 + t), 1e-15);
  }
  EXPECT_THROW(l0f_as_musielak(PlusFunction{0.5, 0.0}, OrliczFunction::bounded_rational(), s), std::invalid_argument);
  EXPECT_THROW(l0f_as_musielak(PlusFunction{0.5, kInf}, OrliczFunction::bounded_rational(), s), std::invalid_argument);
  EXPECT_THROW(l0f_as_musielak(PlusFunction{0.5, 0.5}, OrliczFunction::power(1.0), s), std::invalid_argument);
}

TEST(L0fRepresentation, InclusionRecipe) {
  const FunctionSpace X = l2_space({0.5, 1, 0.25, 2});
  const AxiomReport r =
      l0f_inclusion_check(PlusFunction{0.5, 0.25, 1, 0.125}, OrliczFunction::bounded_rational(), X, 0.9, 1000, 7);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.at("inclusion").checks, 1000u);
  EXPECT_TRUE(r.at("three-term").passed());
}
