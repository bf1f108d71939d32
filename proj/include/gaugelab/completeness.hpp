#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaugelab/gauge.hpp"
#include "gaugelab/l0_topology.hpp"
#include "gaugelab/musielak_orlicz.hpp"
#include "gaugelab/quasinorm.hpp"

namespace gaugelab {

/// Points of the ambient space: a 1 x d row for vectors, an atoms x d matrix
/// for X-valued functions.
using Element = Eigen::MatrixXd;

/// Neighbourhood of the origin with an exact membership test.
struct Ball {
  std::string label;
  bool closed = false;  // <= ball; strict balls compare with <
  std::function<bool(const Element&)> contains;
  /// Membership in the non-strict variant, used for limits.
  std::function<bool(const Element&)> contains_closure;
  /// Member of the ball; `boundary` draws sit on (or just inside) the edge.
  std::function<Element(Rng&, bool boundary)> sample;
};

/// {x : ||x|| <= radius}.
Ball lp_ball(const QuasiNormSpace& q, double radius);
/// [0, eps] in R.
Ball interval_ball(double eps);
/// {0} of the given shape.
Ball zero_ball(Eigen::Index rows, Eigen::Index cols);
Ball l0_ball(const FunctionSpace& X, const L0Ball& b);
/// u B_rho(eps).
Ball gauge_ball(const FunctionSpace& X, const GaugeBall& b);

/// Parametrized family of balls with a shrinking operation used by the
/// axiom search.
struct BallFamily {
  using Params = std::vector<double>;

  std::string name;
  std::function<Ball(const Params&)> make;
  std::function<Params(Rng&)> random_params;
  /// shrink(U, 0) = U, decreasing in k.
  std::function<Params(const Params&, int k)> shrink;
  /// B inside U and V, when the family knows one.
  std::function<Params(const Params&, const Params&)> meet;
  std::function<Element(Rng&)> random_point;
  Params base;
  std::vector<Element> points;  // fixed probes for E.4 and E.5
};

BallFamily lp_family(const QuasiNormSpace& q);
BallFamily interval_family();
/// V_{E,delta,t} with E ranging over F, which must be directed to the
/// whole space (std::invalid_argument otherwise).
BallFamily l0_family(const FunctionSpace& X, const SetFamily& F);
BallFamily gauge_family(const FunctionSpace& X, const Gauge& g);

struct LocalBasisOptions {
  std::size_t trials = 200;  // samples per inclusion test
  std::size_t outer = 16;    // sampled U (or U, V pairs) per axiom
  int max_shrink = 60;
  std::vector<double> scalars = {1.0, -1.0, 0.5, -0.5};
  std::uint64_t seed = 0;
};

/// "E.1" .. "E.5": found witnesses (shrink levels, eps) in the values table,
/// or a counterexample witness.
AxiomReport check_local_basis_axioms(const BallFamily& fam, const LocalBasisOptions& opts = {});

struct NestingResult {
  bool nested = true;
  std::size_t index = 0;  // n with V_{n+1} + V_{n+1} not inside V_n
  std::size_t checks = 0;
  std::optional<Witness> witness;
};

/// V_{n+1} + V_{n+1} inside V_n on sampled pairs (equal boundary pairs,
/// independent boundary pairs, interior pairs) and V_{n+1} inside V_n.
NestingResult is_strongly_nested(const std::vector<Ball>& seq, std::size_t trials, std::uint64_t seed);

/// Draws x_n in V_n (n = 1..N for seq = V_0..V_N); "tail" checks
/// sum_{n>m} x_n in V_m for m <= N-1, "sum-in-V0" checks the sum against the
/// closure of V_0. Throws std::invalid_argument for non-nested input.
AxiomReport series_convergence_test(const std::vector<Ball>& seq, std::size_t draws, std::uint64_t seed);

enum class IncrementMode { random, boundary, constant };

/// y_1 in V_1, y_{n+1} - y_n in V_{n+1}; "invariant" checks y_{n+k} - y_n in
/// V_n at all (n, k), "limit" checks y_N against the closure of V_0.
AxiomReport increment_convergence_test(const std::vector<Ball>& seq, std::size_t draws, std::uint64_t seed,
                                       IncrementMode mode = IncrementMode::random);

struct NestedSchedule {
  double kappa = 1.0;
  std::vector<double> t;      // t_n = (2 kappa)^-n, n = 0..depth
  std::vector<double> eps;    // eps_n = ratio^n
  std::vector<double> delta;  // delta_n = sum_{j>n} eps_j
};

/// Throws std::invalid_argument for kappa < 1 or ratio outside (0, 1).
NestedSchedule make_schedule(double kappa, int depth = 40, double ratio = 0.5);

/// Balls ||x|| <= t_n, n = 0..depth.
std::vector<Ball> lp_sequence(const QuasiNormSpace& q, const NestedSchedule& s);

/// f_n in V_{Omega, eps_n, t_n}; "mu(A_j)<delta_j", "off-A_j", "g_j" at
/// every truncation index j.
AxiomReport l0_construction_check(const FunctionSpace& X, const NestedSchedule& s, std::size_t draws,
                                  std::uint64_t seed);

/// (k, 1) pair derived from the gauge's pair (k, r): (k Delta(r), 1).
std::optional<double> unit_pair_constant(const Gauge& g);

/// B_rho(eps_n) with eps_{n+1} = eps_n / (2 k Delta(kappa_0)), (k, 1) as
/// above. Throws std::invalid_argument without a pair and closed-form Delta.
std::vector<Ball> gauge_sequence(const FunctionSpace& X, const Gauge& g, double eps0, int depth);

/// eps_n = k^-n Delta(kappa_0^n)^-1 t_n with t_n = 2^-n; "tail-bound" checks
/// rho(sum_{n>=k} kappa_0^n ||f_n||) <= F delta_k (relative 1e-9),
/// "convergence" checks rho(||sum_{n>=k} f_n||) <= F delta_k.
AxiomReport gauge_series_check(const FunctionSpace& X, const Gauge& g, int depth, std::size_t draws,
                               std::uint64_t seed);

/// (t / u_E) B_rho(eps) inside V_{E,delta,t}, eps by exhaustive search over
/// subsets of E. Results "parameters", "inclusion".
AxiomReport l0_continuity_check(const FunctionSpace& X, const Gauge& g, const L0Ball& ball, std::size_t samples,
                                std::uint64_t seed);

}  // namespace gaugelab
