#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaugelab/gauge.hpp"
#include "gaugelab/l0_topology.hpp"
#include "gaugelab/orlicz.hpp"

namespace gaugelab {

/// M(omega, t): one Orlicz function per atom.
class MusielakOrliczFunction {
 public:
  static MusielakOrliczFunction shared(std::size_t atoms, OrliczFunction F);
  static MusielakOrliczFunction per_atom(std::vector<OrliczFunction> slices);
  /// M(omega, t) = t^p(omega), p(omega) in (0, inf].
  static MusielakOrliczFunction variable_exponent(std::vector<double> exponents);

  std::size_t atoms() const { return slices_.size(); }
  const OrliczFunction& slice(std::size_t i) const { return slices_.at(i); }
  ExtReal operator()(std::size_t atom, ExtReal t) const { return slices_.at(atom)(t); }

  /// Per-atom exponents when every slice is a (scaled) power.
  std::optional<std::vector<double>> exponents() const;
  bool is_variable_exponent() const { return variable_exponent_; }
  std::string describe() const;

 private:
  std::vector<OrliczFunction> slices_;
  bool variable_exponent_ = false;
};

ExtReal rho_M(const MusielakOrliczFunction& M, const PlusFunction& f, const MeasureSpace& space);
/// nu_M(A, t) = integral over A of M(omega, t).
ExtReal nu_M(const MusielakOrliczFunction& M, const Subset& A, double t, const MeasureSpace& space);

/// Smallest dyadic u with nu_M(Omega, u) < inf and M(omega, u) > 0 on every
/// atom; serves as u_E for every E.
std::optional<double> find_u(const MusielakOrliczFunction& M, const MeasureSpace& space);

/// rho_M as a Gauge: integrand trait, convexity pair (1, 2), Fatou constant
/// 1, closed-form Delta when every slice is a power.
Gauge make_musielak_gauge(const MeasureSpace& space, const MusielakOrliczFunction& M, std::string name = "");

/// s = 2^(k/4), |k| <= 240.
std::vector<double> default_grid();

struct DoublingResult {
  std::optional<double> D;
  bool closed_form = false;
  std::optional<Witness> witness;  // unbounded ratio
};

/// Smallest D with M(omega, 2s) <= D M(omega, s) on the grid; 2^p_max for
/// finite power exponents.
DoublingResult doubling_constant(const MusielakOrliczFunction& M, const std::vector<double>& grid = default_grid());

struct PcoResult {
  std::optional<std::pair<double, double>> cd;  // (c, d), d < 1
  bool closed_form = false;
};

/// M(omega, c s) <= d M(omega, s). Closed form d = c^a with c = 1/2 when
/// every slice has M^(1/a) convex; otherwise the first c in c_candidates
/// whose sampled d is below 1.
PcoResult pco_constants(const MusielakOrliczFunction& M, const std::vector<double>& grid = default_grid(),
                        const std::vector<double>& c_candidates = {0.5, 0.25, 0.125, 0.0625, 0x1p-8});

/// M(omega, s + t) <= max(M(omega, 2s), M(omega, 2t)) on grid pairs.
bool pointwise_pair_bound(const MusielakOrliczFunction& M, const std::vector<double>& grid, Witness* witness = nullptr);

/// rho_M(||f||) < eps.
bool ball_member_M(const MusielakOrliczFunction& M, double eps, const VectorFunction& f, const FunctionSpace& X);

/// u B_rho(eps).
struct GaugeBall {
  Gauge gauge;
  double eps = 1.0;
  double u = 1.0;
};

/// rho(||f/u||) < eps.
bool ball_member(const FunctionSpace& X, const GaugeBall& b, const VectorFunction& f);

struct EquivalenceOptions {
  std::vector<double> eps_grid = {2.0, 1.0, 0.5, 0.1, 0.01};
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Results "precondition", "inclusion"; values u0, R0. Counting measure
/// only (std::invalid_argument otherwise).
AxiomReport equivalence_near_origin(const MusielakOrliczFunction& M, const MusielakOrliczFunction& N, double t0,
                                    const FunctionSpace& X, const EquivalenceOptions& opts = {});

/// Results "precondition", "inclusion", "three-term", "Chebyshev"; values
/// u(eps), delta(eps).
AxiomReport equivalence_near_infinity(const MusielakOrliczFunction& M, const MusielakOrliczFunction& N, double t0,
                                      const FunctionSpace& X, const EquivalenceOptions& opts = {});

/// M(omega, t) = phi(omega) F(t). Throws std::invalid_argument unless phi
/// is finite and strictly positive and F(inf) = 1.
MusielakOrliczFunction l0f_as_musielak(const PlusFunction& phi, const OrliczFunction& F, const MeasureSpace& space);

/// V_{E,delta,t} inside B_M(eps) with E, t, delta chosen so that each of
/// the three terms of the bound stays below eps/3. Results "parameters",
/// "inclusion", "three-term".
AxiomReport l0f_inclusion_check(const PlusFunction& phi, const OrliczFunction& F, const FunctionSpace& X, double eps,
                                std::size_t samples, std::uint64_t seed);

/// max(ess sup of f off Omega_p, inf{t : sum over Omega_p of w (f/t)^p < 1}).
ExtReal variable_exponent_norm(const std::vector<double>& exponents, const PlusFunction& f, const MeasureSpace& space);

}  // namespace gaugelab
