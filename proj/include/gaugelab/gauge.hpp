#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaugelab/measure.hpp"
#include "gaugelab/random.hpp"
#include "gaugelab/report.hpp"

namespace gaugelab {

/// rho(f+g) <= k (rho(r f) + rho(r g)).
struct ConvexityPair {
  double k = 1.0;
  double r = 1.0;
  friend bool operator==(const ConvexityPair&, const ConvexityPair&) = default;
};

struct GaugeTraits {
  bool homogeneous = false;
  std::optional<ConvexityPair> convexity_pair;
  /// Closed-form homogeneity function; +inf outside its domain J.
  std::function<ExtReal(double)> delta;
  std::optional<double> fatou;
  /// When set, rho(f) = sum_i w_i M(i, f(i)) with each product rounded once
  /// and the sum correctly rounded. Enables exact inequality checks.
  std::function<ExtReal(std::size_t, ExtReal)> integrand;
};

/// Monotone map L+(mu) -> [0, inf] over a fixed measure space.
class Gauge {
 public:
  using Eval = std::function<ExtReal(const PlusFunction&)>;

  Gauge(std::string name, MeasureSpace space, Eval eval, GaugeTraits traits = {})
      : name_(std::move(name)), space_(std::move(space)), eval_(std::move(eval)), traits_(std::move(traits)) {}

  const std::string& name() const { return name_; }
  const MeasureSpace& space() const { return space_; }
  const GaugeTraits& traits() const { return traits_; }

  /// Throws std::invalid_argument when f is not defined on space().
  ExtReal operator()(const PlusFunction& f) const;

 private:
  std::string name_;
  MeasureSpace space_;
  Eval eval_;
  GaugeTraits traits_;
};

ExtReal eval_gauge(const Gauge& g, const PlusFunction& f);

/// Sign of rho(lhs) - k * sum_j rho(rhs_j): exact for integral-form gauges,
/// otherwise with relative slack `tol` (returns 0 inside the slack band).
int compare_gauge(const Gauge& g, const PlusFunction& lhs, double k, const std::vector<PlusFunction>& rhs,
                  double tol);

/// Scaled indicators c*chi_E (log grid of c, all subsets for <= 8 atoms,
/// singletons, full set and random subsets otherwise) plus random simple
/// functions.
std::vector<PlusFunction> standard_pool(const MeasureSpace& space, std::uint64_t seed,
                                        std::size_t random_count = 64);

struct DeltaEstimate {
  ExtReal value;
  bool closed_form = false;
  std::size_t used = 0;
  std::size_t skipped = 0;  // pool members with rho(f) in {0, inf}
  std::optional<PlusFunction> argmax;
};

/// Sup over the pool of rho(t f) / rho(f). A member with rho(f) = 0 < rho(t f)
/// or rho(f) < inf = rho(t f) makes the estimate infinite. Throws
/// std::runtime_error when no pool member is admissible.
DeltaEstimate delta_at(const Gauge& g, double t, const std::vector<PlusFunction>& pool,
                       bool use_closed_form = true);

struct HomogeneityProfile {
  bool pseudo_origin = false;    // some t < 1 with Delta(t) < 1
  bool pseudo_infinity = false;  // Delta finite at every sampled t > 1
  std::vector<std::pair<double, ExtReal>> delta;
  std::size_t skipped = 0;
};

HomogeneityProfile classify_homogeneity(const Gauge& g, const std::vector<double>& grid,
                                        const std::vector<PlusFunction>& pool, bool use_closed_form = true);

/// Random nonnegative function: zeros, dyadic levels, uniform values and,
/// with `allow_inf`, occasional infinities.
PlusFunction random_plus_function(std::size_t n, Rng& rng, bool allow_inf = false);

struct ModularCheckOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-9;  // relative slack for gauges without an integrand
  std::size_t max_cm_sets = 24;
};

/// Per-axiom verdicts: "monotone", "convexity-pair", "condition-CM",
/// "vanishing-dilation", "rough-Fatou", "G1", "G2", "G3".
AxiomReport verify_modular_axioms(const Gauge& g, const std::vector<ConvexityPair>& candidates,
                                  const ModularCheckOptions& opts = {});

enum class LatticeKind { convex, concave };

struct LatticeEstimate {
  double constant = 1.0;
  std::size_t samples = 0;
  bool homogeneous_criterion = false;  // N/M form used
  std::optional<Witness> witness;      // maximizing tuple
};

/// Sampled lattice p-convexity (or p-concavity) constant. Homogeneous gauges
/// use the N_rho / M_rho(.; p) criterion, others the s_j-weighted definition.
LatticeEstimate lattice_convexity_constant(const Gauge& g, double p, std::size_t trials, std::uint64_t seed,
                                           LatticeKind kind = LatticeKind::convex);
inline LatticeEstimate lattice_concavity_constant(const Gauge& g, double p, std::size_t trials,
                                                  std::uint64_t seed) {
  return lattice_convexity_constant(g, p, trials, seed, LatticeKind::concave);
}

/// rho_0(f): inf (convex) or sup (concave) of M_rho / m_rho over
/// decompositions f^p = sum s_j^p f_j^p with n <= depth parts, dyadic s_j^p
/// and block-split or dyadic-share f_j. An upper (resp. lower) bound.
double convexification_envelope(const Gauge& g, double p, const PlusFunction& f, int depth = 4,
                                LatticeKind kind = LatticeKind::convex, std::uint64_t seed = 0);

}  // namespace gaugelab
