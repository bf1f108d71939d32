#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "gaugelab/measure.hpp"
#include "gaugelab/quasinorm.hpp"
#include "gaugelab/random.hpp"
#include "gaugelab/report.hpp"

namespace gaugelab {

/// Values of an X-valued function: row i is f(atom i).
using VectorFunction = Eigen::MatrixXd;

/// A measure space together with the value space X.
struct FunctionSpace {
  MeasureSpace measure;
  QuasiNormSpace values;

  std::size_t atoms() const { return measure.size(); }
  Eigen::Index dim() const { return values.dim(); }
  VectorFunction zero() const { return VectorFunction::Zero(static_cast<Eigen::Index>(atoms()), dim()); }
  /// Throws std::invalid_argument when f does not live on this space.
  void check(const VectorFunction& f) const;
};

/// omega -> ||f(omega)||.
PlusFunction pointwise_norm(const FunctionSpace& X, const VectorFunction& f);

/// Atoms with ||f(omega)|| > t (strict). Throws for t <= 0.
Subset level_set(const FunctionSpace& X, const VectorFunction& f, double t);
Subset level_set(const PlusFunction& f, double t);

/// V_{E,delta,t} = {f : mu(E & level_set(f,t)) < delta}.
struct L0Ball {
  Subset E;
  double delta = 1.0;
  double t = 1.0;
};

/// Exact strict comparison. Throws on space mismatch.
bool ball_member(const FunctionSpace& X, const L0Ball& b, const VectorFunction& f);

/// f on E, zero elsewhere.
VectorFunction restrict(const VectorFunction& f, const Subset& E);

/// Random member of b. With `boundary`, the atoms outside the exceptional
/// set sit exactly on the sphere of radius b.t (scaled basis vectors).
VectorFunction sample_l0_member(const FunctionSpace& X, const L0Ball& b, Rng& rng, bool boundary = false);

/// Sampled check of the level-set and ball inclusions: "DF2" (exact
/// dilation identity), "DF1" (union form with t/(2 kappa)), "DF4"
/// (Minkowski sum), "AlmostInclusion" and "Monotonicity".
/// `kappa` is the constant used in the formulas; pass a wrong one to
/// probe the power of the test.
AxiomReport verify_ball_algebra(const FunctionSpace& X, double kappa, std::size_t trials, std::uint64_t seed);

struct SetFamily {
  std::vector<Subset> members;
  std::optional<Subset> directed_to;
};

/// Pairwise domination inside F, support in Omega0, and cover of Omega0.
bool is_directed_to(const SetFamily& F, const Subset& omega0, const MeasureSpace& space);

/// F1 < F2: every A in F1 lies in some B in F2 up to a null set.
bool precedes(const SetFamily& F1, const SetFamily& F2, const MeasureSpace& space);

/// Nondecreasing chain F0 inside F with F < F0. Requires F directed to
/// the whole space (std::invalid_argument otherwise).
std::optional<std::vector<Subset>> metrizability_check(const SetFamily& F, const MeasureSpace& space);

}  // namespace gaugelab
