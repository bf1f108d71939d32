#pragma once

#include <cstdint>
#include <functional>

#include "gaugelab/gauge.hpp"

namespace gaugelab {

struct SolverOptions {
  double rel_tol = 1e-14;
  int max_iter = 200;
  double lo = 0x1p-60;  // initial probe bracket
  double hi = 0x1p60;
  bool check_monotone = false;  // re-check the predicate along the trajectory
};

struct SolveResult {
  ExtReal value;  // upper end of the final bracket
  double lo = 0.0, hi = 0.0;
  int iterations = 0;
};

/// inf{t > 0 : pred(t)} for a predicate that is false below and true above
/// the infimum. The bracket grows geometrically from [opts.lo, opts.hi] up to
/// [2^-1020, 2^1020]; true on the whole range gives 0, false gives infinity.
/// With check_monotone, a true-then-false transition throws std::runtime_error.
SolveResult solve_infimum(const std::function<bool(double)>& pred, const SolverOptions& opts = {});

/// inf{t : rho(f/t) < 1}.
ExtReal luxemburg_eval(const Gauge& base, const PlusFunction& f, const SolverOptions& opts = {});
/// inf{t : rho(f/t) < t}.
ExtReal bar_eval(const Gauge& base, const PlusFunction& f, const SolverOptions& opts = {});

/// Homogeneous Luxemburg gauge. When the base carries a convexity pair (k, r)
/// and a closed-form Delta, the pair (1/tau, r) with Delta(tau) <= 1/(2k) and
/// the Fatou constant lambda with Delta(1/lambda) < 1/F are attached.
Gauge make_luxemburg(const Gauge& base, const SolverOptions& opts = {});

/// Bar gauge; convexity pair (max(2k/r, 1), 1) and the base Fatou constant.
Gauge make_bar(const Gauge& base, const SolverOptions& opts = {});

struct RelationOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  SolverOptions solver;
};

/// Relations "A.1", "A.2", "A.3", "B.1", "B.2" between rho, its Luxemburg
/// gauge and its bar gauge on sampled f and a dyadic t grid. Probes with
/// Delta(t) or Delta(1/t) infinite are skipped and counted. Results computed
/// with an estimated Delta say so in their note.
AxiomReport relation_report(const Gauge& base, const RelationOptions& opts = {});

}  // namespace gaugelab
