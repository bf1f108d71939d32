#include "gaugelab/l0_topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gaugelab {

void FunctionSpace::check(const VectorFunction& f) const {
  if (static_cast<std::size_t>(f.rows()) != atoms() || f.cols() != dim()) {
    throw std::invalid_argument("function of shape " + std::to_string(f.rows()) + "x" +
                                std::to_string(f.cols()) + " on a space with " +
                                std::to_string(atoms()) + " atoms and values of dimension " +
                                std::to_string(dim()));
  }
}

PlusFunction pointwise_norm(const FunctionSpace& X, const VectorFunction& f) {
  X.check(f);
  PlusFunction out(X.atoms());
  for (Eigen::Index i = 0; i < f.rows(); ++i) out[static_cast<std::size_t>(i)] = X.values.norm(f.row(i).transpose());
  return out;
}

Subset level_set(const PlusFunction& f, double t) {
  if (!(t > 0.0)) throw std::domain_error("level_set: t must be positive");
  Subset out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > ExtReal(t)) out.insert(i);
  }
  return out;
}

Subset level_set(const FunctionSpace& X, const VectorFunction& f, double t) {
  if (!(t > 0.0)) throw std::domain_error("level_set: t must be positive");
  return level_set(pointwise_norm(X, f), t);
}

bool ball_member(const FunctionSpace& X, const L0Ball& b, const VectorFunction& f) {
  X.measure.check_subset(b.E);
  return X.measure.measure_below(b.E & level_set(X, f, b.t), {b.delta});
}

VectorFunction restrict(const VectorFunction& f, const Subset& E) {
  if (static_cast<std::size_t>(f.rows()) != E.atom_count()) {
    throw std::invalid_argument("restrict: subset and function have different atom counts");
  }
  VectorFunction out = f;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (!E.contains(static_cast<std::size_t>(i))) out.row(i).setZero();
  }
  return out;
}

namespace {

// Vector with norm exactly r when representable, never above r otherwise.
Eigen::VectorXd on_sphere(const QuasiNormSpace& q, Eigen::Index basis, double r) {
  Eigen::VectorXd v = Eigen::VectorXd::Unit(q.dim(), basis);
  v(basis) = r / q.norm(v);
  while (q.norm(v) > r) v(basis) = std::nextafter(v(basis), 0.0);
  return v;
}

Eigen::VectorXd random_direction(const QuasiNormSpace& q, Rng& rng) {
  Eigen::VectorXd v(q.dim());
  do {
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
  } while (q.norm(v) == 0.0);
  return v / q.norm(v);
}

// Random vector with norm in [0, r].
Eigen::VectorXd inside(const QuasiNormSpace& q, double r, Rng& rng) {
  Eigen::VectorXd v = random_direction(q, rng) * (r * rng.uniform());
  while (q.norm(v) > r) v *= 0.5;
  return v;
}

Eigen::VectorXd outside(const QuasiNormSpace& q, double r, Rng& rng) {
  Eigen::VectorXd v = random_direction(q, rng) * (r * rng.uniform(1.0, 4.0) * rng.log_uniform_pow2(0, 8));
  while (!(q.norm(v) > r)) v *= 2.0;
  return v;
}

std::vector<double> flatten(const VectorFunction& f) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) out.push_back(f(i, j));
  return out;
}

std::vector<double> as_doubles(const Subset& E) {
  std::vector<double> out;
  for (std::size_t i : E.indices()) out.push_back(static_cast<double>(i));
  return out;
}

Subset random_subset(std::size_t n, Rng& rng) {
  Subset s(n);
  switch (rng.index(6)) {
    case 0:
      return s;
    case 1:
      return Subset::full(n);
    default:
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.coin()) s.insert(i);
      }
      return s;
  }
}

double random_t(Rng& rng) {
  return rng.coin() ? rng.log_uniform_pow2(-6, 6) : rng.log_uniform_pow2(-6, 6) * rng.uniform(1.0, 2.0);
}

// delta either continuous or exactly the measure of a random set (a tie for
// strict comparisons).
double random_delta(const MeasureSpace& space, const Subset& E, Rng& rng) {
  const double mE = measure_of(space, E).value();
  if (rng.coin(0.4)) {
    Subset S = random_subset(space.size(), rng);
    const double m = measure_of(space, S).value();
    if (m > 0.0) return m;
  }
  const double hi = mE > 0.0 ? 1.25 * mE : space.total_mass();
  double d = rng.uniform(0.0, hi);
  return d > 0.0 ? d : hi;
}

L0Ball random_ball(const FunctionSpace& X, Rng& rng) {
  L0Ball b;
  b.E = random_subset(X.atoms(), rng);
  b.delta = random_delta(X.measure, b.E, rng);
  b.t = random_t(rng);
  return b;
}

Witness ball_witness(std::string text, const L0Ball& b) {
  Witness w{std::move(text), {}};
  w.add("E", as_doubles(b.E)).add("delta", b.delta).add("t", b.t);
  return w;
}

}  // namespace

VectorFunction sample_l0_member(const FunctionSpace& X, const L0Ball& b, Rng& rng, bool boundary) {
  X.measure.check_subset(b.E);
  const std::size_t n = X.atoms();
  const QuasiNormSpace& q = X.values;

  // Exceptional atoms inside E where the norm may exceed t.
  std::vector<std::size_t> order = b.E.indices();
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  Subset L(n);
  for (std::size_t i : order) {
    if (!rng.coin()) continue;
    Subset trial = L;
    trial.insert(i);
    if (X.measure.measure_below(trial, {b.delta})) L = trial;
  }

  const Eigen::Index basis = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(q.dim())));
  VectorFunction f = X.zero();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (L.contains(i) || !b.E.contains(i)) {
      f.row(r) = (rng.coin(0.7) ? outside(q, b.t, rng) : inside(q, b.t, rng)).transpose();
    } else if (boundary) {
      f.row(r) = on_sphere(q, basis, b.t).transpose();
    } else {
      f.row(r) = inside(q, b.t, rng).transpose();
    }
  }
  return f;
}

AxiomReport verify_ball_algebra(const FunctionSpace& X, double kappa, std::size_t trials, std::uint64_t seed) {
  if (!(kappa > 0.0)) throw std::invalid_argument("verify_ball_algebra: kappa must be positive");
  AxiomReport report("ball algebra on " + X.values.describe());
  const std::size_t n = X.atoms();
  const QuasiNormSpace& q = X.values;
  const Eigen::Index d = q.dim();

  {  // Omega_{lambda f, t} = Omega_{f, t/|lambda|}
    AxiomResult r("DF2");
    Rng rng = derive(seed, "DF2");
    for (std::size_t k = 0; k < trials; ++k) {
      const double t = random_t(rng);
      VectorFunction f = X.zero();
      for (std::size_t i = 0; i < n; ++i) {
        f.row(static_cast<Eigen::Index>(i)) =
            (rng.coin() ? on_sphere(q, static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d))), t)
                        : outside(q, t * 0.25, rng))
                .transpose();
      }
      const double lambda =
          (rng.coin() ? 1.0 : -1.0) * (rng.coin() ? rng.log_uniform_pow2(-8, 8) : rng.uniform(0.1, 10.0));
      ++r.checks;
      if (!(level_set(X, VectorFunction(lambda * f), t) == level_set(X, f, t / std::abs(lambda)))) {
        r.verdict = Verdict::fail;
        r.witness = Witness{"level sets of lambda*f at t and of f at t/|lambda| differ", {}};
        r.witness->add("f", flatten(f)).add("lambda", lambda).add("t", t);
        break;
      }
    }
    report.add(std::move(r));
  }

  {  // Omega_{f+g,t} within Omega_{f,s} | Omega_{g,s}, s = t/(2 kappa)
    AxiomResult r("DF1");
    Rng rng = derive(seed, "DF1");
    for (std::size_t k = 0; k < trials; ++k) {
      const double t = random_t(rng);
      const double s = t / (2.0 * kappa);
      VectorFunction f = X.zero(), g = X.zero();
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        switch (rng.index(4)) {
          case 0: {  // disjoint basis directions on the small sphere
            const auto a = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d)));
            const Eigen::Index b = d > 1 ? (a + 1 + static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d - 1)))) % d : a;
            f.row(row) = on_sphere(q, a, s).transpose();
            g.row(row) = on_sphere(q, b, s).transpose();
            break;
          }
          case 1:
            f.row(row) = g.row(row) = on_sphere(q, static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(d))), s).transpose();
            break;
          default:
            f.row(row) = inside(q, 2.0 * s, rng).transpose();
            g.row(row) = inside(q, 2.0 * s, rng).transpose();
        }
      }
      ++r.checks;
      const Subset lhs = level_set(X, VectorFunction(f + g), t);
      const Subset rhs = level_set(X, f, s) | level_set(X, g, s);
      if (!lhs.is_subset_of(rhs)) {
        r.verdict = Verdict::fail;
        r.witness = Witness{"atom in level set of f+g at t outside both level sets at t/(2 kappa)", {}};
        r.witness->add("f", flatten(f)).add("g", flatten(g)).add("t", t).add("kappa", kappa).add("atoms", as_doubles(lhs - rhs));
        break;
      }
    }
    report.add(std::move(r));
  }

  {  // V_{E,d/2,t/(2k)} + V_{E,d/2,t/(2k)} within V_{E,d,t}
    AxiomResult r("DF4");
    Rng rng = derive(seed, "DF4");
    for (std::size_t k = 0; k < trials; ++k) {
      const L0Ball big = random_ball(X, rng);
      const L0Ball small{big.E, big.delta / 2.0, big.t / (2.0 * kappa)};
      VectorFunction f, g;
      switch (rng.index(4)) {
        case 0:
          f = g = sample_l0_member(X, small, rng, true);
          break;
        case 1: {
          // Boundary pair along different basis directions on the same atoms.
          f = sample_l0_member(X, small, rng, true);
          g = f;
          for (Eigen::Index i = 0; i < f.rows() && d > 1; ++i) {
            Eigen::Index a = 0;
            if (f.row(i).cwiseAbs().maxCoeff(&a) > 0.0 && (f.row(i).array() != 0.0).count() == 1 &&
                q.norm(f.row(i).transpose()) == small.t) {
              g.row(i) = on_sphere(q, (a + 1) % d, small.t).transpose();
            }
          }
          break;
        }
        default:
          f = sample_l0_member(X, small, rng, rng.coin());
          g = sample_l0_member(X, small, rng, rng.coin());
      }
      if (!ball_member(X, small, f) || !ball_member(X, small, g)) continue;
      ++r.checks;
      if (!ball_member(X, big, f + g)) {
        r.verdict = Verdict::fail;
        r.witness = ball_witness("f, g in V_{E,delta/2,t/(2 kappa)} but f+g not in V_{E,delta,t}", big);
        r.witness->add("f", flatten(f)).add("g", flatten(g)).add("kappa", kappa);
        break;
      }
    }
    report.add(std::move(r));
  }

  {  // mu(A\E) <= eps  =>  V_{E,d,t} within V_{A,d+eps,t}
    AxiomResult r("AlmostInclusion");
    Rng rng = derive(seed, "AlmostInclusion");
    for (std::size_t k = 0; k < trials; ++k) {
      const L0Ball b = random_ball(X, rng);
      const Subset A = random_subset(n, rng);
      double eps = measure_of(X.measure, A - b.E).value();
      if (rng.coin(0.3)) eps += rng.uniform(0.0, 0.5);
      while (X.measure.compare_measure(A - b.E, {eps}) > 0) eps = std::nextafter(eps, INFINITY);
      if (eps == 0.0) eps = rng.uniform(0.0, 0.1);
      if (eps == 0.0) continue;
      const VectorFunction f = sample_l0_member(X, b, rng, rng.coin());
      ++r.checks;
      if (!X.measure.measure_below(A & level_set(X, f, b.t), {b.delta, eps})) {
        r.verdict = Verdict::fail;
        r.witness = ball_witness("f in V_{E,delta,t} but not in V_{A,delta+eps,t}", b);
        r.witness->add("A", as_doubles(A)).add("eps", eps).add("f", flatten(f));
        break;
      }
    }
    report.add(std::move(r));
  }

  {  // t1 <= t, d1 <= d  =>  V_{E,d1,t1} within V_{E,d,t}
    AxiomResult r("Monotonicity");
    Rng rng = derive(seed, "Monotonicity");
    for (std::size_t k = 0; k < trials; ++k) {
      const L0Ball b = random_ball(X, rng);
      L0Ball b1 = b;
      if (rng.coin(0.8)) b1.t = b.t * rng.uniform();
      if (rng.coin(0.8)) b1.delta = b.delta * rng.uniform();
      if (!(b1.t > 0.0) || !(b1.delta > 0.0)) continue;
      const VectorFunction f = sample_l0_member(X, b1, rng, rng.coin());
      ++r.checks;
      if (!ball_member(X, b, f)) {
        r.verdict = Verdict::fail;
        r.witness = ball_witness("member of the smaller ball outside the larger ball", b);
        r.witness->add("delta1", b1.delta).add("t1", b1.t).add("f", flatten(f));
        break;
      }
    }
    report.add(std::move(r));
  }
  return report;
}

bool is_directed_to(const SetFamily& F, const Subset& omega0, const MeasureSpace& space) {
  space.check_subset(omega0);
  Subset cover(space.size());
  for (const Subset& A : F.members) {
    space.check_subset(A);
    // Positive weights: a null set is empty.
    if (!A.is_subset_of(omega0)) return false;
    cover = cover | A;
  }
  for (const Subset& A : F.members) {
    for (const Subset& B : F.members) {
      const Subset AB = A | B;
      const bool dominated = std::any_of(F.members.begin(), F.members.end(),
                                         [&](const Subset& D) { return AB.is_subset_of(D); });
      if (!dominated) return false;
    }
  }
  return omega0.is_subset_of(cover);
}

bool precedes(const SetFamily& F1, const SetFamily& F2, const MeasureSpace& space) {
  for (const Subset& A : F1.members) {
    space.check_subset(A);
    const bool covered = std::any_of(F2.members.begin(), F2.members.end(), [&](const Subset& B) {
      space.check_subset(B);
      return (A - B).empty();
    });
    if (!covered) return false;
  }
  return true;
}

std::optional<std::vector<Subset>> metrizability_check(const SetFamily& F, const MeasureSpace& space) {
  if (!is_directed_to(F, Subset::full(space.size()), space)) {
    throw std::invalid_argument("metrizability_check: family is not directed to the whole space");
  }
  for (const Subset& D : F.members) {
    SetFamily chain{{D}, std::nullopt};
    if (precedes(F, chain, space)) return chain.members;
  }
  return std::nullopt;
}

}  // namespace gaugelab
