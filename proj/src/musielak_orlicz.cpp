#include "gaugelab/musielak_orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "gaugelab/derived_gauges.hpp"

namespace gaugelab {

MusielakOrliczFunction MusielakOrliczFunction::shared(std::size_t atoms, OrliczFunction F) {
  if (atoms == 0) throw std::invalid_argument("MusielakOrliczFunction: no atoms");
  MusielakOrliczFunction M;
  M.slices_.assign(atoms, F);
  return M;
}

MusielakOrliczFunction MusielakOrliczFunction::per_atom(std::vector<OrliczFunction> slices) {
  if (slices.empty()) throw std::invalid_argument("MusielakOrliczFunction: no atoms");
  MusielakOrliczFunction M;
  M.slices_ = std::move(slices);
  return M;
}

MusielakOrliczFunction MusielakOrliczFunction::variable_exponent(std::vector<double> exponents) {
  if (exponents.empty()) throw std::invalid_argument("MusielakOrliczFunction: no atoms");
  MusielakOrliczFunction M;
  for (double p : exponents) M.slices_.push_back(OrliczFunction::power(p));
  M.variable_exponent_ = true;
  return M;
}

std::optional<std::vector<double>> MusielakOrliczFunction::exponents() const {
  std::vector<double> out;
  for (const auto& F : slices_) {
    const auto p = F.power_exponent();
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  return out;
}

std::string MusielakOrliczFunction::describe() const {
  const bool uniform = std::all_of(slices_.begin(), slices_.end(),
                                   [&](const OrliczFunction& F) { return F.describe() == slices_[0].describe(); });
  if (uniform) return slices_[0].describe();
  std::ostringstream os;
  os << (variable_exponent_ ? "variable-exponent[" : "per-atom[");
  for (std::size_t i = 0; i < slices_.size(); ++i) os << (i ? ", " : "") << slices_[i].describe();
  os << "]";
  return os.str();
}

namespace {

void require_atoms(const MusielakOrliczFunction& M, const MeasureSpace& space) {
  if (M.atoms() != space.size()) {
    throw std::invalid_argument("Musielak-Orlicz function has " + std::to_string(M.atoms()) +
                                " slices, space has " + std::to_string(space.size()) + " atoms");
  }
}

PlusFunction compose(const MusielakOrliczFunction& M, const PlusFunction& f) {
  PlusFunction out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = M(i, f[i]);
  return out;
}

}  // namespace

ExtReal rho_M(const MusielakOrliczFunction& M, const PlusFunction& f, const MeasureSpace& space) {
  require_atoms(M, space);
  return integrate(space, compose(M, f));
}

ExtReal nu_M(const MusielakOrliczFunction& M, const Subset& A, double t, const MeasureSpace& space) {
  require_atoms(M, space);
  if (!(t >= 0.0)) throw std::domain_error("nu_M: t must be nonnegative");
  return integrate(space, compose(M, PlusFunction(space.size(), t)), A);
}

std::optional<double> find_u(const MusielakOrliczFunction& M, const MeasureSpace& space) {
  require_atoms(M, space);
  for (int k = -1000; k <= 1000; ++k) {
    const double u = std::ldexp(1.0, k);
    bool ok = true;
    for (std::size_t i = 0; i < M.atoms() && ok; ++i) {
      const ExtReal v = M(i, u);
      ok = !v.is_zero() && v.is_finite();
    }
    if (ok && nu_M(M, Subset::full(space.size()), u, space).is_finite()) return u;
  }
  return std::nullopt;
}

Gauge make_musielak_gauge(const MeasureSpace& space, const MusielakOrliczFunction& M, std::string name) {
  require_atoms(M, space);
  GaugeTraits traits;
  traits.convexity_pair = ConvexityPair{1.0, 2.0};
  traits.fatou = 1.0;
  traits.integrand = [M](std::size_t i, ExtReal t) { return M(i, t); };
  if (const auto ps = M.exponents()) {
    double lo = INFINITY, hi = 0.0;
    bool has_inf = false;
    for (double p : *ps) {
      if (std::isinf(p)) {
        has_inf = true;
      } else {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
    }
    traits.homogeneous = !has_inf && lo == 1.0 && hi == 1.0;
    traits.delta = [lo, hi, has_inf](double t) -> ExtReal {
      if (t == 1.0) return 1.0;
      if (t > 1.0) return has_inf ? ExtReal::infinity() : ExtReal(std::pow(t, hi));
      return std::isinf(lo) ? ExtReal(0.0) : ExtReal(std::pow(t, lo));
    };
  }
  if (name.empty()) name = "rho_M[" + M.describe() + "]";
  return Gauge(std::move(name), space, [M, space](const PlusFunction& f) { return rho_M(M, f, space); },
               std::move(traits));
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int k = -240; k <= 240; ++k) g.push_back(std::exp2(k / 4.0));
  return g;
}

DoublingResult doubling_constant(const MusielakOrliczFunction& M, const std::vector<double>& grid) {
  DoublingResult out;
  if (const auto ps = M.exponents()) {
    const double hi = *std::max_element(ps->begin(), ps->end());
    if (std::isfinite(hi)) {
      out.D = std::exp2(hi);
      out.closed_form = true;
      return out;
    }
  }
  double D = 0.0;
  for (std::size_t i = 0; i < M.atoms(); ++i) {
    for (double s : grid) {
      const ExtReal a = M(i, s), b = M(i, 2.0 * s);
      if (b.is_zero() || a.is_infinite()) continue;
      if (a.is_zero() || b.is_infinite()) {
        Witness w{"M(omega, 2s) / M(omega, s) unbounded", {}};
        w.add("atom", static_cast<double>(i)).add("s", s).add("M(s)", a.value()).add("M(2s)", b.value());
        out.witness = std::move(w);
        return out;
      }
      double r = b.value() / a.value();
      if (r * a.value() < b.value()) r = std::nextafter(r, INFINITY);
      D = std::max(D, r);
    }
  }
  out.D = D;
  return out;
}

PcoResult pco_constants(const MusielakOrliczFunction& M, const std::vector<double>& grid,
                        const std::vector<double>& c_candidates) {
  PcoResult out;
  double a = INFINITY;
  bool closed = true;
  for (std::size_t i = 0; i < M.atoms() && closed; ++i) {
    const auto ai = M.slice(i).convexity_exponent();
    if (!ai) {
      closed = false;
    } else if (std::isfinite(*ai)) {
      a = std::min(a, *ai);
    }
  }
  if (closed && std::isfinite(a)) {
    out.cd = std::make_pair(0.5, std::pow(0.5, a));
    out.closed_form = true;
    return out;
  }
  for (double c : c_candidates) {
    double d = 0.0;
    for (std::size_t i = 0; i < M.atoms(); ++i) {
      for (double s : grid) {
        const ExtReal lo = M(i, c * s), hi = M(i, s);
        if (hi.is_zero() || hi.is_infinite()) continue;
        if (lo.is_infinite()) {
          d = INFINITY;
          continue;
        }
        double r = lo.value() / hi.value();
        if (r * hi.value() < lo.value()) r = std::nextafter(r, INFINITY);
        d = std::max(d, r);
      }
    }
    // A ratio within rounding of 1 is the limit F(cs)/F(s) -> 1, not a gain.
    if (d < 1.0 - 1e-9) {
      out.cd = std::make_pair(c, d);
      return out;
    }
  }
  return out;
}

bool pointwise_pair_bound(const MusielakOrliczFunction& M, const std::vector<double>& grid, Witness* witness) {
  for (std::size_t i = 0; i < M.atoms(); ++i) {
    for (std::size_t a = 0; a < grid.size(); a += 4) {
      for (std::size_t b = a; b < grid.size(); b += 4) {
        const double s = grid[a], t = grid[b];
        if (!(M(i, s + t) <= max(M(i, 2.0 * s), M(i, 2.0 * t)))) {
          if (witness) {
            *witness = Witness{"M(s+t) > max(M(2s), M(2t))", {}};
            witness->add("atom", static_cast<double>(i)).add("s", s).add("t", t);
          }
          return false;
        }
      }
    }
  }
  return true;
}

bool ball_member_M(const MusielakOrliczFunction& M, double eps, const VectorFunction& f, const FunctionSpace& X) {
  if (!(eps > 0.0)) throw std::domain_error("ball_member_M: eps must be positive");
  return rho_M(M, pointwise_norm(X, f), X.measure) < ExtReal(eps);
}

bool ball_member(const FunctionSpace& X, const GaugeBall& b, const VectorFunction& f) {
  if (!(b.eps > 0.0) || !(b.u > 0.0)) throw std::domain_error("GaugeBall: eps and u must be positive");
  return b.gauge(pointwise_norm(X, f / b.u)) < ExtReal(b.eps);
}

namespace {

VectorFunction random_vector_function(const FunctionSpace& X, Rng& rng) {
  VectorFunction f = X.zero();
  const std::size_t design = rng.index(3);
  const std::size_t spike = rng.index(X.atoms());
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (design == 1 && static_cast<std::size_t>(i) != spike) continue;
    if (design == 2 && rng.coin()) continue;
    const double scale = rng.log_uniform_pow2(-6, 6);
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = scale * rng.normal();
  }
  return f;
}

/// Largest scale 2^(j/16) keeping f inside the ball, optionally shrunk further.
template <typename Member>
VectorFunction push_into(const VectorFunction& f, const Member& member, Rng& rng) {
  int lo = -16000, hi = 960;
  auto at = [&](int j) -> VectorFunction { return f * std::exp2(j / 16.0); };
  if (member(at(hi))) return at(hi);
  if (!member(at(lo))) return f * 0.0;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (member(at(mid)) ? lo : hi) = mid;
  }
  VectorFunction g = at(lo);
  if (rng.coin(0.3)) g *= rng.uniform();
  return g;
}

Witness function_witness(const char* text, const VectorFunction& f, double eps) {
  Witness w{text, {}};
  w.add("f", std::vector<double>(f.data(), f.data() + f.size())).add("rows", static_cast<double>(f.rows()));
  w.add("eps", eps);
  return w;
}

std::string eps_key(const char* what, double eps) {
  std::ostringstream os;
  os << what << "(eps=" << eps << ")";
  return os.str();
}

void require_equal_on(const MusielakOrliczFunction& M, const MusielakOrliczFunction& N, double t0, bool above,
                      AxiomResult& pre) {
  for (std::size_t i = 0; i < M.atoms(); ++i) {
    for (int k = 0; k <= 400; ++k) {
      const double s = above ? t0 * std::exp2(k / 4.0) : t0 * std::exp2(-k / 4.0);
      ++pre.checks;
      if (!(M(i, s) == N(i, s))) {
        pre.verdict = Verdict::fail;
        pre.note = above ? "M and N differ on [t0, inf)" : "M and N differ on (0, t0]";
        Witness w{pre.note, {}};
        w.add("atom", static_cast<double>(i)).add("s", s);
        pre.witness = std::move(w);
        return;
      }
    }
  }
}

}  // namespace

AxiomReport equivalence_near_origin(const MusielakOrliczFunction& M, const MusielakOrliczFunction& N, double t0,
                                    const FunctionSpace& X, const EquivalenceOptions& opts) {
  if (!X.measure.is_counting()) {
    throw std::invalid_argument("equivalence_near_origin: requires counting measure");
  }
  require_atoms(M, X.measure);
  require_atoms(N, X.measure);
  if (!(t0 > 0.0) || std::isinf(t0)) throw std::domain_error("equivalence_near_origin: t0 must lie in (0, inf)");
  AxiomReport report("near-origin " + M.describe() + " vs " + N.describe());

  AxiomResult pre("precondition");
  require_equal_on(M, N, t0, false, pre);
  std::optional<double> u0;
  double R0 = 0.0;
  for (int k = 0; k <= 60 && !u0; ++k) {
    const double u = std::ldexp(t0, k);
    ExtReal r = ExtReal::infinity();
    for (std::size_t i = 0; i < M.atoms(); ++i) r = min(r, M(i, u));
    if (!r.is_zero()) {
      u0 = u;
      R0 = r.is_infinite() ? std::numeric_limits<double>::max() : r.value();
    }
  }
  if (!u0) {
    pre.verdict = Verdict::fail;
    pre.note = "inf over atoms of M(omega, u) is 0 for every probed u >= t0";
  } else {
    pre.values.emplace_back("u0", *u0);
    pre.values.emplace_back("R0", R0);
  }
  const bool ok = pre.passed();
  report.add(std::move(pre));

  AxiomResult inc("inclusion");
  if (!ok) {
    inc.verdict = Verdict::skipped;
    inc.note = "precondition failed";
    report.add(std::move(inc));
    return report;
  }
  const double c = t0 / *u0;
  for (double eps : opts.eps_grid) {
    if (eps > R0) {
      ++inc.skipped;
      inc.values.emplace_back(eps_key("skipped", eps), eps);
      continue;
    }
    Rng rng = derive(opts.seed, eps_key("near-origin", eps));
    auto member = [&](const VectorFunction& g) { return ball_member_M(M, eps, g, X); };
    for (std::size_t s = 0; s < opts.samples; ++s) {
      const VectorFunction f = push_into(random_vector_function(X, rng), member, rng);
      ++inc.checks;
      if (!ball_member_M(N, eps, c * f, X) && inc.verdict != Verdict::fail) {
        inc.verdict = Verdict::fail;
        inc.witness = function_witness("f in B_M(eps) but (t0/u0) f not in B_N(eps)", f, eps);
      }
    }
  }
  report.add(std::move(inc));
  return report;
}

AxiomReport equivalence_near_infinity(const MusielakOrliczFunction& M, const MusielakOrliczFunction& N, double t0,
                                      const FunctionSpace& X, const EquivalenceOptions& opts) {
  const MeasureSpace& space = X.measure;
  require_atoms(M, space);
  require_atoms(N, space);
  const std::size_t n = space.size();
  if (n > 20) throw std::invalid_argument("equivalence_near_infinity: subset search limited to 20 atoms");
  if (!(t0 > 0.0) || std::isinf(t0)) throw std::domain_error("equivalence_near_infinity: t0 must lie in (0, inf)");
  AxiomReport report("near-infinity " + M.describe() + " vs " + N.describe());
  const Subset omega = Subset::full(n);

  AxiomResult pre("precondition");
  require_equal_on(M, N, t0, true, pre);
  if (pre.passed() && !(M(0, ExtReal::infinity()) == N(0, ExtReal::infinity()))) {
    pre.verdict = Verdict::fail;
    pre.note = "M and N differ at infinity";
  }
  if (nu_M(M, omega, t0, space).is_infinite()) {
    pre.verdict = Verdict::fail;
    pre.note = "nu_M(Omega, t0) is infinite";
  }
  const bool ok = pre.passed();

  AxiomResult inc("inclusion"), three("three-term"), cheb("Chebyshev");
  if (!ok) {
    report.add(std::move(pre));
    for (AxiomResult* r : {&inc, &three, &cheb}) {
      r->verdict = Verdict::skipped;
      r->note = "precondition failed";
      report.add(std::move(*r));
    }
    return report;
  }

  for (double eps : opts.eps_grid) {
    const double third = eps / 3.0;
    std::optional<double> u;
    for (int k = 0; k <= 1070 && !u; ++k) {
      const double cand = std::ldexp(t0, -k);
      if (cand > 0.0 && nu_M(N, omega, cand, space) < ExtReal(third)) u = cand;
    }
    if (!u) {
      pre.verdict = Verdict::fail;
      pre.note = "no u <= t0 with nu_N(Omega, u) < eps/3";
      pre.values.emplace_back(eps_key("u", eps), 0.0);
      continue;
    }
    // delta(eps/3, u): nu_M(A, u) < delta forces nu_N(A, t0) < eps/3.
    ExtReal delta = ExtReal::infinity();
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const Subset A = Subset::from_mask(n, m);
      if (nu_M(N, A, t0, space) >= ExtReal(third)) delta = min(delta, nu_M(M, A, *u, space));
    }
    pre.values.emplace_back(eps_key("u", eps), *u);
    pre.values.emplace_back(eps_key("delta", eps), delta.value());
    const double radius = std::min(third, delta.value());
    if (radius == 0.0) {
      inc.verdict = Verdict::fail;
      inc.note = "delta(eps/3, u) = 0";
      continue;
    }

    Rng rng = derive(opts.seed, eps_key("near-infinity", eps));
    auto member = [&](const VectorFunction& g) { return ball_member_M(M, radius, g, X); };
    for (std::size_t s = 0; s < opts.samples; ++s) {
      const VectorFunction f = push_into(random_vector_function(X, rng), member, rng);
      const PlusFunction nf = pointwise_norm(X, f);
      ++inc.checks;
      if (!(rho_M(N, nf, space) < ExtReal(eps)) && inc.verdict != Verdict::fail) {
        inc.verdict = Verdict::fail;
        inc.witness = function_witness("f in the small M-ball but not in B_N(eps)", f, eps);
      }

      const Subset L = level_set(nf, *u);
      ++cheb.checks;
      if (!(nu_M(M, L, *u, space) <= rho_M(M, nf, space)) && cheb.verdict != Verdict::fail) {
        cheb.verdict = Verdict::fail;
        cheb.witness = function_witness("nu_M(Omega_{f,u}, u) > rho_M(||f||)", f, eps);
      }

      // Per-atom terms, compared exactly.
      ++three.checks;
      ExactSum diff;
      bool rhs_inf = false, lhs_inf = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = space.weight(i);
        const ExtReal l = ExtReal(w) * N(i, nf[i]);
        ExtReal r[3] = {ExtReal(w) * N(i, *u), L.contains(i) ? ExtReal(w) * N(i, t0) : ExtReal(0.0),
                        ExtReal(w) * M(i, nf[i])};
        for (ExtReal v : r) {
          if (v.is_infinite()) {
            rhs_inf = true;
          } else {
            diff -= v.value();
          }
        }
        if (l.is_infinite()) {
          lhs_inf = true;
        } else {
          diff += l.value();
        }
      }
      const bool holds = rhs_inf || (!lhs_inf && diff.sign() <= 0);
      if (!holds && three.verdict != Verdict::fail) {
        three.verdict = Verdict::fail;
        three.witness = function_witness("three-term bound violated", f, eps);
      }
    }
  }
  report.add(std::move(pre));
  for (AxiomResult* r : {&inc, &three, &cheb}) report.add(std::move(*r));
  return report;
}

MusielakOrliczFunction l0f_as_musielak(const PlusFunction& phi, const OrliczFunction& F, const MeasureSpace& space) {
  if (phi.size() != space.size()) throw std::invalid_argument("l0f_as_musielak: phi does not live on the space");
  std::vector<OrliczFunction> slices;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i].is_infinite()) throw std::invalid_argument("l0f_as_musielak: phi is not integrable");
    if (phi[i].is_zero()) throw std::invalid_argument("l0f_as_musielak: phi must be strictly positive");
    slices.push_back(OrliczFunction::scaled(F, phi[i].value(), 1.0));
  }
  if (!(F.at_infinity() == ExtReal(1.0))) throw std::invalid_argument("l0f_as_musielak: F(inf) must equal 1");
  return MusielakOrliczFunction::per_atom(std::move(slices));
}

AxiomReport l0f_inclusion_check(const PlusFunction& phi, const OrliczFunction& F, const FunctionSpace& X, double eps,
                                std::size_t samples, std::uint64_t seed) {
  const MeasureSpace& space = X.measure;
  const MusielakOrliczFunction M = l0f_as_musielak(phi, F, space);
  const std::size_t n = space.size();
  if (n > 20) throw std::invalid_argument("l0f_inclusion_check: subset search limited to 20 atoms");
  std::ostringstream subject;
  subject << "L0 neighborhoods inside B_M(" << eps << ")";
  AxiomReport report(subject.str());
  const double third = eps / 3.0;
  const ExtReal total = integrate(space, phi);

  AxiomResult params("parameters");
  // E: heaviest atoms first until the tail integral drops below eps/3.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return space.weight(a) * phi[a].value() > space.weight(b) * phi[b].value();
  });
  Subset E(n);
  for (std::size_t k = 0; !(integrate(space, phi, Subset::full(n) - E) < ExtReal(third)); ++k) E.insert(order[k]);
  double t = 0.0;
  for (int k = 0; k <= 1074 && t == 0.0; ++k) {
    if (F(std::ldexp(1.0, -k)) * total < ExtReal(third)) t = std::ldexp(1.0, -k);
  }
  if (t == 0.0) {
    params.verdict = Verdict::fail;
    params.note = "no t with F(t) * integral(phi) < eps/3";
    report.add(std::move(params));
    return report;
  }
  ExtReal delta = ExtReal(2.0 * space.total_mass());
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const Subset B = Subset::from_mask(n, m);
    if (integrate(space, phi, B) >= ExtReal(third)) delta = min(delta, measure_of(space, B));
  }
  params.values.emplace_back("|E|", static_cast<double>(E.count()));
  params.values.emplace_back("t", t);
  params.values.emplace_back("delta", delta.value());
  report.add(std::move(params));

  const L0Ball ball{E, delta.value(), t};
  AxiomResult inc("inclusion"), three("three-term");
  three.note = "relative slack 1e-12";
  Rng rng = derive(seed, "l0f-inclusion");
  const Subset rest = Subset::full(n) - E;
  const ExtReal tail = integrate(space, phi, rest);
  const ExtReal small = F(t) * total;
  for (std::size_t s = 0; s < samples; ++s) {
    const VectorFunction f = sample_l0_member(X, ball, rng, rng.coin(0.25));
    const PlusFunction nf = pointwise_norm(X, f);
    const ExtReal rho = rho_M(M, nf, space);
    ++inc.checks;
    if (!(rho < ExtReal(eps)) && inc.verdict != Verdict::fail) {
      inc.verdict = Verdict::fail;
      inc.witness = function_witness("f in V_{E,delta,t} but rho_M(||f||) >= eps", f, eps);
    }
    const ExtReal bound = tail + integrate(space, phi, E & level_set(nf, t)) + small;
    ++three.checks;
    if (rho.is_infinite() || rho.value() > bound.value() * (1.0 + 1e-12)) {
      if (three.verdict != Verdict::fail) three.witness = function_witness("three-term bound violated", f, eps);
      three.verdict = Verdict::fail;
    }
  }
  report.add(std::move(inc));
  report.add(std::move(three));
  return report;
}

ExtReal variable_exponent_norm(const std::vector<double>& exponents, const PlusFunction& f, const MeasureSpace& space) {
  if (exponents.size() != space.size() || f.size() != space.size()) {
    throw std::invalid_argument("variable_exponent_norm: size mismatch");
  }
  ExtReal sup = 0.0;
  PlusFunction finite_part(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(exponents[i] > 0.0)) throw std::invalid_argument("variable_exponent_norm: exponents must be positive");
    if (std::isinf(exponents[i])) {
      sup = max(sup, f[i]);
    } else {
      finite_part[i] = f[i];
    }
  }
  if (finite_part.is_zero()) return sup;
  auto modular = [&](double t) {
    ExactSum s;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (finite_part[i].is_zero()) continue;
      if (finite_part[i].is_infinite()) return false;
      const double term = space.weight(i) * std::pow(finite_part[i].value() / t, exponents[i]);
      if (std::isinf(term)) return false;
      s += term;
    }
    return s.value() < 1.0;
  };
  return max(sup, solve_infimum(modular).value);
}

}  // namespace gaugelab
