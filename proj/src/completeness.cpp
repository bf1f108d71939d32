#include "gaugelab/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace gaugelab {

namespace {

bool is_zero(const Element& x) { return (x.array() == 0.0).all(); }

Element random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Element f = Element::Zero(rows, cols);
  const std::size_t design = rng.index(3);
  const auto spike = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(rows)));
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (design == 1 && i != spike) continue;
    if (design == 2 && rng.coin()) continue;
    const double scale = rng.log_uniform_pow2(-6, 6);
    for (Eigen::Index j = 0; j < cols; ++j) f(i, j) = scale * rng.normal();
  }
  return f;
}

/// Largest scale 2^(j/16) of f inside the ball; interior draws shrink further.
Element push_into(const Element& f, const std::function<bool(const Element&)>& member, Rng& rng, bool boundary) {
  int lo = -16000, hi = 960;
  auto at = [&](int j) -> Element { return f * std::exp2(j / 16.0); };
  Element g;
  if (member(at(hi))) {
    g = at(hi);
  } else if (!member(at(lo))) {
    return Element::Zero(f.rows(), f.cols());
  } else {
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (member(at(mid)) ? lo : hi) = mid;
    }
    g = at(lo);
  }
  if (!boundary) g *= rng.uniform();
  return g;
}

std::vector<double> flat(const Element& x) { return {x.data(), x.data() + x.size()}; }

Witness element_witness(std::string text, const Element& x) {
  Witness w{std::move(text), {}};
  w.add("x", flat(x)).add("rows", static_cast<double>(x.rows()));
  return w;
}

/// Pair designs: equal boundary pair, independent boundary pair, interior pair.
std::pair<Element, Element> sample_pair(const Ball& V, Rng& rng, std::size_t trial) {
  switch (trial % 3) {
    case 0: {
      Element x = V.sample(rng, true);
      return {x, x};
    }
    case 1:
      return {V.sample(rng, true), V.sample(rng, true)};
    default:
      return {V.sample(rng, rng.coin()), V.sample(rng, rng.coin())};
  }
}

}  // namespace

Ball lp_ball(const QuasiNormSpace& q, double radius) {
  if (!(radius >= 0.0)) throw std::domain_error("lp_ball: radius must be nonnegative");
  std::ostringstream label;
  label << "{||x|| <= " << radius << "} in " << q.describe();
  auto member = [q, radius](const Element& x) {
    return x.rows() == 1 && x.cols() == q.dim() && q.norm(x.row(0)) <= radius;
  };
  return Ball{label.str(), true, member, member, [q, radius](Rng& rng, bool boundary) {
                Element x = Element::Zero(1, q.dim());
                if (rng.coin()) {
                  x(0, static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(q.dim())))) = rng.coin() ? 1.0 : -1.0;
                } else {
                  for (Eigen::Index j = 0; j < q.dim(); ++j) x(0, j) = rng.coin(0.8) ? rng.normal() : 0.0;
                  if (is_zero(x)) x(0, 0) = 1.0;
                }
                x *= radius / q.norm(x.row(0));
                while (q.norm(x.row(0)) > radius) x *= 1.0 - 0x1p-52;
                if (!boundary) x *= rng.uniform();
                return x;
              }};
}

Ball interval_ball(double eps) {
  std::ostringstream label;
  label << "[0, " << eps << "]";
  auto member = [eps](const Element& x) { return x.size() == 1 && x(0, 0) >= 0.0 && x(0, 0) <= eps; };
  return Ball{label.str(), true, member, member, [eps](Rng& rng, bool boundary) {
                Element x(1, 1);
                x(0, 0) = boundary ? eps : rng.uniform(0.0, eps);
                return x;
              }};
}

Ball zero_ball(Eigen::Index rows, Eigen::Index cols) {
  auto member = [rows, cols](const Element& x) { return x.rows() == rows && x.cols() == cols && is_zero(x); };
  return Ball{"{0}", true, member, member, [rows, cols](Rng&, bool) { return Element(Element::Zero(rows, cols)); }};
}

Ball l0_ball(const FunctionSpace& X, const L0Ball& b) {
  std::ostringstream label;
  label << "V_{E,delta,t} |E|=" << b.E.count() << " delta=" << b.delta << " t=" << b.t;
  return Ball{label.str(), false, [X, b](const Element& f) { return ball_member(X, b, f); },
              [X, b](const Element& f) {
                return X.measure.compare_measure(b.E & level_set(X, f, b.t), {b.delta}) <= 0;
              },
              [X, b](Rng& rng, bool boundary) { return sample_l0_member(X, b, rng, boundary); }};
}

Ball gauge_ball(const FunctionSpace& X, const GaugeBall& b) {
  std::ostringstream label;
  label << b.u << " B(" << b.eps << ") of " << b.gauge.name();
  auto member = [X, b](const Element& f) { return ball_member(X, b, f); };
  return Ball{label.str(), false, member,
              [X, b](const Element& f) { return b.gauge(pointwise_norm(X, f / b.u)) <= ExtReal(b.eps); },
              [X, member](Rng& rng, bool boundary) {
                return push_into(random_matrix(static_cast<Eigen::Index>(X.atoms()), X.dim(), rng), member, rng,
                                 boundary);
              }};
}

BallFamily lp_family(const QuasiNormSpace& q) {
  BallFamily fam;
  fam.name = "lp balls in " + q.describe();
  const double step = 2.0 * q.modulus();
  fam.make = [q](const BallFamily::Params& p) { return lp_ball(q, p.at(0)); };
  fam.random_params = [](Rng& rng) { return BallFamily::Params{rng.log_uniform_pow2(-6, 4) * rng.uniform(0.5, 1.0)}; };
  fam.shrink = [step](const BallFamily::Params& p, int k) { return BallFamily::Params{p.at(0) * std::pow(step, -k)}; };
  fam.random_point = [q](Rng& rng) { return random_matrix(1, q.dim(), rng); };
  fam.base = {1.0};
  for (Eigen::Index j = 0; j < q.dim(); ++j) {
    Element e = Element::Zero(1, q.dim());
    e(0, j) = 1.0;
    fam.points.push_back(e);
    fam.points.push_back(-e);
  }
  fam.points.push_back(Element::Ones(1, q.dim()));
  return fam;
}

BallFamily interval_family() {
  BallFamily fam;
  fam.name = "intervals [0, eps]";
  fam.make = [](const BallFamily::Params& p) { return interval_ball(p.at(0)); };
  fam.random_params = [](Rng& rng) { return BallFamily::Params{rng.log_uniform_pow2(-6, 4) * rng.uniform(0.5, 1.0)}; };
  fam.shrink = [](const BallFamily::Params& p, int k) { return BallFamily::Params{std::ldexp(p.at(0), -k)}; };
  fam.random_point = [](Rng& rng) { return random_matrix(1, 1, rng); };
  fam.base = {1.0};
  fam.points = {Element::Constant(1, 1, -1.0), Element::Constant(1, 1, 1.0)};
  return fam;
}

BallFamily l0_family(const FunctionSpace& X, const SetFamily& F) {
  const std::size_t n = X.atoms();
  if (F.members.empty() || !is_directed_to(F, Subset::full(n), X.measure)) {
    throw std::invalid_argument("l0_family: set family must be directed to the whole space");
  }
  BallFamily fam;
  fam.name = "V_{E,delta,t} over " + std::to_string(F.members.size()) + " sets, values " + X.values.describe();
  const double step = 2.0 * X.values.modulus();
  auto members = std::make_shared<std::vector<Subset>>(F.members);
  fam.make = [X, members](const BallFamily::Params& p) {
    return l0_ball(X, L0Ball{members->at(static_cast<std::size_t>(p.at(0))), p.at(1), p.at(2)});
  };
  fam.random_params = [X, members](Rng& rng) {
    const std::size_t idx = rng.index(members->size());
    const double mass = std::max(measure_of(X.measure, members->at(idx)).value(), X.measure.weights().minCoeff());
    return BallFamily::Params{static_cast<double>(idx), mass * rng.uniform(0.05, 1.0),
                              rng.log_uniform_pow2(-4, 4) * rng.uniform(0.5, 1.0)};
  };
  fam.shrink = [step](const BallFamily::Params& p, int k) {
    return BallFamily::Params{p.at(0), std::ldexp(p.at(1), -k), p.at(2) * std::pow(step, -k)};
  };
  fam.meet = [members](const BallFamily::Params& a, const BallFamily::Params& b) {
    const Subset AB = members->at(static_cast<std::size_t>(a.at(0))) | members->at(static_cast<std::size_t>(b.at(0)));
    std::size_t best = members->size();
    for (std::size_t j = 0; j < members->size(); ++j) {
      if (AB.is_subset_of((*members)[j]) && (best == members->size() || (*members)[j].count() < (*members)[best].count())) {
        best = j;
      }
    }
    return BallFamily::Params{static_cast<double>(best), std::min(a.at(1), b.at(1)), std::min(a.at(2), b.at(2))};
  };
  fam.random_point = [X](Rng& rng) { return random_matrix(static_cast<Eigen::Index>(X.atoms()), X.dim(), rng); };
  std::size_t top = 0;
  for (std::size_t j = 0; j < members->size(); ++j) {
    if ((*members)[j].count() > (*members)[top].count()) top = j;
  }
  fam.base = {static_cast<double>(top), X.measure.total_mass(), 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    Element e = X.zero();
    e(static_cast<Eigen::Index>(i), 0) = 1.0;
    fam.points.push_back(e);
  }
  return fam;
}

BallFamily gauge_family(const FunctionSpace& X, const Gauge& g) {
  BallFamily fam;
  fam.name = "gauge balls of " + g.name();
  fam.make = [X, g](const BallFamily::Params& p) { return gauge_ball(X, GaugeBall{g, p.at(0), 1.0}); };
  fam.random_params = [](Rng& rng) { return BallFamily::Params{rng.log_uniform_pow2(-4, 4)}; };
  fam.shrink = [](const BallFamily::Params& p, int k) { return BallFamily::Params{std::ldexp(p.at(0), -2 * k)}; };
  fam.random_point = [X](Rng& rng) { return random_matrix(static_cast<Eigen::Index>(X.atoms()), X.dim(), rng); };
  fam.base = {1.0};
  for (std::size_t i = 0; i < X.atoms(); ++i) {
    Element e = X.zero();
    e(static_cast<Eigen::Index>(i), 0) = 1.0;
    fam.points.push_back(e);
  }
  return fam;
}

AxiomReport check_local_basis_axioms(const BallFamily& fam, const LocalBasisOptions& opts) {
  AxiomReport report("local basis: " + fam.name);
  const auto note_fail = [](AxiomResult& r, Witness w) {
    if (r.verdict != Verdict::fail) r.witness = std::move(w);
    r.verdict = Verdict::fail;
  };

  {  // E.1: some B inside U and V.
    AxiomResult r("E.1");
    Rng rng = derive(opts.seed, "E.1");
    int worst = 0;
    for (std::size_t o = 0; o < opts.outer; ++o) {
      const auto U = fam.random_params(rng), V = fam.random_params(rng);
      const Ball bu = fam.make(U), bv = fam.make(V);
      std::optional<Element> bad;
      auto inside = [&](const Ball& B) {
        for (std::size_t s = 0; s < opts.trials; ++s) {
          const Element b = B.sample(rng, s % 2 == 0);
          ++r.checks;
          if (!bu.contains(b) || !bv.contains(b)) {
            bad = b;
            return false;
          }
        }
        return true;
      };
      bool found = false;
      if (fam.meet) {
        found = inside(fam.make(fam.meet(U, V)));
      } else {
        for (int k = 0; k <= opts.max_shrink && !found; ++k) {
          if (inside(fam.make(fam.shrink(U, k)))) {
            found = true;
            worst = std::max(worst, k);
          }
        }
      }
      if (!found) {
        Witness w = element_witness("no B inside U and V; sampled b escapes", bad ? *bad : Element());
        w.add("U", U).add("V", V);
        note_fail(r, std::move(w));
      }
    }
    r.values.emplace_back("max shrink level", worst);
    report.add(std::move(r));
  }

  {  // E.2: V + V inside U.
    AxiomResult r("E.2");
    Rng rng = derive(opts.seed, "E.2");
    int worst = 0;
    for (std::size_t o = 0; o < opts.outer; ++o) {
      const auto U = fam.random_params(rng);
      const Ball bu = fam.make(U);
      bool found = false;
      std::optional<std::pair<Element, Element>> bad;
      for (int k = 0; k <= opts.max_shrink && !found; ++k) {
        const Ball V = fam.make(fam.shrink(U, k));
        found = true;
        for (std::size_t s = 0; s < opts.trials && found; ++s) {
          auto [x, y] = sample_pair(V, rng, s);
          ++r.checks;
          if (!bu.contains(x + y)) {
            bad = std::make_pair(x, y);
            found = false;
          }
        }
        if (found) worst = std::max(worst, k);
      }
      if (!found) {
        Witness w = element_witness("no V with V + V inside U", bad->first);
        w.add("y", flat(bad->second)).add("U", U);
        note_fail(r, std::move(w));
      }
    }
    r.values.emplace_back("max shrink level", worst);
    report.add(std::move(r));
  }

  {  // E.3: D V inside U.
    AxiomResult r("E.3");
    Rng rng = derive(opts.seed, "E.3");
    int worst = 0;
    for (std::size_t o = 0; o < opts.outer; ++o) {
      const auto U = fam.random_params(rng);
      const Ball bu = fam.make(U);
      bool found = false;
      std::optional<std::pair<Element, double>> bad;
      for (int k = 0; k <= opts.max_shrink && !found; ++k) {
        const Ball V = fam.make(fam.shrink(U, k));
        found = true;
        for (std::size_t s = 0; s < opts.trials && found; ++s) {
          const Element x = V.sample(rng, s % 2 == 0);
          for (double lambda : opts.scalars) {
            ++r.checks;
            if (!bu.contains(lambda * x)) {
              bad = std::make_pair(x, lambda);
              found = false;
              break;
            }
          }
        }
        if (found) worst = std::max(worst, k);
      }
      if (!found) {
        Witness w = element_witness("no V with D V inside U", bad->first);
        w.add("lambda", bad->second).add("U", U);
        note_fail(r, std::move(w));
      }
    }
    r.values.emplace_back("max shrink level", worst);
    report.add(std::move(r));
  }

  std::vector<Element> points = fam.points;
  {
    Rng rng = derive(opts.seed, "points");
    for (std::size_t o = 0; o < opts.outer; ++o) points.push_back(fam.random_point(rng));
  }

  {  // E.4: x != 0 lies outside some U.
    AxiomResult r("E.4");
    int worst = 0;
    for (const Element& x : points) {
      if (is_zero(x)) continue;
      bool found = false;
      for (int k = 0; k <= opts.max_shrink && !found; ++k) {
        ++r.checks;
        if (!fam.make(fam.shrink(fam.base, k)).contains(x)) {
          found = true;
          worst = std::max(worst, k);
        }
      }
      if (!found) note_fail(r, element_witness("x != 0 lies in every probed U", x));
    }
    r.values.emplace_back("max shrink level", worst);
    report.add(std::move(r));
  }

  {  // E.5: lambda x in U for |lambda| < eps.
    AxiomResult r("E.5");
    Rng rng = derive(opts.seed, "E.5");
    double smallest = 1.0;
    for (std::size_t o = 0; o < points.size(); ++o) {
      const Element& x = points[o];
      const auto U = fam.random_params(rng);
      const Ball bu = fam.make(U);
      bool found = false;
      double bad_lambda = 0.0;
      for (int j = 0; j <= 200 && !found; ++j) {
        const double eps = std::ldexp(1.0, -j);
        std::vector<double> lambdas = {eps * (1.0 - 0x1p-30), -eps * (1.0 - 0x1p-30), eps / 2, -eps / 2};
        for (int s = 0; s < 8; ++s) lambdas.push_back(rng.uniform(-eps, eps));
        found = true;
        for (double lambda : lambdas) {
          ++r.checks;
          if (!bu.contains(lambda * x)) {
            bad_lambda = lambda;
            found = false;
            break;
          }
        }
        if (found) smallest = std::min(smallest, eps);
      }
      if (!found) {
        Witness w = element_witness("lambda x leaves U for arbitrarily small |lambda|", x);
        w.add("lambda", bad_lambda).add("U", U);
        note_fail(r, std::move(w));
      }
    }
    r.values.emplace_back("smallest eps", smallest);
    report.add(std::move(r));
  }
  return report;
}

NestingResult is_strongly_nested(const std::vector<Ball>& seq, std::size_t trials, std::uint64_t seed) {
  if (seq.size() < 2) throw std::invalid_argument("is_strongly_nested: need at least two balls");
  NestingResult out;
  Rng rng = derive(seed, "strong-nesting");
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    for (std::size_t s = 0; s < trials; ++s) {
      auto [x, y] = sample_pair(seq[n + 1], rng, s);
      ++out.checks;
      const bool mono = seq[n].contains(x);
      if (!mono || !seq[n].contains(x + y)) {
        out.nested = false;
        out.index = n;
        Witness w = element_witness(mono ? "x + y leaves V_n for x, y in V_{n+1}" : "V_{n+1} not inside V_n", x);
        w.add("y", flat(y)).add("n", static_cast<double>(n));
        out.witness = std::move(w);
        return out;
      }
    }
  }
  return out;
}

namespace {

std::string variant(const Ball& b) { return b.closed ? "V0 closed (<=)" : "V0 strict (<); limit tested against <="; }

}  // namespace

AxiomReport series_convergence_test(const std::vector<Ball>& seq, std::size_t draws, std::uint64_t seed) {
  const NestingResult nest = is_strongly_nested(seq, 64, seed);
  if (!nest.nested) {
    throw std::invalid_argument("series_convergence_test: sequence is not strongly nested at n = " +
                                std::to_string(nest.index));
  }
  const std::size_t N = seq.size() - 1;
  AxiomReport report("series convergence, depth " + std::to_string(N));
  AxiomResult tail("tail"), sum("sum-in-V0");
  sum.note = variant(seq[0]);
  double worst = -1.0;
  Rng rng = derive(seed, "series");
  for (std::size_t d = 0; d < draws; ++d) {
    std::vector<Element> x(N + 1);
    for (std::size_t n = 1; n <= N; ++n) x[n] = seq[n].sample(rng, rng.coin());
    Element T = Element::Zero(x[1].rows(), x[1].cols());
    for (std::size_t m = N; m-- > 0;) {
      T = x[m + 1] + T;
      ++tail.checks;
      if (!seq[m].contains(T)) {
        worst = std::max(worst, static_cast<double>(m));
        if (tail.verdict != Verdict::fail) {
          tail.witness = element_witness("tail sum_{n>m} x_n leaves V_m", T);
          tail.witness->add("m", static_cast<double>(m));
        }
        tail.verdict = Verdict::fail;
      }
    }
    ++sum.checks;
    if (!seq[0].contains_closure(T) && sum.verdict != Verdict::fail) {
      sum.verdict = Verdict::fail;
      sum.witness = element_witness("sum outside the closure of V_0", T);
    }
  }
  tail.values.emplace_back("depth", static_cast<double>(N));
  tail.values.emplace_back("max m checked", static_cast<double>(N - 1));
  if (worst >= 0.0) tail.values.emplace_back("max violated m", worst);
  report.add(std::move(tail));
  report.add(std::move(sum));
  return report;
}

AxiomReport increment_convergence_test(const std::vector<Ball>& seq, std::size_t draws, std::uint64_t seed,
                                       IncrementMode mode) {
  const NestingResult nest = is_strongly_nested(seq, 64, seed);
  if (!nest.nested) {
    throw std::invalid_argument("increment_convergence_test: sequence is not strongly nested at n = " +
                                std::to_string(nest.index));
  }
  const std::size_t N = seq.size() - 1;
  AxiomReport report("increment convergence, depth " + std::to_string(N));
  AxiomResult inv("invariant"), lim("limit");
  lim.note = variant(seq[0]);
  Rng rng = derive(seed, "increments");
  for (std::size_t d = 0; d < draws; ++d) {
    const Element y1 = seq[1].sample(rng, mode == IncrementMode::boundary || rng.coin());
    // inc[n] = y_{n+1} - y_n lies in V_{n+1}, n = 1..N-1.
    std::vector<Element> inc(N);
    for (std::size_t n = 1; n < N; ++n) {
      inc[n] = mode == IncrementMode::constant ? Element(Element::Zero(y1.rows(), y1.cols()))
                                               : seq[n + 1].sample(rng, mode == IncrementMode::boundary || rng.coin());
    }
    for (std::size_t n = 1; n < N; ++n) {
      Element S = Element::Zero(y1.rows(), y1.cols());
      for (std::size_t j = n; j < N; ++j) {
        S = S + inc[j];
        ++inv.checks;
        if (!seq[n].contains(S) && inv.verdict != Verdict::fail) {
          inv.verdict = Verdict::fail;
          inv.witness = element_witness("y_{n+k} - y_n leaves V_n", S);
          inv.witness->add("n", static_cast<double>(n)).add("k", static_cast<double>(j + 1 - n));
        }
      }
    }
    Element T = Element::Zero(y1.rows(), y1.cols());
    for (std::size_t n = N; n-- > 1;) T = inc[n] + T;
    ++lim.checks;
    if (!seq[0].contains_closure(y1 + T) && lim.verdict != Verdict::fail) {
      lim.verdict = Verdict::fail;
      lim.witness = element_witness("limit outside the closure of V_0", y1 + T);
    }
  }
  report.add(std::move(inv));
  report.add(std::move(lim));
  return report;
}

NestedSchedule make_schedule(double kappa, int depth, double ratio) {
  if (!(kappa >= 1.0) || std::isinf(kappa)) throw std::invalid_argument("make_schedule: kappa must lie in [1, inf)");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("make_schedule: ratio must lie in (0, 1)");
  if (depth < 1) throw std::invalid_argument("make_schedule: depth must be positive");
  NestedSchedule s;
  s.kappa = kappa;
  for (int n = 0; n <= depth; ++n) {
    s.t.push_back(std::pow(2.0 * kappa, -n));
    s.eps.push_back(std::pow(ratio, n));
    s.delta.push_back(std::pow(ratio, n + 1) / (1.0 - ratio));
  }
  return s;
}

std::vector<Ball> lp_sequence(const QuasiNormSpace& q, const NestedSchedule& s) {
  std::vector<Ball> out;
  for (double t : s.t) out.push_back(lp_ball(q, t));
  return out;
}

AxiomReport l0_construction_check(const FunctionSpace& X, const NestedSchedule& s, std::size_t draws,
                                  std::uint64_t seed) {
  const std::size_t N = s.t.size() - 1;
  const std::size_t n_atoms = X.atoms();
  const Subset omega = Subset::full(n_atoms);
  AxiomReport report("L0 completeness construction, depth " + std::to_string(N));
  AxiomResult measure("mu(A_j)<delta_j"), off("off-A_j"), gj("g_j");
  Rng rng = derive(seed, "l0-construction");
  for (std::size_t d = 0; d < draws; ++d) {
    std::vector<VectorFunction> f(N + 1);
    std::vector<Subset> level(N + 1);
    for (std::size_t n = 1; n <= N; ++n) {
      f[n] = sample_l0_member(X, L0Ball{omega, s.eps[n], s.t[n]}, rng, rng.coin());
      level[n] = level_set(X, f[n], s.t[n]);
    }
    Subset A(n_atoms);
    VectorFunction T = X.zero();
    for (std::size_t j = N; j-- > 0;) {
      A = A | level[j + 1];
      T = f[j + 1] + T;
      ++measure.checks;
      if (!X.measure.measure_below(A, {s.delta[j]}) && measure.verdict != Verdict::fail) {
        measure.verdict = Verdict::fail;
        Witness w{"mu(A_j) >= delta_j", {}};
        w.add("j", static_cast<double>(j)).add("mu(A_j)", measure_of(X.measure, A).value());
        measure.witness = std::move(w);
      }
      const PlusFunction norms = pointwise_norm(X, T);
      for (std::size_t i = 0; i < n_atoms; ++i) {
        if (A.contains(i)) continue;
        ++off.checks;
        if (!(norms[i] <= ExtReal(s.t[j])) && off.verdict != Verdict::fail) {
          off.verdict = Verdict::fail;
          off.witness = element_witness("tail leaves W_j off A_j", T);
          off.witness->add("j", static_cast<double>(j)).add("atom", static_cast<double>(i));
        }
      }
      const Subset G = level_set(norms, s.t[j]);
      ++gj.checks;
      if ((!G.is_subset_of(A) || !X.measure.measure_below(G, {s.delta[j]})) && gj.verdict != Verdict::fail) {
        gj.verdict = Verdict::fail;
        gj.witness = element_witness("g_j outside V_{Omega, delta_j, t_j}", T);
        gj.witness->add("j", static_cast<double>(j));
      }
    }
  }
  measure.values.emplace_back("depth", static_cast<double>(N));
  report.add(std::move(measure));
  report.add(std::move(off));
  report.add(std::move(gj));
  return report;
}

std::optional<double> unit_pair_constant(const Gauge& g) {
  const auto& pair = g.traits().convexity_pair;
  if (!pair) return std::nullopt;
  if (pair->r <= 1.0) return pair->k;
  if (!g.traits().delta) return std::nullopt;
  const ExtReal d = g.traits().delta(pair->r);
  if (d.is_infinite()) return std::nullopt;
  return pair->k * d.value();
}

namespace {

struct GaugeConstants {
  double k, kappa0;
  std::function<ExtReal(double)> delta;
};

GaugeConstants gauge_constants(const FunctionSpace& X, const Gauge& g, const char* who) {
  const auto k = unit_pair_constant(g);
  if (!k || !g.traits().delta) {
    throw std::invalid_argument(std::string(who) + ": gauge needs a convexity pair and a closed-form Delta");
  }
  return {*k, X.values.modulus(), g.traits().delta};
}

}  // namespace

std::vector<Ball> gauge_sequence(const FunctionSpace& X, const Gauge& g, double eps0, int depth) {
  const GaugeConstants c = gauge_constants(X, g, "gauge_sequence");
  const ExtReal d = c.delta(c.kappa0);
  if (d.is_infinite()) throw std::invalid_argument("gauge_sequence: Delta(kappa_0) is infinite");
  const double ratio = 2.0 * c.k * d.value();
  std::vector<Ball> out;
  double eps = eps0;
  for (int n = 0; n <= depth; ++n) {
    out.push_back(gauge_ball(X, GaugeBall{g, eps, 1.0}));
    double next = eps / ratio;
    if (next * ratio > eps) next = std::nextafter(next, 0.0);
    eps = next;
  }
  return out;
}

AxiomReport gauge_series_check(const FunctionSpace& X, const Gauge& g, int depth, std::size_t draws,
                               std::uint64_t seed) {
  const GaugeConstants c = gauge_constants(X, g, "gauge_series_check");
  const double F = g.traits().fatou.value_or(1.0);
  const auto N = static_cast<std::size_t>(depth);
  std::vector<double> eps(N + 1, 0.0), delta(N + 2, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    const ExtReal d = c.delta(std::pow(c.kappa0, static_cast<double>(n)));
    if (d.is_infinite()) throw std::invalid_argument("gauge_series_check: Delta(kappa_0^n) is infinite");
    eps[n] = std::pow(c.k, -static_cast<double>(n)) / d.value() * std::ldexp(1.0, -static_cast<int>(n));
  }
  for (std::size_t k = 1; k <= N; ++k) delta[k] = std::ldexp(1.0, 1 - static_cast<int>(k));

  AxiomReport report("gauge series, depth " + std::to_string(N));
  AxiomResult bound("tail-bound"), conv("convergence");
  bound.note = conv.note = "relative slack 1e-9";
  Rng rng = derive(seed, "gauge-series");
  for (std::size_t d = 0; d < draws; ++d) {
    std::vector<VectorFunction> f(N + 1);
    for (std::size_t n = 1; n <= N; ++n) f[n] = gauge_ball(X, GaugeBall{g, eps[n], 1.0}).sample(rng, rng.coin());
    PlusFunction H(X.atoms());
    VectorFunction T = X.zero();
    for (std::size_t k = N; k >= 1; --k) {
      H = H + pointwise_norm(X, f[k]).scaled(std::pow(c.kappa0, static_cast<double>(k)));
      T = f[k] + T;
      const double cap = F * delta[k] * (1.0 + 1e-9);
      ++bound.checks;
      if (!(g(H) <= ExtReal(cap)) && bound.verdict != Verdict::fail) {
        bound.verdict = Verdict::fail;
        Witness w{"rho(sum kappa_0^n ||f_n||) > F delta_k", {}};
        w.add("k", static_cast<double>(k)).add("rho", g(H).value());
        bound.witness = std::move(w);
      }
      ++conv.checks;
      if (!(g(pointwise_norm(X, T)) <= ExtReal(cap)) && conv.verdict != Verdict::fail) {
        conv.verdict = Verdict::fail;
        conv.witness = element_witness("rho(||sum_{n>=k} f_n||) > F delta_k", T);
        conv.witness->add("k", static_cast<double>(k));
      }
    }
  }
  bound.values.emplace_back("k", c.k);
  bound.values.emplace_back("kappa0", c.kappa0);
  bound.values.emplace_back("F", F);
  report.add(std::move(bound));
  report.add(std::move(conv));
  return report;
}

AxiomReport l0_continuity_check(const FunctionSpace& X, const Gauge& g, const L0Ball& ball, std::size_t samples,
                                std::uint64_t seed) {
  X.measure.check_subset(ball.E);
  const std::size_t n = X.atoms();
  AxiomReport report("gauge balls inside V_{E,delta,t}");
  AxiomResult params("parameters"), inc("inclusion");
  const std::vector<std::size_t> idx = ball.E.indices();
  if (idx.size() > 20) throw std::invalid_argument("l0_continuity_check: subset search limited to 20 atoms");

  std::optional<double> u;
  for (int k = -60; k <= 60 && !u; ++k) {
    const double cand = std::ldexp(1.0, k);
    bool ok = g(PlusFunction::indicator(ball.E, cand)).is_finite();
    for (std::size_t i : idx) ok = ok && !g(PlusFunction::indicator(Subset::of(n, {i}), cand)).is_zero();
    if (ok) u = cand;
  }
  if (!u) {
    params.verdict = Verdict::fail;
    params.note = "no dyadic u_E";
    report.add(std::move(params));
    return report;
  }
  ExtReal eps = ExtReal::infinity();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << idx.size()); ++m) {
    Subset A(n);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if ((m >> b) & 1u) A.insert(idx[b]);
    }
    if (!X.measure.measure_below(A, {ball.delta})) eps = min(eps, g(PlusFunction::indicator(A, *u)));
  }
  if (eps.is_infinite()) eps = 1.0;
  params.values.emplace_back("u_E", *u);
  params.values.emplace_back("eps", eps.value());
  if (eps.is_zero()) {
    params.verdict = Verdict::fail;
    params.note = "eps = 0";
    report.add(std::move(params));
    return report;
  }
  report.add(std::move(params));

  const Ball B = gauge_ball(X, GaugeBall{g, eps.value(), 1.0});
  const double c = ball.t / *u;
  Rng rng = derive(seed, "l0-continuity");
  for (std::size_t s = 0; s < samples; ++s) {
    const VectorFunction f = c * B.sample(rng, rng.coin());
    ++inc.checks;
    if (!ball_member(X, ball, f) && inc.verdict != Verdict::fail) {
      inc.verdict = Verdict::fail;
      inc.witness = element_witness("(t/u_E) B_rho(eps) member outside V_{E,delta,t}", f);
    }
  }
  report.add(std::move(inc));
  return report;
}

}  // namespace gaugelab
