#include "gaugelab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaugelab {

ExtReal Gauge::operator()(const PlusFunction& f) const {
  if (f.size() != space_.size()) {
    throw std::invalid_argument("gauge '" + name_ + "': function has " + std::to_string(f.size()) +
                                " values, space has " + std::to_string(space_.size()) + " atoms");
  }
  return eval_(f);
}

ExtReal eval_gauge(const Gauge& g, const PlusFunction& f) { return g(f); }

namespace {

// Adds k*x exactly (two-product).
void add_scaled(ExactSum& s, double k, double x) {
  const double hi = k * x;
  s += hi;
  s += std::fma(k, x, -hi);
}

std::string set_name(const Subset& E) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (std::size_t i : E.indices()) {
    os << (first ? "" : ",") << i;
    first = false;
  }
  os << "}";
  return os.str();
}

std::vector<double> flatten(const PlusFunction& f) { return f.to_doubles(); }

}  // namespace

int compare_gauge(const Gauge& g, const PlusFunction& lhs, double k, const std::vector<PlusFunction>& rhs,
                  double tol) {
  const auto& M = g.traits().integrand;
  if (M) {
    const MeasureSpace& space = g.space();
    ExactSum s;
    bool lhs_inf = false, rhs_inf = false;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const ExtReal term = ExtReal(space.weight(i)) * M(i, lhs[i]);
      if (term.is_infinite()) {
        lhs_inf = true;
      } else {
        s += term.value();
      }
      for (const PlusFunction& h : rhs) {
        const ExtReal r = ExtReal(space.weight(i)) * M(i, h[i]);
        if (r.is_infinite()) {
          rhs_inf = true;
        } else if (!lhs_inf && !rhs_inf) {
          add_scaled(s, -k, r.value());
        }
      }
    }
    if (rhs_inf) return lhs_inf ? 0 : -1;
    if (lhs_inf) return 1;
    return s.sign();
  }
  const ExtReal a = g(lhs);
  ExtReal b;
  for (const PlusFunction& h : rhs) b += g(h);
  if (b.is_infinite()) return a.is_infinite() ? 0 : -1;
  if (a.is_infinite()) return 1;
  const double bound = k * b.value();
  if (a.value() > bound * (1.0 + tol)) return 1;
  return a.value() < bound ? -1 : 0;
}

PlusFunction random_plus_function(std::size_t n, Rng& rng, bool allow_inf) {
  PlusFunction f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    if (allow_inf && u < 0.04) {
      f[i] = ExtReal::infinity();
    } else if (u < 0.2) {
      f[i] = 0.0;
    } else if (u < 0.5) {
      f[i] = rng.log_uniform_pow2(-10, 10);
    } else if (u < 0.8) {
      f[i] = rng.uniform(0.0, 4.0);
    } else {
      f[i] = std::exp2(4.0 * rng.normal());
    }
  }
  return f;
}

std::vector<PlusFunction> standard_pool(const MeasureSpace& space, std::uint64_t seed, std::size_t random_count) {
  const std::size_t n = space.size();
  std::vector<Subset> sets;
  if (n <= 8) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) sets.push_back(Subset::from_mask(n, m));
  } else {
    for (std::size_t i = 0; i < n; ++i) sets.push_back(Subset::of(n, {i}));
    sets.push_back(Subset::full(n));
    Rng rng = derive(seed, "pool-sets");
    for (int k = 0; k < 32; ++k) {
      Subset s(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.coin()) s.insert(i);
      }
      if (!s.empty()) sets.push_back(s);
    }
  }
  std::vector<PlusFunction> pool;
  for (const Subset& E : sets) {
    for (int k = -12; k <= 12; ++k) {
      pool.push_back(PlusFunction::indicator(E, std::ldexp(1.0, k)));
      pool.push_back(PlusFunction::indicator(E, 1.5 * std::ldexp(1.0, k)));
    }
  }
  Rng rng = derive(seed, "pool-random");
  for (std::size_t k = 0; k < random_count; ++k) pool.push_back(random_plus_function(n, rng));
  return pool;
}

DeltaEstimate delta_at(const Gauge& g, double t, const std::vector<PlusFunction>& pool, bool use_closed_form) {
  if (!(t > 0.0) || std::isinf(t)) throw std::domain_error("delta_at: t must lie in (0, inf)");
  DeltaEstimate out;
  if (use_closed_form && g.traits().delta) {
    out.value = g.traits().delta(t);
    out.closed_form = true;
    return out;
  }
  double best = 0.0;
  bool infinite = false;
  for (const PlusFunction& f : pool) {
    const ExtReal a = g(f);
    if (a.is_infinite()) {
      ++out.skipped;
      continue;
    }
    const ExtReal b = g(f.scaled(t));
    if (a.is_zero()) {
      ++out.skipped;
      if (!b.is_zero() && !infinite) {
        infinite = true;
        out.argmax = f;
      }
      continue;
    }
    ++out.used;
    if (b.is_infinite()) {
      if (!infinite) out.argmax = f;
      infinite = true;
      continue;
    }
    const double r = b.value() / a.value();
    if (r > best) {
      best = r;
      if (!infinite) out.argmax = f;
    }
  }
  if (out.used == 0 && !infinite) {
    throw std::runtime_error("delta_at: no pool member with 0 < rho(f) < inf for gauge '" + g.name() + "'");
  }
  out.value = infinite ? ExtReal::infinity() : ExtReal(best);
  return out;
}

HomogeneityProfile classify_homogeneity(const Gauge& g, const std::vector<double>& grid,
                                        const std::vector<PlusFunction>& pool, bool use_closed_form) {
  HomogeneityProfile out;
  out.pseudo_infinity = true;
  for (double t : grid) {
    const DeltaEstimate d = delta_at(g, t, pool, use_closed_form);
    out.skipped += d.skipped;
    out.delta.emplace_back(t, d.value);
    if (t < 1.0 && d.value < ExtReal(1.0)) out.pseudo_origin = true;
    if (t > 1.0 && d.value.is_infinite()) out.pseudo_infinity = false;
  }
  return out;
}

namespace {

// u = 2^k, k = 0, -1, 1, -2, 2, ...: rho(u chi_E) < inf and rho(u chi_w) > 0 on E.
std::optional<double> find_u(const Gauge& g, const Subset& E) {
  const std::size_t n = g.space().size();
  for (int j = 0; j <= 240; ++j) {
    const int k = (j % 2 == 0) ? -(j / 2) : (j + 1) / 2;
    const double u = std::ldexp(1.0, k);
    if (g(PlusFunction::indicator(E, u)).is_infinite()) continue;
    bool positive = true;
    for (std::size_t i : E.indices()) {
      if (g(PlusFunction::indicator(Subset::of(n, {i}), u)).is_zero()) {
        positive = false;
        break;
      }
    }
    if (positive) return u;
  }
  return std::nullopt;
}

Subset random_nonempty_subset(std::size_t n, Rng& rng) {
  Subset s(n);
  while (s.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.coin()) s.insert(i);
    }
  }
  return s;
}

AxiomResult check_monotone(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("monotone");
  Rng rng = derive(o.seed, "monotone");
  const std::size_t n = g.space().size();
  for (std::size_t k = 0; k < o.trials; ++k) {
    const PlusFunction f = random_plus_function(n, rng, true);
    const PlusFunction h = random_plus_function(n, rng, true);
    const PlusFunction big = rng.coin() ? f + h : max(f, h);
    ++r.checks;
    if (compare_gauge(g, f, 1.0, {big}, o.tol) > 0) {
      r.verdict = Verdict::fail;
      r.witness = Witness{"f <= g pointwise but rho(f) > rho(g)", {}};
      r.witness->add("f", flatten(f)).add("g", flatten(big));
      r.witness->add("rho_f", g(f).value()).add("rho_g", g(big).value());
      break;
    }
  }
  return r;
}

std::pair<PlusFunction, PlusFunction> convexity_sample(std::size_t n, Rng& rng) {
  switch (rng.index(5)) {
    case 0: {
      PlusFunction f = random_plus_function(n, rng);
      return {f, f};
    }
    case 1: {  // disjoint supports
      PlusFunction f = random_plus_function(n, rng), g = random_plus_function(n, rng);
      for (std::size_t i = 0; i < n; ++i) (rng.coin() ? f : g)[i] = 0.0;
      return {f, g};
    }
    case 2: {
      const double c = rng.log_uniform_pow2(-12, 12), d = rng.log_uniform_pow2(-12, 12);
      return {PlusFunction::indicator(random_nonempty_subset(n, rng), c),
              PlusFunction::indicator(random_nonempty_subset(n, rng), d)};
    }
    default:
      return {random_plus_function(n, rng), random_plus_function(n, rng)};
  }
}

AxiomResult check_convexity_pair(const Gauge& g, std::vector<ConvexityPair> candidates, const ModularCheckOptions& o) {
  AxiomResult r("convexity-pair");
  std::stable_sort(candidates.begin(), candidates.end(), [](const ConvexityPair& a, const ConvexityPair& b) {
    return a.k * a.r < b.k * b.r || (a.k * a.r == b.k * b.r && a.r < b.r);
  });
  const std::size_t n = g.space().size();
  std::optional<ConvexityPair> chosen;
  std::optional<Witness> first_failure;
  for (const ConvexityPair& c : candidates) {
    Rng rng = derive(o.seed, "convexity-pair");
    bool ok = true;
    for (std::size_t k = 0; k < o.trials; ++k) {
      const auto [f, h] = convexity_sample(n, rng);
      ++r.checks;
      if (compare_gauge(g, f + h, c.k, {f.scaled(c.r), h.scaled(c.r)}, o.tol) > 0) {
        ok = false;
        if (!first_failure) {
          first_failure = Witness{"rho(f+g) > k (rho(r f) + rho(r g))", {}};
          first_failure->add("k", c.k).add("r", c.r).add("f", flatten(f)).add("g", flatten(h));
        }
        break;
      }
    }
    std::ostringstream key;
    key << "pair(" << c.k << "," << c.r << ")";
    r.values.emplace_back(key.str(), ok ? 1.0 : 0.0);
    if (ok && !chosen) chosen = c;
  }
  if (chosen) {
    r.constant = chosen->k;
    r.values.emplace_back("k", chosen->k);
    r.values.emplace_back("r", chosen->r);
    std::ostringstream note;
    note << "smallest passing pair (" << chosen->k << ", " << chosen->r << ")";
    r.note = note.str();
  } else {
    r.verdict = Verdict::fail;
    r.note = candidates.empty() ? "no candidate pairs supplied" : "no candidate pair passed";
    r.witness = first_failure;
  }
  return r;
}

AxiomResult check_cm(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("condition-CM");
  const MeasureSpace& space = g.space();
  const std::size_t n = space.size();
  Rng rng = derive(o.seed, "condition-CM");

  std::vector<Subset> sets{Subset::full(n)};
  for (std::size_t i = 0; i < n && sets.size() < o.max_cm_sets; ++i) sets.push_back(Subset::of(n, {i}));
  for (std::size_t tries = 0; sets.size() < o.max_cm_sets && n > 1 && tries < 8 * o.max_cm_sets; ++tries) {
    Subset E = random_nonempty_subset(n, rng);
    if (std::find(sets.begin(), sets.end(), E) == sets.end()) sets.push_back(std::move(E));
  }
  const bool exhaustive = n <= 20;
  r.note = exhaustive ? "exhaustive subset enumeration" : "sampled subsets";

  for (const Subset& E : sets) {
    const std::optional<double> u = find_u(g, E);
    if (!u) {
      r.verdict = Verdict::fail;
      r.witness = Witness{"no u_E with rho(u_E chi_E) < inf and rho(u_E chi_w) > 0 on E", {}};
      std::vector<double> idx;
      for (std::size_t i : E.indices()) idx.push_back(static_cast<double>(i));
      r.witness->add("E", idx);
      return r;
    }
    r.values.emplace_back("u_E" + set_name(E), *u);

    // rho(u_E chi_A) for A inside E.
    const std::vector<std::size_t> atoms = E.indices();
    std::vector<std::pair<Subset, ExtReal>> table;
    if (atoms.size() <= 20) {
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << atoms.size()); ++m) {
        Subset A(n);
        for (std::size_t b = 0; b < atoms.size(); ++b) {
          if ((m >> b) & 1u) A.insert(atoms[b]);
        }
        table.emplace_back(A, g(PlusFunction::indicator(A, *u)));
      }
    } else {
      for (int s = 0; s < 1 << 16; ++s) {
        Subset A(n);
        for (std::size_t i : atoms) {
          if (rng.coin()) A.insert(i);
        }
        if (!A.empty()) table.emplace_back(A, g(PlusFunction::indicator(A, *u)));
      }
    }
    r.checks += table.size();

    const double mE = measure_of(space, E).value();
    for (double frac : {0.9, 0.5, 0.25, 0.1, 0.01}) {
      const double eps = frac * mE;
      // Largest certified delta: half the smallest rho(u_E chi_A) with mu(A) > eps.
      std::optional<ExtReal> smallest;
      const Subset* arg = nullptr;
      for (const auto& [A, v] : table) {
        if (space.compare_measure(A, {eps}) > 0 && (!smallest || v < *smallest)) {
          smallest = v;
          arg = &A;
        }
      }
      if (smallest && smallest->is_zero()) {
        r.verdict = Verdict::fail;
        r.witness = Witness{"set A inside E with mu(A) > eps and rho(u_E chi_A) = 0", {}};
        std::vector<double> idx;
        for (std::size_t i : arg->indices()) idx.push_back(static_cast<double>(i));
        r.witness->add("A", idx).add("eps", eps).add("u_E", *u);
        return r;
      }
      const double delta = !smallest ? 1.0 : (smallest->is_infinite() ? 1.0 : smallest->value() / 2.0);
      for (const auto& [A, v] : table) {
        if (v <= ExtReal(delta) && space.compare_measure(A, {eps}) > 0) {
          r.verdict = Verdict::fail;
          r.witness = Witness{"rho(u_E chi_A) <= delta but mu(A) > eps", {}};
          r.witness->add("delta", delta).add("eps", eps);
          return r;
        }
      }
      std::ostringstream key;
      key << "delta" << set_name(E) << "(eps=" << eps << ")";
      r.values.emplace_back(key.str(), delta);
    }
  }
  return r;
}

AxiomResult check_vanishing(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("vanishing-dilation");
  Rng rng = derive(o.seed, "vanishing-dilation");
  const std::size_t n = g.space().size();
  const std::size_t samples = std::max<std::size_t>(20, o.trials / 10);
  for (std::size_t s = 0; s < samples; ++s) {
    const PlusFunction f = random_plus_function(n, rng);
    const ExtReal base = g(f);
    if (base.is_infinite()) {
      ++r.skipped;
      continue;
    }
    ExtReal prev = base;
    bool ok = true;
    for (int k = 25; k <= 1000 && ok; k += 25) {
      const ExtReal v = g(f.scaled(std::ldexp(1.0, -k)));
      if (v > prev && compare_gauge(g, f.scaled(std::ldexp(1.0, -k)), 1.0, {f.scaled(std::ldexp(1.0, 25 - k))}, o.tol) > 0) ok = false;
      prev = v;
    }
    ++r.checks;
    if (!ok || prev.value() > 1e-9 * std::max(base.value(), 1e-300)) {
      r.verdict = Verdict::fail;
      r.witness = Witness{"rho(t f) does not decrease to 0 as t -> 0", {}};
      r.witness->add("f", flatten(f)).add("rho(2^-1000 f)", prev.value());
      break;
    }
  }
  return r;
}

AxiomResult check_fatou(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("rough-Fatou");
  Rng rng = derive(o.seed, "rough-Fatou");
  const std::size_t n = g.space().size();
  double worst = 1.0;
  std::optional<Witness> arg;

  auto record = [&](double ratio, const PlusFunction& lim, const char* kind) {
    ++r.checks;
    if (ratio > worst) {
      worst = ratio;
      arg = Witness{std::string("chain maximizing rho(lim f_n) / lim rho(f_n): ") + kind, {}};
      arg->add("limit", flatten(lim)).add("ratio", ratio);
    }
  };
  auto ratio_of = [](ExtReal lim_val, ExtReal last) -> double {
    if (lim_val.is_zero()) return 1.0;
    if (last.is_zero() || last.is_infinite()) return last.is_infinite() ? 1.0 : INFINITY;
    if (lim_val.is_infinite()) return INFINITY;
    return lim_val.value() / last.value();
  };

  const std::size_t chains = std::max<std::size_t>(30, o.trials / 10);
  for (std::size_t c = 0; c < chains; ++c) {
    switch (c % 3) {
      case 0: {  // cumulative maxima
        PlusFunction f(n);
        for (int j = 0; j < 16; ++j) f = max(f, random_plus_function(n, rng));
        record(ratio_of(g(f), g(f)), f, "cumulative maxima");
        break;
      }
      case 1: {  // f (1 - 2^-j) increasing to f; the last term equals f in double
        const PlusFunction f = random_plus_function(n, rng);
        const PlusFunction last = f.scaled(1.0 - std::ldexp(1.0, -64));
        record(ratio_of(g(f), g(last)), f, "geometric approach");
        break;
      }
      default: {  // 2^j g increasing to infinity on supp g
        PlusFunction h = random_plus_function(n, rng);
        if (h.is_zero()) h[0] = 1.0;
        PlusFunction lim(n);
        for (std::size_t i = 0; i < n; ++i) lim[i] = h[i].is_zero() ? ExtReal{} : ExtReal::infinity();
        const ExtReal lv = g(lim);
        const ExtReal last = g(h.scaled(std::ldexp(1.0, 1000)));
        const ExtReal mid = g(h.scaled(std::ldexp(1.0, 500)));
        if (lv.is_infinite()) {
          // lim rho(f_n) = inf is inferred from growth along the chain.
          const bool diverges = last.is_infinite() || (!mid.is_zero() && last.value() >= 1e6 * mid.value());
          record(diverges ? 1.0 : INFINITY, lim, "divergent chain");
        } else {
          record(ratio_of(lv, last), lim, "chain with infinite limit function");
        }
      }
    }
  }
  r.constant = worst;
  r.values.emplace_back("F", worst);
  const double claimed = g.traits().fatou.value_or(INFINITY);
  if (std::isinf(worst) || worst > claimed * (1.0 + 1e-9)) {
    r.verdict = Verdict::fail;
    r.witness = arg;
  }
  return r;
}

AxiomResult check_g1(const Gauge& g) {
  AxiomResult r("G1");
  r.checks = 1;
  const ExtReal v = g(PlusFunction(g.space().size()));
  r.values.emplace_back("rho(0)", v.value());
  if (!v.is_zero()) {
    r.verdict = Verdict::fail;
    r.witness = Witness{"rho(0) != 0", {}};
    r.witness->add("rho(0)", v.value());
  }
  return r;
}

AxiomResult check_g2(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("G2");
  Rng rng = derive(o.seed, "G2");
  const std::size_t n = g.space().size();
  const std::size_t samples = std::max<std::size_t>(20, o.trials / 10);
  for (std::size_t s = 0; s < samples; ++s) {
    PlusFunction f = random_plus_function(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i].is_zero()) f[i] = rng.log_uniform_pow2(-10, 10);
    }
    bool found = false;
    for (int k = -1000; k <= 1000 && !found; k += 10) found = !g(f.scaled(std::ldexp(1.0, k))).is_zero();
    ++r.checks;
    if (!found) {
      r.verdict = Verdict::fail;
      r.witness = Witness{"f > 0 everywhere but rho(t f) = 0 on the whole t grid", {}};
      r.witness->add("f", flatten(f));
      break;
    }
  }
  return r;
}

AxiomResult check_g3(const Gauge& g, const ModularCheckOptions& o) {
  AxiomResult r("G3");
  Rng rng = derive(o.seed, "G3");
  const std::size_t n = g.space().size();
  const int N = 40;
  const std::size_t samples = std::max<std::size_t>(10, o.trials / 50);
  for (std::size_t s = 0; s < samples; ++s) {
    // Geometrically decaying finite terms: vanishing tails, finite sums.
    std::vector<PlusFunction> terms;
    for (int j = 1; j <= N; ++j) terms.push_back(random_plus_function(n, rng).scaled(std::ldexp(1.0, -j)));
    PlusFunction tail(n);
    std::vector<ExtReal> tails(static_cast<std::size_t>(N));
    for (int k = N - 1; k >= 0; --k) {
      tail = tail + terms[static_cast<std::size_t>(k)];
      tails[static_cast<std::size_t>(k)] = g(tail);
    }
    ++r.checks;
    const bool vanishing = tails.back().is_zero() || tails.back().value() <= 1e-6 * tails.front().value();
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) finite = finite && tail[i].is_finite();
    if (vanishing && !finite) {
      r.verdict = Verdict::fail;
      r.witness = Witness{"tails vanish but the sum is infinite somewhere", {}};
      r.witness->add("sum", flatten(tail));
      return r;
    }
  }
  // Divergent design: f_n = chi_E. Tails dominate u_E chi_E, so they stay
  // bounded below by rho(u_E chi_E) > 0 (the contrapositive).
  for (std::size_t s = 0; s < samples; ++s) {
    const Subset E = random_nonempty_subset(n, rng);
    const std::optional<double> u = find_u(g, E);
    if (!u) {
      ++r.skipped;
      continue;
    }
    const ExtReal floor_value = g(PlusFunction::indicator(E, *u));
    for (int k = 1; k <= N; ++k) {
      const double count = N - k + 1;
      if (count < *u) break;
      ++r.checks;
      const ExtReal v = g(PlusFunction::indicator(E, count));
      if (v < floor_value || floor_value.is_zero()) {
        r.verdict = Verdict::fail;
        r.witness = Witness{"tail of a divergent series below rho(u_E chi_E)", {}};
        r.witness->add("k", k).add("u_E", *u);
        return r;
      }
    }
  }
  return r;
}

}  // namespace

AxiomReport verify_modular_axioms(const Gauge& g, const std::vector<ConvexityPair>& candidates,
                                  const ModularCheckOptions& opts) {
  AxiomReport report(g.name());
  report.add(check_monotone(g, opts));
  report.add(check_convexity_pair(g, candidates, opts));
  report.add(check_cm(g, opts));
  report.add(check_vanishing(g, opts));
  report.add(check_fatou(g, opts));
  report.add(check_g1(g));
  report.add(check_g2(g, opts));
  report.add(check_g3(g, opts));
  return report;
}

namespace {

// (sum_j a_j f_j^p)^{1/p} pointwise, a_j = s_j^p.
PlusFunction p_combination(const std::vector<PlusFunction>& fs, const std::vector<double>& a, double p) {
  const std::size_t n = fs.front().size();
  PlusFunction out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    bool inf = false;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      if (a[j] == 0.0 || fs[j][i].is_zero()) continue;
      if (fs[j][i].is_infinite()) {
        inf = true;
        break;
      }
      s += a[j] * std::pow(fs[j][i].value(), p);
    }
    out[i] = inf ? ExtReal::infinity() : ExtReal(s == 0.0 ? 0.0 : std::pow(s, 1.0 / p));
  }
  return out;
}

}  // namespace

LatticeEstimate lattice_convexity_constant(const Gauge& g, double p, std::size_t trials, std::uint64_t seed,
                                           LatticeKind kind) {
  if (!(p > 0.0) || std::isinf(p)) throw std::invalid_argument("lattice constant: p must lie in (0, inf)");
  LatticeEstimate out;
  out.homogeneous_criterion = g.traits().homogeneous;
  out.constant = 0.0;
  Rng rng = derive(seed, kind == LatticeKind::convex ? "lattice-convex" : "lattice-concave");
  const std::size_t n = g.space().size();

  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t m = t == 0 ? 1 : 1 + rng.index(4);
    std::vector<PlusFunction> fs;
    const std::size_t design = rng.index(4);
    for (std::size_t j = 0; j < m; ++j) {
      if (design == 0 && j > 0) {
        fs.push_back(fs.front());
      } else {
        fs.push_back(random_plus_function(n, rng));
      }
    }
    if (design == 1) {  // disjoint supports
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t keep = rng.index(m);
        for (std::size_t j = 0; j < m; ++j) {
          if (j != keep) fs[j][i] = 0.0;
        }
      }
    }
    std::vector<double> a(m);
    double total = 0.0;
    for (double& x : a) total += (x = rng.uniform(0.05, 1.0));
    for (double& x : a) x /= total;

    std::vector<ExtReal> rhos;
    for (const auto& f : fs) rhos.push_back(g(f));
    double num = 0.0, den = 0.0;
    if (out.homogeneous_criterion) {
      const ExtReal N = g(p_combination(fs, std::vector<double>(m, 1.0), p));
      double sum = 0.0;
      bool inf = false;
      for (ExtReal r : rhos) {
        if (r.is_infinite()) inf = true;
        else sum += std::pow(r.value(), p);
      }
      const ExtReal M = inf ? ExtReal::infinity() : ExtReal(std::pow(sum, 1.0 / p));
      const ExtReal top = kind == LatticeKind::convex ? N : M;
      const ExtReal bottom = kind == LatticeKind::convex ? M : N;
      if (bottom.is_zero() || bottom.is_infinite() || top.is_infinite()) continue;
      num = top.value();
      den = bottom.value();
    } else {
      const ExtReal comb = g(p_combination(fs, a, p));
      ExtReal hi = rhos.front(), lo = rhos.front();
      for (ExtReal r : rhos) {
        hi = max(hi, r);
        lo = min(lo, r);
      }
      const ExtReal top = kind == LatticeKind::convex ? comb : lo;
      const ExtReal bottom = kind == LatticeKind::convex ? hi : comb;
      if (bottom.is_zero() || bottom.is_infinite() || top.is_infinite()) continue;
      num = top.value();
      den = bottom.value();
    }
    ++out.samples;
    const double ratio = num / den;
    if (ratio > out.constant) {
      out.constant = ratio;
      Witness w{"tuple maximizing the lattice ratio", {}};
      w.add("s^p", a);
      for (std::size_t j = 0; j < m; ++j) w.add("f" + std::to_string(j + 1), flatten(fs[j]));
      out.witness = std::move(w);
    }
  }
  return out;
}

namespace {

// Compositions of `total` into `parts` positive integers.
void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int x = 1; x <= total - parts + 1; ++x) {
    cur.push_back(x);
    compositions(total - x, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double convexification_envelope(const Gauge& g, double p, const PlusFunction& f, int depth, LatticeKind kind,
                                std::uint64_t seed) {
  if (!(p > 0.0) || std::isinf(p)) throw std::invalid_argument("convexification_envelope: p must lie in (0, inf)");
  if (depth < 1 || depth > 8) throw std::invalid_argument("convexification_envelope: depth must lie in [1, 8]");
  const std::size_t n = f.size();
  const bool convex = kind == LatticeKind::convex;
  ExtReal best = g(f);

  // Evaluates one decomposition given parts f_j and weights a_j = s_j^p.
  auto consider = [&](const std::vector<PlusFunction>& parts) {
    ExtReal agg = g(parts.front());
    for (std::size_t j = 1; j < parts.size(); ++j) {
      const ExtReal v = g(parts[j]);
      agg = convex ? max(agg, v) : min(agg, v);
    }
    best = convex ? min(best, agg) : max(best, agg);
  };
  // f_j = f chi_{B_j} / s_j.
  auto block_parts = [&](const std::vector<int>& label, const std::vector<double>& a) {
    std::vector<PlusFunction> parts(a.size(), PlusFunction(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(label[i]);
      parts[j][i] = f[i] * ExtReal(std::pow(a[j], -1.0 / p));
    }
    return parts;
  };

  Rng rng = derive(seed, "envelope");
  for (int m = 2; m <= depth; ++m) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(std::max(4, m), m, cur, comps);
    const double total = std::max(4, m);

    std::vector<std::vector<int>> labels;
    const double count = std::pow(static_cast<double>(m), static_cast<double>(n));
    if (count <= 4096) {
      std::vector<int> label(n, 0);
      for (long c = 0; c < static_cast<long>(count); ++c) {
        long x = c;
        for (std::size_t i = 0; i < n; ++i) {
          label[i] = static_cast<int>(x % m);
          x /= m;
        }
        labels.push_back(label);
      }
    } else {
      for (int s = 0; s < 256; ++s) {
        std::vector<int> label(n);
        for (auto& l : label) l = static_cast<int>(rng.index(static_cast<std::size_t>(m)));
        labels.push_back(label);
      }
    }
    for (const auto& label : labels) {
      for (const auto& comp : comps) {
        std::vector<double> a;
        for (int c : comp) a.push_back(c / total);
        consider(block_parts(label, a));
      }
      // Weights proportional to rho(f chi_B)^p.
      std::vector<double> a(static_cast<std::size_t>(m), 0.0);
      double sum = 0.0;
      bool usable = true;
      for (int j = 0; j < m; ++j) {
        PlusFunction part(n);
        for (std::size_t i = 0; i < n; ++i) {
          if (label[i] == j) part[i] = f[i];
        }
        const ExtReal v = g(part);
        if (v.is_infinite() || v.is_zero()) {
          usable = false;
          break;
        }
        sum += (a[static_cast<std::size_t>(j)] = std::pow(v.value(), p));
      }
      if (usable && sum > 0.0) {
        for (double& x : a) x /= sum;
        consider(block_parts(label, a));
      }
    }
    // Dyadic shares of f^p at each atom.
    for (int s = 0; s < 64; ++s) {
      std::vector<double> a(static_cast<std::size_t>(m));
      for (std::size_t j = 0; j < a.size(); ++j) a[j] = comps[rng.index(comps.size())][j];
      double sa = 0.0;
      for (double x : a) sa += x;
      for (double& x : a) x /= sa;
      std::vector<PlusFunction> parts(a.size(), PlusFunction(n));
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(a.size());
        double sc = 0.0;
        for (double& x : c) sc += (x = static_cast<double>(rng.index(4)));
        if (sc == 0.0) c[0] = sc = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
          parts[j][i] = f[i] * ExtReal(std::pow((c[j] / sc) / a[j], 1.0 / p));
        }
      }
      consider(parts);
    }
  }
  return best.value();
}

}  // namespace gaugelab
