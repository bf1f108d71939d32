#include "gaugelab/quasinorm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "gaugelab/random.hpp"

namespace gaugelab {

QuasiNormSpace::QuasiNormSpace(Kind kind, double p, Eigen::VectorXd weights)
    : kind_(kind), p_(p), weights_(std::move(weights)) {
  if (!(p_ > 0.0)) throw std::invalid_argument("quasi-norm: exponent p must be positive");
  if (weights_.size() == 0) throw std::invalid_argument("quasi-norm: dimension must be positive");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_(i) > 0.0) || std::isinf(weights_(i))) {
      throw std::invalid_argument("quasi-norm: weight " + std::to_string(i) + " must lie in (0, inf)");
    }
  }
}

QuasiNormSpace QuasiNormSpace::lp(Eigen::Index dim, double p) {
  if (dim < 1) throw std::invalid_argument("quasi-norm: dimension must be positive");
  return QuasiNormSpace(Kind::lp, p, Eigen::VectorXd::Ones(dim));
}

QuasiNormSpace QuasiNormSpace::weighted_lp(double p, Eigen::VectorXd weights) {
  return QuasiNormSpace(Kind::weighted_lp, p, std::move(weights));
}

double QuasiNormSpace::modulus() const {
  if (p_ >= 1.0 || dim() < 2) return 1.0;
  return std::exp2(1.0 / p_ - 1.0);
}

std::string QuasiNormSpace::describe() const {
  std::ostringstream os;
  os << (kind_ == Kind::lp ? "lp" : "weighted-lp") << "(dim=" << dim() << ", p=";
  if (std::isinf(p_)) {
    os << "inf";
  } else {
    os << p_;
  }
  os << ")";
  return os.str();
}

double eval_qnorm(const QuasiNormSpace& q, const Eigen::VectorXd& x) { return q.norm(x); }

namespace {

double draw_coordinate(Rng& rng) {
  switch (rng.index(6)) {
    case 0:
      return 0.0;
    case 1:
      return rng.coin() ? 1.0 : -1.0;
    case 2:
      return (rng.coin() ? 1.0 : -1.0) * rng.log_uniform_pow2(-30, -10);
    case 3:
      return (rng.coin() ? 1.0 : -1.0) * rng.log_uniform_pow2(10, 30);
    default:
      return rng.normal();
  }
}

Eigen::VectorXd draw_vector(Rng& rng, Eigen::Index dim) {
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x(i) = draw_coordinate(rng);
  return x;
}

}  // namespace

ModulusEstimate modulus_of_concavity(const QuasiNormSpace& q, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("modulus_of_concavity: trials must be >= 1");
  ModulusEstimate out;
  out.analytic = q.modulus();
  const Eigen::Index d = q.dim();
  out.x = Eigen::VectorXd::Zero(d);
  out.y = Eigen::VectorXd::Zero(d);

  auto consider = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double den = q.norm(x) + q.norm(y);
    ++out.trials;
    if (den == 0.0 || std::isinf(den)) return;
    const double r = q.norm(x + y) / den;
    if (r > out.estimate) {
      out.estimate = r;
      out.x = x;
      out.y = y;
    }
  };

  Rng rng = derive(seed, "modulus");
  std::size_t done = 0;
  // Designed pairs: x = y, and disjoint basis vectors scaled to equal norm.
  for (Eigen::Index i = 0; i < d && done < trials; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i);
    consider(e, e);
    ++done;
    for (Eigen::Index j = i + 1; j < d && done < trials; ++j) {
      Eigen::VectorXd a = Eigen::VectorXd::Unit(d, i) / q.norm(Eigen::VectorXd::Unit(d, i));
      Eigen::VectorXd b = Eigen::VectorXd::Unit(d, j) / q.norm(Eigen::VectorXd::Unit(d, j));
      consider(a, b);
      ++done;
    }
  }
  for (; done < trials; ++done) {
    Eigen::VectorXd x = draw_vector(rng, d);
    switch (rng.index(4)) {
      case 0:
        consider(x, x);
        break;
      case 1: {
        // Disjoint supports: split x by a random coordinate mask.
        Eigen::VectorXd a = Eigen::VectorXd::Zero(d), b = Eigen::VectorXd::Zero(d);
        for (Eigen::Index i = 0; i < d; ++i) (rng.coin() ? a : b)(i) = x(i);
        const double na = q.norm(a), nb = q.norm(b);
        if (na > 0 && nb > 0 && std::isfinite(na) && std::isfinite(nb)) b *= na / nb;
        consider(a, b);
        break;
      }
      default:
        consider(x, draw_vector(rng, d));
    }
  }
  return out;
}

double aoki_exponent(double kappa) {
  if (!(kappa >= 1.0) || std::isinf(kappa)) {
    throw std::invalid_argument("aoki_exponent: modulus must lie in [1, inf)");
  }
  return 1.0 / (1.0 + std::log2(kappa));
}

double decomposition_value(const QuasiNormSpace& q, std::span<const Eigen::VectorXd> parts, double p) {
  double s = 0.0;
  for (const auto& v : parts) {
    const double n = q.norm(v);
    if (n > 0.0) s += std::pow(n, p);
  }
  return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p);
}

namespace {

// Restricted-growth enumeration of set partitions of `support` into at most
// `max_blocks` blocks.
void for_each_partition(const std::vector<Eigen::Index>& support, int max_blocks,
                        const std::function<void(const std::vector<int>&, int)>& visit) {
  const std::size_t n = support.size();
  std::vector<int> label(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      visit(label, used);
      return;
    }
    for (int b = 0; b <= used && b < max_blocks; ++b) {
      label[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  if (n == 0) return;
  rec(0, 0);
}

double envelope_constant(const QuasiNormSpace& q, double p) {
  const double qp = q.p();
  if (p <= std::min(qp, 1.0)) return 1.0;
  // The envelope dominates the weighted l_p norm; Hoelder gives the gap.
  return std::pow(q.weight_sum(), 1.0 / qp - 1.0 / p);
}

}  // namespace

EnvelopeResult p_norm_envelope(const QuasiNormSpace& q, const Eigen::VectorXd& x, double p,
                               const EnvelopeOptions& opts,
                               std::span<const std::vector<Eigen::VectorXd>> extra) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p_norm_envelope: p must lie in (0, 1]");
  if (opts.depth < 1 || opts.depth > 8) throw std::invalid_argument("p_norm_envelope: depth must lie in [1, 8]");
  if (x.size() != q.dim()) throw std::invalid_argument("p_norm_envelope: dimension mismatch");

  EnvelopeResult best;
  best.constant = envelope_constant(q, p);
  best.parts = {x};
  best.value = q.norm(x);
  if (best.value == 0.0) return best;

  auto consider = [&](std::vector<Eigen::VectorXd> parts) {
    const double v = decomposition_value(q, parts, p);
    // Gains below rounding noise are not real improvements.
    if (v < best.value * (1.0 - 1e-12)) {
      best.value = v;
      best.parts = std::move(parts);
    }
  };

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) support.push_back(i);
  }
  if (support.size() <= 10) {
    for_each_partition(support, opts.depth, [&](const std::vector<int>& label, int blocks) {
      std::vector<Eigen::VectorXd> parts(static_cast<std::size_t>(blocks), Eigen::VectorXd::Zero(x.size()));
      for (std::size_t k = 0; k < support.size(); ++k) parts[static_cast<std::size_t>(label[k])](support[k]) = x(support[k]);
      consider(std::move(parts));
    });
  }

  Rng rng = derive(opts.seed, "envelope");
  for (int s = 0; s < opts.random_splits && opts.depth >= 2; ++s) {
    const int n = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(opts.depth - 1)));
    std::vector<Eigen::VectorXd> parts(static_cast<std::size_t>(n), Eigen::VectorXd::Zero(x.size()));
    for (Eigen::Index i : support) {
      // Dyadic coefficients summing to one: the last part takes the remainder.
      double left = 1.0;
      for (int j = 0; j + 1 < n; ++j) {
        const double c = left * std::ldexp(static_cast<double>(rng.index(5)), -2);
        parts[static_cast<std::size_t>(j)](i) = c * x(i);
        left -= c;
      }
      parts.back()(i) = left * x(i);
    }
    consider(std::move(parts));
  }

  const double scale = x.cwiseAbs().maxCoeff();
  for (const auto& parts : extra) {
    if (parts.empty()) continue;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.size());
    for (const auto& v : parts) {
      if (v.size() != x.size()) throw std::invalid_argument("p_norm_envelope: seeded part has wrong dimension");
      sum += v;
    }
    if ((sum - x).cwiseAbs().maxCoeff() <= 1e-12 * scale) consider(parts);
  }
  return best;
}

}  // namespace gaugelab
