#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaugelab {

/// Finite-dimensional (weighted) l_p space, p in (0, inf].
class QuasiNormSpace {
 public:
  enum class Kind { lp, weighted_lp };

  static QuasiNormSpace lp(Eigen::Index dim, double p);
  static QuasiNormSpace weighted_lp(double p, Eigen::VectorXd weights);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return weights_.size(); }
  double p() const { return p_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight_sum() const { return weights_.sum(); }
  /// Analytic modulus of concavity: 2^{1/p-1} for p < 1 and dim >= 2, else 1.
  double modulus() const;
  std::string describe() const;

  /// Max-abs scaled evaluation; exact under power-of-two scaling of x.
  template <typename Derived>
  double norm(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dim()) {
      throw std::invalid_argument("quasi-norm: vector of dimension " + std::to_string(x.size()) +
                                  " on a space of dimension " + std::to_string(dim()));
    }
    const double m = x.cwiseAbs().maxCoeff();
    if (m == 0.0 || std::isinf(m)) return m;
    if (std::isinf(p_)) return m;
    // Extended precision keeps the result within a couple of ulps for small p.
    const long double lm = m;
    const long double lp = p_;
    long double s = 0.0L;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const long double r = std::abs(static_cast<long double>(x(i))) / lm;
      if (r == 0.0L) continue;
      s += static_cast<long double>(weights_(i)) * (p_ == 1.0 ? r : std::pow(r, lp));
    }
    return static_cast<double>(lm * (p_ == 1.0 ? s : std::pow(s, 1.0L / lp)));
  }

  friend bool operator==(const QuasiNormSpace& a, const QuasiNormSpace& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.weights_ == b.weights_;
  }

 private:
  QuasiNormSpace(Kind kind, double p, Eigen::VectorXd weights);

  Kind kind_;
  double p_;
  Eigen::VectorXd weights_;
};

/// Throws std::invalid_argument on dimension mismatch.
double eval_qnorm(const QuasiNormSpace& q, const Eigen::VectorXd& x);

struct ModulusEstimate {
  double estimate = 0.0;  // max sampled ||x+y|| / (||x|| + ||y||)
  double analytic = 1.0;
  Eigen::VectorXd x, y;   // maximizing pair
  std::size_t trials = 0;
};

/// Sampled modulus of concavity. Always includes x = y and disjoint
/// equal-norm pairs (e_i, e_j), where the l_p defect is extremal.
ModulusEstimate modulus_of_concavity(const QuasiNormSpace& q, std::size_t trials, std::uint64_t seed);

/// p with 2^{1/p-1} = kappa. Throws for kappa < 1.
double aoki_exponent(double kappa);

struct EnvelopeOptions {
  int depth = 4;  // at most `depth` parts per decomposition, 1..8
  std::uint64_t seed = 0;
  int random_splits = 64;
};

struct EnvelopeResult {
  double value = 0.0;     // upper bound on the p-norm envelope at x
  double constant = 1.0;  // C with ||x|| <= C * envelope
  std::vector<Eigen::VectorXd> parts;
};

/// Upper bound on inf{(sum ||x_j||^p)^{1/p} : x = sum x_j} over trivial,
/// coordinate-partition and random dyadic-split decompositions, plus any
/// caller-supplied decompositions in `extra` (used as given).
EnvelopeResult p_norm_envelope(const QuasiNormSpace& q, const Eigen::VectorXd& x, double p,
                               const EnvelopeOptions& opts = {},
                               std::span<const std::vector<Eigen::VectorXd>> extra = {});

/// (sum ||x_j||^p)^{1/p}.
double decomposition_value(const QuasiNormSpace& q, std::span<const Eigen::VectorXd> parts, double p);

}  // namespace gaugelab
