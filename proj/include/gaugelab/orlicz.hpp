#pragma once

#include <memory>
#include <optional>
#include <string>

#include "gaugelab/ext_real.hpp"

namespace gaugelab {

/// Nondecreasing, left-continuous F: [0, inf] -> [0, inf] with F(0+) = 0.
/// Closed set of kinds; left-continuity holds by construction.
class OrliczFunction {
 public:
  enum class Kind { power, capped_power, bounded_rational, plateau, exp_power, scaled, piecewise };

  /// t^p, p in (0, inf]. p = inf follows t^inf = inf for t > 1, 0 otherwise.
  static OrliczFunction power(double p);
  /// min(t^p, cap).
  static OrliczFunction capped_power(double p, double cap);
  /// t / (1 + t).
  static OrliczFunction bounded_rational();
  /// 0 for t <= t0, 1 above.
  static OrliczFunction plateau(double t0);
  /// exp(t^p) - 1.
  static OrliczFunction exp_power(double p);
  /// a F(b t), a, b > 0.
  static OrliczFunction scaled(OrliczFunction inner, double a, double b);
  /// lower(t) on [0, t0], max(upper(t), lower(t0)) above.
  static OrliczFunction piecewise(double t0, OrliczFunction lower, OrliczFunction upper);

  ExtReal operator()(ExtReal t) const;
  ExtReal at_infinity() const { return (*this)(ExtReal::infinity()); }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  /// p when F(t) = a (b t)^p (power kinds and their scalings).
  std::optional<double> power_exponent() const;
  /// Some a with F^(1/a) convex, when known in closed form.
  std::optional<double> convexity_exponent() const;
  std::string describe() const;

 private:
  OrliczFunction() = default;

  Kind kind_ = Kind::power;
  double p_ = 1.0;
  double a_ = 1.0;  // cap, threshold or outer factor
  double b_ = 1.0;
  std::shared_ptr<const OrliczFunction> lo_, hi_;
};

ExtReal orlicz_eval(const OrliczFunction& F, ExtReal t);

}  // namespace gaugelab
