#include "gaugelab/orlicz.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaugelab {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw std::invalid_argument(std::string("OrliczFunction: ") + what + " must lie in (0, inf)");
  }
}

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("OrliczFunction: exponent must lie in (0, inf]");
  OrliczFunction F;
  F.kind_ = Kind::power;
  F.p_ = p;
  return F;
}

OrliczFunction OrliczFunction::capped_power(double p, double cap) {
  require_positive(p, "exponent");
  require_positive(cap, "cap");
  OrliczFunction F;
  F.kind_ = Kind::capped_power;
  F.p_ = p;
  F.a_ = cap;
  return F;
}

OrliczFunction OrliczFunction::bounded_rational() {
  OrliczFunction F;
  F.kind_ = Kind::bounded_rational;
  return F;
}

OrliczFunction OrliczFunction::plateau(double t0) {
  require_positive(t0, "plateau threshold");
  OrliczFunction F;
  F.kind_ = Kind::plateau;
  F.a_ = t0;
  return F;
}

OrliczFunction OrliczFunction::exp_power(double p) {
  require_positive(p, "exponent");
  OrliczFunction F;
  F.kind_ = Kind::exp_power;
  F.p_ = p;
  return F;
}

OrliczFunction OrliczFunction::scaled(OrliczFunction inner, double a, double b) {
  require_positive(a, "outer factor");
  require_positive(b, "inner factor");
  OrliczFunction F;
  F.kind_ = Kind::scaled;
  F.a_ = a;
  F.b_ = b;
  F.lo_ = std::make_shared<const OrliczFunction>(std::move(inner));
  return F;
}

OrliczFunction OrliczFunction::piecewise(double t0, OrliczFunction lower, OrliczFunction upper) {
  require_positive(t0, "breakpoint");
  OrliczFunction F;
  F.kind_ = Kind::piecewise;
  F.a_ = t0;
  F.lo_ = std::make_shared<const OrliczFunction>(std::move(lower));
  F.hi_ = std::make_shared<const OrliczFunction>(std::move(upper));
  return F;
}

ExtReal OrliczFunction::operator()(ExtReal t) const {
  const double x = t.value();
  switch (kind_) {
    case Kind::power:
      if (t.is_zero()) return 0.0;
      if (std::isinf(p_)) return x > 1.0 ? ExtReal::infinity() : ExtReal(0.0);
      if (t.is_infinite()) return ExtReal::infinity();
      if (p_ == 1.0) return x;
      if (p_ == 2.0) return x * x;
      return std::pow(x, p_);
    case Kind::capped_power:
      if (t.is_infinite()) return a_;
      return std::min(std::pow(x, p_), a_);
    case Kind::bounded_rational:
      if (t.is_infinite()) return 1.0;
      return x <= 1.0 ? x / (1.0 + x) : 1.0 / (1.0 + 1.0 / x);
    case Kind::plateau:
      return x <= a_ ? 0.0 : 1.0;
    case Kind::exp_power:
      if (t.is_infinite()) return ExtReal::infinity();
      return std::expm1(std::pow(x, p_));
    case Kind::scaled:
      return ExtReal(a_) * (*lo_)(t * ExtReal(b_));
    case Kind::piecewise:
      if (x <= a_) return (*lo_)(t);
      return max((*hi_)(t), (*lo_)(a_));
  }
  return 0.0;
}

std::optional<double> OrliczFunction::power_exponent() const {
  if (kind_ == Kind::power) return p_;
  if (kind_ == Kind::scaled) return lo_->power_exponent();
  return std::nullopt;
}

std::optional<double> OrliczFunction::convexity_exponent() const {
  switch (kind_) {
    case Kind::power:
      return p_;
    case Kind::exp_power:
      if (p_ >= 1.0) return 1.0;
      return std::nullopt;
    case Kind::scaled:
      return lo_->convexity_exponent();
    default:
      return std::nullopt;
  }
}

std::string OrliczFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::power:
      os << "power(" << p_ << ")";
      break;
    case Kind::capped_power:
      os << "capped-power(" << p_ << ", " << a_ << ")";
      break;
    case Kind::bounded_rational:
      os << "bounded-rational";
      break;
    case Kind::plateau:
      os << "plateau(" << a_ << ")";
      break;
    case Kind::exp_power:
      os << "exp-power(" << p_ << ")";
      break;
    case Kind::scaled:
      os << a_ << "*" << lo_->describe() << "(" << b_ << "t)";
      break;
    case Kind::piecewise:
      os << "piecewise(" << a_ << ", " << lo_->describe() << ", " << hi_->describe() << ")";
      break;
  }
  return os.str();
}

ExtReal orlicz_eval(const OrliczFunction& F, ExtReal t) { return F(t); }

}  // namespace gaugelab
