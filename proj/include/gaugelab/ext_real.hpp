#pragma once

#include <cmath>
#include <compare>
#include <iosfwd>
#include <limits>
#include <stdexcept>

namespace gaugelab {

/// A value in [0, inf] with an explicit infinity flag.
///
/// Products follow the measure-theoretic convention 0 * inf = 0. A finite
/// product or sum that overflows the double range is promoted to infinity.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  // Implicit on purpose: ExtReal behaves like a numeric type. Negative or NaN
  // inputs throw; +inf maps to the infinity flag.
  ExtReal(double v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v < 0.0) {
      throw std::domain_error("ExtReal: value must lie in [0, inf]");
    }
    if (std::isinf(v)) {
      infinite_ = true;
    } else {
      value_ = v;
    }
  }

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_zero() const { return !infinite_ && value_ == 0.0; }

  /// Finite value, or +inf as a double when infinite.
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ + b.value_);
  }

  friend ExtReal operator*(ExtReal a, ExtReal b) {
    if (a.is_zero() || b.is_zero()) return ExtReal{};
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtReal(a.value_ * b.value_);
  }

  ExtReal& operator+=(ExtReal o) { return *this = *this + o; }
  ExtReal& operator*=(ExtReal o) { return *this = *this * o; }

  friend bool operator==(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline ExtReal min(ExtReal a, ExtReal b) { return b < a ? b : a; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, ExtReal x);

}  // namespace gaugelab
