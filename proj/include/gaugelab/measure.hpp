#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "gaugelab/ext_real.hpp"

namespace gaugelab {

/// Exact accumulator for sums of doubles (non-overlapping expansion).
///
/// `value()` is the correctly rounded sum and `sign()` is the exact sign, so
/// strict comparisons such as mu(E) < delta never depend on summation order.
class ExactSum {
 public:
  ExactSum() = default;
  ExactSum(std::initializer_list<double> xs) {
    for (double x : xs) add(x);
  }

  void add(double x);
  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }
  ExactSum& operator-=(double x) {
    add(-x);
    return *this;
  }

  /// -1, 0 or +1.
  int sign() const;
  double value() const;

 private:
  std::vector<double> partials_;
  double overflow_ = 0.0;  // +-inf once an intermediate sum overflowed
};

/// Index set of atoms of a finite measure space.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t atom_count) : bits_(atom_count, false) {}

  /// Throws std::out_of_range for indices >= atom_count.
  static Subset of(std::size_t atom_count, std::initializer_list<std::size_t> indices);
  static Subset of(std::size_t atom_count, std::span<const std::size_t> indices);
  static Subset full(std::size_t atom_count);
  /// Bit i of `mask` selects atom i; atom_count <= 64.
  static Subset from_mask(std::size_t atom_count, std::uint64_t mask);

  std::size_t atom_count() const { return bits_.size(); }
  bool contains(std::size_t i) const { return bits_.at(i); }
  void insert(std::size_t i) { bits_.at(i) = true; }
  void erase(std::size_t i) { bits_.at(i) = false; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;
  bool is_subset_of(const Subset& other) const;

  friend Subset operator|(const Subset& a, const Subset& b);
  friend Subset operator&(const Subset& a, const Subset& b);
  friend Subset operator-(const Subset& a, const Subset& b);
  friend bool operator==(const Subset& a, const Subset& b) = default;

 private:
  std::vector<bool> bits_;
};

/// Finite list of atoms with strictly positive, finite weights.
class MeasureSpace {
 public:
  /// Throws std::invalid_argument for an empty list or a weight outside (0, inf).
  explicit MeasureSpace(Eigen::VectorXd weights);

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  double weight(std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double total_mass() const { return total_; }
  bool is_counting() const;

  /// Exact sign of mu(E) - sum(bound_terms).
  int compare_measure(const Subset& E, std::initializer_list<double> bound_terms) const;
  /// mu(E) < sum(bound_terms), decided exactly.
  bool measure_below(const Subset& E, std::initializer_list<double> bound_terms) const {
    return compare_measure(E, bound_terms) < 0;
  }

  void check_subset(const Subset& E) const;

  friend bool operator==(const MeasureSpace& a, const MeasureSpace& b) {
    return a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
  }

 private:
  Eigen::VectorXd weights_;
  double total_ = 0.0;
};

MeasureSpace make_space(std::span<const double> weights);
MeasureSpace make_space(std::initializer_list<double> weights);

/// Nonnegative extended-real function on the atoms of a space (an element of L+).
class PlusFunction {
 public:
  PlusFunction() = default;
  explicit PlusFunction(std::size_t n, ExtReal fill = {}) : values_(n, fill) {}
  explicit PlusFunction(std::vector<ExtReal> values) : values_(std::move(values)) {}
  PlusFunction(std::initializer_list<double> values);
  static PlusFunction from(std::span<const double> values);
  static PlusFunction from(const Eigen::VectorXd& values);
  /// c * chi_E.
  static PlusFunction indicator(const Subset& E, ExtReal c = 1.0);

  std::size_t size() const { return values_.size(); }
  ExtReal operator[](std::size_t i) const { return values_[i]; }
  ExtReal& operator[](std::size_t i) { return values_[i]; }
  const std::vector<ExtReal>& values() const { return values_; }
  std::vector<double> to_doubles() const;
  bool is_zero() const;

  /// Pointwise c * f for c >= 0 (with 0 * inf = 0).
  PlusFunction scaled(ExtReal c) const;
  /// Pointwise f^p, p > 0; inf^p = inf.
  PlusFunction pow(double p) const;

  friend PlusFunction operator+(const PlusFunction& a, const PlusFunction& b);
  friend PlusFunction max(const PlusFunction& a, const PlusFunction& b);
  /// Pointwise order f <= g.
  friend bool operator<=(const PlusFunction& a, const PlusFunction& b);
  friend bool operator==(const PlusFunction& a, const PlusFunction& b) = default;

 private:
  std::vector<ExtReal> values_;
};

ExtReal measure_of(const MeasureSpace& space, const Subset& E);

/// sum_i w_i f(i), 0 * inf = 0, correctly rounded.
ExtReal integrate(const MeasureSpace& space, const PlusFunction& f);
/// Integral over E only.
ExtReal integrate(const MeasureSpace& space, const PlusFunction& f, const Subset& E);

}  // namespace gaugelab
