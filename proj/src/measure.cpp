#include "gaugelab/measure.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace gaugelab {

std::ostream& operator<<(std::ostream& os, ExtReal x) {
  if (x.is_infinite()) return os << "inf";
  return os << x.value();
}

// Shewchuk's grow-expansion, as in Python's math.fsum.
void ExactSum::add(double x) {
  if (std::isinf(x) || std::isnan(x)) {
    throw std::domain_error("ExactSum: non-finite term");
  }
  if (overflow_ != 0.0) return;
  std::size_t i = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    if (std::isinf(hi)) {
      overflow_ = hi;
      partials_.clear();
      return;
    }
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[i++] = lo;
    x = hi;
  }
  partials_.resize(i);
  if (x != 0.0) partials_.push_back(x);
}

int ExactSum::sign() const {
  if (overflow_ != 0.0) return overflow_ > 0 ? 1 : -1;
  if (partials_.empty()) return 0;
  return partials_.back() > 0 ? 1 : -1;
}

double ExactSum::value() const {
  if (overflow_ != 0.0) return overflow_;
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Round-half-even correction when the remaining tail pushes past a tie.
  if (n > 0 && ((lo < 0 && partials_[n - 1] < 0) || (lo > 0 && partials_[n - 1] > 0))) {
    const double y = lo * 2;
    const double x = hi + y;
    const double yr = x - hi;
    if (y == yr) hi = x;
  }
  return hi;
}

Subset Subset::of(std::size_t atom_count, std::initializer_list<std::size_t> indices) {
  return of(atom_count, std::span<const std::size_t>(indices.begin(), indices.size()));
}

Subset Subset::of(std::size_t atom_count, std::span<const std::size_t> indices) {
  Subset s(atom_count);
  for (std::size_t i : indices) {
    if (i >= atom_count) {
      throw std::out_of_range("Subset: atom index " + std::to_string(i) + " out of range");
    }
    s.bits_[i] = true;
  }
  return s;
}

Subset Subset::full(std::size_t atom_count) {
  Subset s(atom_count);
  s.bits_.assign(atom_count, true);
  return s;
}

Subset Subset::from_mask(std::size_t atom_count, std::uint64_t mask) {
  if (atom_count > 64) throw std::invalid_argument("Subset::from_mask: more than 64 atoms");
  Subset s(atom_count);
  for (std::size_t i = 0; i < atom_count; ++i) s.bits_[i] = ((mask >> i) & 1u) != 0;
  return s;
}

std::size_t Subset::count() const {
  std::size_t c = 0;
  for (bool b : bits_) c += b ? 1 : 0;
  return c;
}

std::vector<std::size_t> Subset::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(i);
  }
  return out;
}

bool Subset::is_subset_of(const Subset& other) const {
  if (other.bits_.size() != bits_.size()) throw std::invalid_argument("Subset: size mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

namespace {

template <typename Op>
Subset combine(const Subset& a, const Subset& b, Op op) {
  if (a.atom_count() != b.atom_count()) throw std::invalid_argument("Subset: size mismatch");
  Subset out(a.atom_count());
  for (std::size_t i = 0; i < a.atom_count(); ++i) {
    if (op(a.contains(i), b.contains(i))) out.insert(i);
  }
  return out;
}

}  // namespace

Subset operator|(const Subset& a, const Subset& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}
Subset operator&(const Subset& a, const Subset& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}
Subset operator-(const Subset& a, const Subset& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

MeasureSpace::MeasureSpace(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw std::invalid_argument("MeasureSpace: empty weight list");
  ExactSum total;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    const double w = weights_(i);
    if (!(w > 0.0) || std::isinf(w)) {
      throw std::invalid_argument("MeasureSpace: weight " + std::to_string(i) +
                                  " must lie in (0, inf)");
    }
    total += w;
  }
  total_ = total.value();
}

bool MeasureSpace::is_counting() const { return (weights_.array() == 1.0).all(); }

void MeasureSpace::check_subset(const Subset& E) const {
  if (E.atom_count() != size()) {
    throw std::invalid_argument("Subset built for " + std::to_string(E.atom_count()) +
                                " atoms used on a space with " + std::to_string(size()));
  }
}

int MeasureSpace::compare_measure(const Subset& E, std::initializer_list<double> bound_terms) const {
  check_subset(E);
  ExactSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (E.contains(i)) s += weight(i);
  }
  for (double b : bound_terms) {
    if (std::isinf(b)) return b > 0 ? -1 : 1;
    s -= b;
  }
  return s.sign();
}

MeasureSpace make_space(std::span<const double> weights) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w(static_cast<Eigen::Index>(i)) = weights[i];
  return MeasureSpace(std::move(w));
}

MeasureSpace make_space(std::initializer_list<double> weights) {
  return make_space(std::span<const double>(weights.begin(), weights.size()));
}

PlusFunction::PlusFunction(std::initializer_list<double> values) {
  values_.reserve(values.size());
  for (double v : values) values_.emplace_back(v);
}

PlusFunction PlusFunction::from(std::span<const double> values) {
  std::vector<ExtReal> v;
  v.reserve(values.size());
  for (double x : values) v.emplace_back(x);
  return PlusFunction(std::move(v));
}

PlusFunction PlusFunction::from(const Eigen::VectorXd& values) {
  return from(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

PlusFunction PlusFunction::indicator(const Subset& E, ExtReal c) {
  PlusFunction f(E.atom_count());
  for (std::size_t i = 0; i < E.atom_count(); ++i) {
    if (E.contains(i)) f.values_[i] = c;
  }
  return f;
}

std::vector<double> PlusFunction::to_doubles() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (ExtReal v : values_) out.push_back(v.value());
  return out;
}

bool PlusFunction::is_zero() const {
  for (ExtReal v : values_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

PlusFunction PlusFunction::scaled(ExtReal c) const {
  PlusFunction out(*this);
  for (ExtReal& v : out.values_) v = v * c;
  return out;
}

PlusFunction PlusFunction::pow(double p) const {
  if (!(p > 0.0)) throw std::domain_error("PlusFunction::pow: exponent must be positive");
  PlusFunction out(*this);
  for (ExtReal& v : out.values_) {
    if (v.is_finite()) v = ExtReal(std::pow(v.value(), p));
  }
  return out;
}

namespace {

void require_same_size(const PlusFunction& a, const PlusFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("PlusFunction: size mismatch");
}

}  // namespace

PlusFunction operator+(const PlusFunction& a, const PlusFunction& b) {
  require_same_size(a, b);
  PlusFunction out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] += b.values_[i];
  return out;
}

PlusFunction max(const PlusFunction& a, const PlusFunction& b) {
  require_same_size(a, b);
  PlusFunction out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out.values_[i] = max(a.values_[i], b.values_[i]);
  return out;
}

bool operator<=(const PlusFunction& a, const PlusFunction& b) {
  require_same_size(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.values_[i] <= b.values_[i])) return false;
  }
  return true;
}

ExtReal measure_of(const MeasureSpace& space, const Subset& E) {
  space.check_subset(E);
  ExactSum s;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (E.contains(i)) s += space.weight(i);
  }
  return s.value();
}

ExtReal integrate(const MeasureSpace& space, const PlusFunction& f) {
  return integrate(space, f, Subset::full(space.size()));
}

ExtReal integrate(const MeasureSpace& space, const PlusFunction& f, const Subset& E) {
  if (f.size() != space.size()) {
    throw std::invalid_argument("integrate: function has " + std::to_string(f.size()) +
                                " values, space has " + std::to_string(space.size()) + " atoms");
  }
  space.check_subset(E);
  ExactSum s;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!E.contains(i) || f[i].is_zero()) continue;
    // Weights are positive, so an infinite value on any atom gives infinity.
    if (f[i].is_infinite()) return ExtReal::infinity();
    const double term = space.weight(i) * f[i].value();
    if (std::isinf(term)) return ExtReal::infinity();
    s += term;
  }
  return s.value();
}

}  // namespace gaugelab
