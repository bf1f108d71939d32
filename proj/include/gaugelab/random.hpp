#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace gaugelab {

/// 64-bit FNV-1a; used to derive per-suite seeds from names.
std::uint64_t stable_hash(std::string_view text);

/// Seeded generator with platform-independent draws.
///
/// The engine is std::mt19937_64 (fully specified by the standard). Uniform
/// and normal variates are derived from raw engine bits here instead of the
/// std distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_material_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  bool coin(double probability = 0.5) { return uniform() < probability; }
  /// 2^k with k uniform in [lo, hi].
  double log_uniform_pow2(int lo, int hi);

  /// Independent child stream keyed by a name.
  Rng split(std::string_view name) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_material_ = 0;
  friend Rng derive(std::uint64_t seed, std::string_view name);
};

/// Generator for `name` under a master seed; independent of call order.
Rng derive(std::uint64_t seed, std::string_view name);

}  // namespace gaugelab
