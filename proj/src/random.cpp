#include "gaugelab/random.hpp"

#include <cmath>
#include <numbers>

namespace gaugelab {

std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::index(std::size_t n) {
  if (n <= 1) return 0;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % n);
}

double Rng::log_uniform_pow2(int lo, int hi) {
  const int k = lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1)));
  return std::ldexp(1.0, k);
}

Rng Rng::split(std::string_view name) const { return derive(seed_material_, name); }

Rng derive(std::uint64_t seed, std::string_view name) {
  const std::uint64_t material = seed ^ (stable_hash(name) * 0x9e3779b97f4a7c15ull);
  Rng r(material);
  r.seed_material_ = material;
  return r;
}

}  // namespace gaugelab
