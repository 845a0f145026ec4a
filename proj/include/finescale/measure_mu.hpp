#pragma once

// The averaging measure mu with density 2 sin^2(x/2) / (pi x^2) per
// coordinate. Its characteristic function is the triangle max(1 - |u|, 0).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "finescale/parallel.hpp"
#include "finescale/statistics.hpp"

namespace finescale {

inline double mu_density(double x) {
  if (std::abs(x) < 1e-6) return (1.0 - x * x / 12.0) / (2.0 * std::numbers::pi);
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s / (std::numbers::pi * x * x);
}

/// Characteristic function of mu.
inline double mu_charfn(double u) { return std::max(1.0 - std::abs(u), 0.0); }

/// SplitMix64 stream; one independent stream per (seed, draw index).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  result_type operator()() { return mix(state_ += 0x9e3779b97f4a7c15ULL); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

  static SplitMix64 for_draw(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

 private:
  std::uint64_t state_;
};

/// One draw from mu, fully determined by (seed, index).
///
/// Envelope g(x) = min(1/(2 pi), 2/(pi x^2)) dominates the density because
/// sin^2 <= min(1, (x/2)^2); half its mass sits uniformly on [-2, 2] and half
/// on the tails |x| = 2 / U. Acceptance rate is pi/4.
inline double sample_mu(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng = SplitMix64::for_draw(seed, index);
  for (;;) {
    const std::uint64_t bits = rng();
    double x;
    if (bits & 1u) {
      x = 4.0 * rng.uniform() - 2.0;
    } else {
      const double u = 1.0 - rng.uniform();  // (0, 1]
      x = (bits & 2u) ? 2.0 / u : -2.0 / u;
    }
    const double envelope = std::min(1.0 / (2.0 * std::numbers::pi), 2.0 / (std::numbers::pi * x * x));
    if (rng.uniform() * envelope < mu_density(x)) return x;
  }
}

struct MuSampler {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
};

/// r independent coordinates; consumes r counter values.
inline AlphaVector sample_alpha(MuSampler& sampler, int r) {
  AlphaVector alpha;
  alpha.coords.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) alpha.coords.push_back(sample_mu(sampler.seed, sampler.counter++));
  return alpha;
}

/// n draws at counter positions start..start+n-1, independent of `threads`.
inline std::vector<double> sample_mu_many(std::uint64_t seed, std::uint64_t start, std::size_t n,
                                          unsigned threads = 1) {
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t k) { out[k] = sample_mu(seed, start + k); });
  return out;
}

/// Uniform box alternative to mu for alpha draws.
struct AlphaBox {
  double low = 1.0;
  double high = 2.0;
};

inline AlphaVector sample_alpha_box(MuSampler& sampler, int r, const AlphaBox& box) {
  AlphaVector alpha;
  for (int i = 0; i < r; ++i) {
    SplitMix64 rng = SplitMix64::for_draw(sampler.seed, sampler.counter++);
    alpha.coords.push_back(box.low + (box.high - box.low) * rng.uniform());
  }
  return alpha;
}

inline std::complex<double> empirical_charfn(std::span<const double> samples, double u) {
  if (samples.empty()) fail(ErrorCode::InvalidSpec, "empirical characteristic function needs samples");
  double re = 0.0, im = 0.0;
  for (double x : samples) {
    re += std::cos(u * x);
    im += std::sin(u * x);
  }
  const double n = static_cast<double>(samples.size());
  return {re / n, im / n};
}

}  // namespace finescale
