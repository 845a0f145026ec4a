#pragma once

// Independent reference implementations used only by the tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "finescale/measure_mu.hpp"
#include "finescale/selberg.hpp"

namespace oracle {

using quad = boost::multiprecision::cpp_bin_float_quad;

inline quad frac(const quad& x) { return x - floor(x); }

inline double torus_distance(long double t) {
  const long double d = t - std::floor(t);
  return static_cast<double>(std::min(d, 1.0L - d));
}

/// Ordered pairs u != v with torus distance <= window, O(n^2).
inline std::uint64_t close_pairs(const std::vector<double>& fracs, double window) {
  std::uint64_t count = 0;
  for (std::size_t u = 0; u < fracs.size(); ++u)
    for (std::size_t v = 0; v < fracs.size(); ++v)
      if (u != v && torus_distance(static_cast<long double>(fracs[u]) - fracs[v]) <= window) ++count;
  return count;
}

/// Quadruple loop in quad precision.
inline std::uint64_t energy(const std::vector<double>& v, double gamma) {
  std::uint64_t count = 0;
  const std::size_t n = v.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          const quad x = quad(v[a]) - quad(v[b]) + quad(v[c]) - quad(v[d]);
          if (abs(x) < quad(gamma)) ++count;
        }
  return count;
}

/// Six-fold loop over (j1, j2, x, y, z, w) for r = 1, in quad precision.
inline std::uint64_t thm1(const std::vector<double>& v, long long jmax) {
  std::uint64_t count = 0;
  const std::size_t n = v.size();
  for (long long j1 = 1; j1 <= jmax; ++j1)
    for (long long j2 = 1; j2 <= jmax; ++j2)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          if (x == y) continue;
          for (std::size_t z = 0; z < n; ++z)
            for (std::size_t w = 0; w < n; ++w) {
              if (z == w) continue;
              const quad e = quad(j1) * (quad(v[x]) - quad(v[y])) - quad(j2) * (quad(v[z]) - quad(v[w]));
              if (abs(e) < 1) ++count;
            }
        }
  return count;
}

/// Random increasing sequence of length n.
inline std::vector<double> increasing(std::mt19937_64& rng, std::size_t n, double max_gap) {
  std::uniform_real_distribution<double> gap(0.01, max_gap);
  std::vector<double> v(n);
  double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (auto& e : v) {
    e = x;
    x += gap(rng);
  }
  return v;
}

/// Triangle characteristic function of mu.
inline double triangle(double u) { return std::max(1.0 - std::abs(u), 0.0); }

// ---- expectations over mu truncated to [-T, T] (r = 1), by adaptive quadrature ----

/// int_a^b fn(x) mu(x) dx, split into pieces no longer than `piece`.
template <class Fn>
double mu_integral(Fn&& fn, double a, double b, double piece) {
  using boost::math::quadrature::gauss_kronrod;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / piece)));
  const double h = (b - a) / n;
  double total = 0.0;
  for (int k = 0; k < n; ++k)
    total += gauss_kronrod<double, 31>::integrate([&](double x) { return fn(x) * finescale::mu_density(x); },
                                                  a + k * h, a + (k + 1) * h, 6, 1e-13);
  return total;
}

inline double truncated_mass(double T) {
  return mu_integral([](double) { return 1.0; }, -T, T, 1.0);
}

/// Ordered-pair differences a(x) - a(y), x != y.
inline std::vector<double> scalar_differences(const std::vector<double>& v) {
  std::vector<double> d;
  for (std::size_t x = 0; x < v.size(); ++x)
    for (std::size_t y = 0; y < v.size(); ++y)
      if (x != y) d.push_back(v[x] - v[y]);
  return d;
}

/// E over truncated mu of (1/N) #{pairs with ||alpha d|| <= w}. Each pair
/// contributes the mu-mass of the alpha intervals [(k - w)/|d|, (k + w)/|d|].
inline double truncated_indicator(const std::vector<double>& values, long long N, double s, double T) {
  const double w = s / static_cast<double>(N);
  double total = 0.0;
  for (double d : scalar_differences(values)) {
    const double ad = std::abs(d);
    const long long kmax = static_cast<long long>(std::ceil(T * ad + w));
    for (long long k = -kmax; k <= kmax; ++k) {
      const double lo = std::max(-T, (k - w) / ad), hi = std::min(T, (k + w) / ad);
      if (lo < hi) total += mu_integral([](double) { return 1.0; }, lo, hi, 0.5);
    }
  }
  return total / (static_cast<double>(N) * truncated_mass(T));
}

/// (1/N) sum over pairs of f(alpha d), f a trigonometric polynomial, summed directly.
inline double direct_functional(const std::vector<double>& diffs, long long N, const finescale::SelbergPolynomial& f,
                                double alpha, bool include_constant) {
  long double total = 0.0;
  for (double d : diffs) {
    long double x = static_cast<long double>(alpha) * d;
    x -= std::floor(x);
    for (long long j = 1; j <= f.K; ++j)
      total += 2.0L * f.coeffs[j].real() * std::cos(2.0L * std::numbers::pi_v<long double> * j * x);
    if (include_constant) total += f.coeffs[0].real();
  }
  return static_cast<double>(total / N);
}

inline double truncated_selberg_expectation(const std::vector<double>& values, long long N,
                                            const finescale::SelbergPolynomial& f, double T) {
  const auto diffs = scalar_differences(values);
  return mu_integral([&](double a) { return direct_functional(diffs, N, f, a, true); }, -T, T, 0.05) /
         truncated_mass(T);
}

inline double truncated_variance(const std::vector<double>& values, long long N, const finescale::SelbergPolynomial& f,
                                 double T) {
  const auto diffs = scalar_differences(values);
  return mu_integral(
             [&](double a) {
               const double d = direct_functional(diffs, N, f, a, false);
               return d * d;
             },
             -T, T, 0.05) /
         truncated_mass(T);
}

}  // namespace oracle
