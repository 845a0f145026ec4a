#pragma once

// Selberg majorant / minorant trigonometric polynomials for the torus
// interval [-w, w].
//
// Built from Vaaler's polynomial V_K for the sawtooth psi(x) = {x} - 1/2 and
// the Fejer kernel F_K. With chi = 2w + psi(-w - x) + psi(x - w) and
// |psi - V_K| <= F_K / (2K + 2),
//
//   S^{+/-}(x) = 2w + V_K(-w - x) + V_K(x - w) +/- (F_K(-w - x) + F_K(x - w)) / (2K + 2)
//
// bounds chi from above / below. Its coefficients are
//   c_0 = 2w +/- 1/(K+1)
//   c_j = Jhat(j/(K+1)) sin(2 pi j w) / (pi j) +/- (1 - |j|/(K+1)) cos(2 pi j w) / (K+1)
// with Jhat(u) = pi u (1 - u) cot(pi u) + u, and c_{-j} = c_j.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "finescale/eft.hpp"
#include "finescale/error.hpp"
#include "finescale/parallel.hpp"
#include "finescale/statistics.hpp"

namespace finescale {

enum class Sign { Plus, Minus };

inline const char* to_string(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

/// Largest degree evaluated at desk scale.
inline constexpr long long kMaxSelbergDegree = 10000;

struct SelbergPolynomial {
  Sign sign = Sign::Plus;
  long long K = 0;
  double half_width = 0.0;
  /// c_j for j = 0..K; c_{-j} is the conjugate of c_j.
  std::vector<std::complex<double>> coeffs;
  long long t_multiplier = 0;

  std::complex<double> coeff(long long j) const {
    const long long a = j < 0 ? -j : j;
    if (a >= static_cast<long long>(coeffs.size())) return {0.0, 0.0};
    return j < 0 ? std::conj(coeffs[a]) : coeffs[a];
  }
};

/// Degree t * N^r, capped at kMaxSelbergDegree.
inline long long selberg_degree(long long N, int r, long long t) {
  const double k = static_cast<double>(t) * std::pow(static_cast<double>(N), r);
  return static_cast<long long>(std::min(k, static_cast<double>(kMaxSelbergDegree)));
}

/// Fourier multiplier of Vaaler's kernel, u in [0, 1).
inline double vaaler_multiplier(double u) {
  if (u == 0.0) return 1.0;
  const double pu = std::numbers::pi * u;
  return pu * (1.0 - u) * std::cos(pu) / std::sin(pu) + u;
}

inline SelbergPolynomial build_selberg(double s, double delta, long long K, Sign sign) {
  if (K < 1) fail(ErrorCode::InvalidDegree, "degree K must be >= 1");
  if (!(s > 0.0) || !(delta > 0.0)) fail(ErrorCode::DegenerateWindow, "s and Delta must be positive");
  const double w = s / delta;
  if (!(w > 0.0 && w < 0.5)) fail(ErrorCode::DegenerateWindow, "half width s/Delta must lie in (0, 1/2)");

  SelbergPolynomial poly;
  poly.sign = sign;
  poly.K = K;
  poly.half_width = w;
  poly.coeffs.resize(static_cast<std::size_t>(K + 1));
  const double pm = sign == Sign::Plus ? 1.0 : -1.0;
  const double inv = 1.0 / static_cast<double>(K + 1);
  poly.coeffs[0] = 2.0 * w + pm * inv;
  for (long long j = 1; j <= K; ++j) {
    const double u = static_cast<double>(j) * inv;
    // angle 2 pi j w reduced exactly mod 1 first
    const double turn = eft::to_unit(eft::frac_product(static_cast<double>(j), w));
    const double ang = 2.0 * std::numbers::pi * turn;
    const double c = vaaler_multiplier(u) * std::sin(ang) / (std::numbers::pi * static_cast<double>(j)) +
                     pm * (1.0 - u) * std::cos(ang) * inv;
    poly.coeffs[static_cast<std::size_t>(j)] = c;
  }
  return poly;
}

/// Sum over |j| <= K of c_j e(jx). The phasor e(jx) is advanced by complex
/// multiplication and reseeded from an exactly reduced angle every 32 terms.
inline double eval_trig(const SelbergPolynomial& poly, double x) {
  if (poly.coeffs.empty()) return 0.0;
  const auto unit = [](double turn) {
    const double ang = 2.0 * std::numbers::pi * turn;
    return std::complex<double>(std::cos(ang), std::sin(ang));
  };
  const eft::DoubleDouble base = eft::frac(eft::DoubleDouble{x, 0.0});
  const std::complex<double> step = unit(eft::to_unit(base));
  std::complex<double> phasor = 1.0;
  double acc = 0.0;
  const std::size_t n = poly.coeffs.size();
  for (std::size_t j = 1; j < n; ++j) {
    if (j % 32 == 0)
      phasor = unit(eft::frac_multiple(static_cast<long long>(j), base));
    else
      phasor *= step;
    acc += (poly.coeffs[j] * phasor).real();
  }
  return poly.coeffs[0].real() + 2.0 * acc;
}

struct SandwichReport {
  double max_violation = 0.0;
  double worst_x = 0.0;
  std::size_t points = 0;
  double min_plus = 0.0;
  double integral_gap = 0.0;  // c_0(plus) - c_0(minus)
  bool pass = false;
};

inline constexpr double kSandwichTolerance = 1e-12;

/// Checks minus <= 1_{[-w, w]} <= plus on `grid_size` equispaced torus points
/// plus the four points adjacent to the window ends.
inline SandwichReport verify_sandwich(const SelbergPolynomial& minus, const SelbergPolynomial& plus,
                                      std::size_t grid_size, unsigned threads = 1) {
  if (minus.half_width != plus.half_width || minus.sign != Sign::Minus || plus.sign != Sign::Plus)
    fail(ErrorCode::MismatchedWindows, "sandwich needs a minus and a plus polynomial on the same window");
  const double w = plus.half_width;
  std::vector<double> xs(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) xs[k] = static_cast<double>(k) / static_cast<double>(grid_size);
  for (double e : {std::nextafter(w, 0.0), std::nextafter(w, 1.0)}) {
    xs.push_back(e);
    xs.push_back(-e);
  }

  std::vector<double> violation(xs.size()), plus_value(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t k) {
    const double x = xs[k];
    const double indicator = torus_distance(x) <= w ? 1.0 : 0.0;
    const double lo = eval_trig(minus, x);
    const double hi = eval_trig(plus, x);
    plus_value[k] = hi;
    violation[k] = std::max({0.0, lo - indicator, indicator - hi});
  });

  SandwichReport report;
  report.points = xs.size();
  report.min_plus = *std::min_element(plus_value.begin(), plus_value.end());
  const auto worst = std::max_element(violation.begin(), violation.end());
  report.max_violation = *worst;
  report.worst_x = xs[static_cast<std::size_t>(worst - violation.begin())];
  report.integral_gap = plus.coeffs[0].real() - minus.coeffs[0].real();
  report.pass = report.max_violation <= kSandwichTolerance;
  return report;
}

}  // namespace finescale
