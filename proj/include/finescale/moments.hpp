#pragma once

// Expectation and variance of pair-correlation functionals over alpha ~ mu.
//
// For a trigonometric polynomial f = sum c_j e(jx) the pair sum factorises:
//   sum_{x != y in B(r,N)} f(alpha . (a(x) - a(y))) = sum_j c_j (|S_j|^2 - M),
// with M = (N+1)^r and S_j = prod_i sum_n e(j alpha_i a^i(n)). Each draw then
// costs O(K r (N+1)) instead of O(K M^2).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "finescale/eft.hpp"
#include "finescale/error.hpp"
#include "finescale/measure_mu.hpp"
#include "finescale/parallel.hpp"
#include "finescale/selberg.hpp"
#include "finescale/sequences.hpp"
#include "finescale/statistics.hpp"

namespace finescale {

enum class MomentKind { ExpectationIndicator, ExpectationSelberg, Variance };

inline const char* to_string(MomentKind k) {
  switch (k) {
    case MomentKind::ExpectationIndicator: return "expectation_indicator";
    case MomentKind::ExpectationSelberg: return "expectation_selberg";
    case MomentKind::Variance: return "variance";
  }
  return "unknown";
}

/// Monte Carlo over alpha ~ mu (or a uniform box).
struct MonteCarloAlpha {
  MuSampler sampler;
  std::size_t n_samples = 0;
  std::optional<AlphaBox> box;
};

/// Midpoint tensor grid over mu truncated to [-truncation, truncation]^r,
/// weights proportional to the density and normalised to sum to one.
struct QuadratureAlpha {
  double truncation = 50.0;
  std::size_t nodes_per_axis = 100000;
};

using AlphaSource = std::variant<MonteCarloAlpha, QuadratureAlpha>;

struct MomentReport {
  MomentKind kind = MomentKind::ExpectationIndicator;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  long long N = 0;
  int r = 0;
  double s = 0.0;
  long long t = 0;
  long long K = 0;
  Sign sign = Sign::Plus;
  double c0 = 0.0;
  /// 2s for the indicator, N^r c_0 for the Selberg expectation, 0 for the variance.
  double target = 0.0;
  /// N * |estimate - target|, the empirical constant of the O(1/N) term.
  double bias_constant = 0.0;
  std::optional<std::uint64_t> seed;
  bool quadrature = false;
};

/// Cost ceiling for Selberg moments, in phasor updates (draws * K * sum (N+1)).
inline constexpr double kMomentBudget = 2e10;

namespace detail {

struct WeightedAlpha {
  std::vector<AlphaVector> alphas;
  std::vector<double> weights;
  bool monte_carlo = true;
  std::optional<std::uint64_t> seed;
};

inline WeightedAlpha expand(const AlphaSource& source, int r) {
  WeightedAlpha out;
  if (const auto* mc = std::get_if<MonteCarloAlpha>(&source)) {
    if (mc->n_samples < 2) fail(ErrorCode::InvalidSpec, "Monte Carlo moments need at least 2 samples");
    MuSampler sampler = mc->sampler;
    out.seed = sampler.seed;
    for (std::size_t k = 0; k < mc->n_samples; ++k)
      out.alphas.push_back(mc->box ? sample_alpha_box(sampler, r, *mc->box) : sample_alpha(sampler, r));
    out.weights.assign(mc->n_samples, 1.0 / static_cast<double>(mc->n_samples));
    return out;
  }
  const auto& q = std::get<QuadratureAlpha>(source);
  out.monte_carlo = false;
  const std::size_t n = q.nodes_per_axis;
  const double h = 2.0 * q.truncation / static_cast<double>(n);
  std::vector<double> nodes(n), dens(n);
  for (std::size_t k = 0; k < n; ++k) {
    nodes[k] = -q.truncation + (static_cast<double>(k) + 0.5) * h;
    dens[k] = mu_density(nodes[k]);
  }
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= n;
  if (total > 100'000'000) fail(ErrorCode::BudgetExceeded, "quadrature grid exceeds 1e8 nodes");
  std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
  for (std::size_t k = 0; k < total; ++k) {
    AlphaVector a;
    double w = 1.0;
    for (int i = 0; i < r; ++i) {
      a.coords.push_back(nodes[idx[i]]);
      w *= dens[idx[i]];
    }
    out.alphas.push_back(std::move(a));
    out.weights.push_back(w);
    for (int i = r; i-- > 0;) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  const double sum = pairwise_sum(out.weights);
  for (double& w : out.weights) w /= sum;
  return out;
}

inline void summarize(MomentReport& report, const WeightedAlpha& draws, const std::vector<double>& values) {
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) terms[k] = draws.weights[k] * values[k];
  report.estimate = pairwise_sum(terms);
  report.n_samples = values.size();
  report.seed = draws.seed;
  report.quadrature = !draws.monte_carlo;
  if (draws.monte_carlo && values.size() > 1) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double d = values[k] - report.estimate;
      terms[k] = d * d;
    }
    const double var = pairwise_sum(terms) / static_cast<double>(values.size() - 1);
    report.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
}

}  // namespace detail

/// |S_j|^2 for j = 1..K, where S_j = sum over B(r,N) of e(j alpha . a(x)).
inline std::vector<double> lattice_power_spectrum(std::span<const ComponentValues> components,
                                                  const AlphaVector& alpha, long long K) {
  std::vector<double> power(static_cast<std::size_t>(K + 1), 1.0);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& values = components[i].values;
    const std::size_t n = values.size();
    std::vector<eft::DoubleDouble> phase(n);
    std::vector<std::complex<double>> step(n), cur(n, 1.0);
    for (std::size_t m = 0; m < n; ++m) {
      if (std::abs(alpha.coords[i] * values[m]) > kMagnitudeLimit)
        fail(ErrorCode::MagnitudeGuard, "|alpha_i * a_i(n)| exceeds 2^45");
      phase[m] = eft::frac_product(alpha.coords[i], values[m]);
      const double ang = 2.0 * std::numbers::pi * eft::to_unit(phase[m]);
      step[m] = {std::cos(ang), std::sin(ang)};
    }
    for (long long j = 1; j <= K; ++j) {
      double re = 0.0, im = 0.0;
      const bool reseed = j % 32 == 0;
      for (std::size_t m = 0; m < n; ++m) {
        if (reseed) {
          const double ang = 2.0 * std::numbers::pi * eft::frac_multiple(j, phase[m]);
          cur[m] = {std::cos(ang), std::sin(ang)};
        } else {
          cur[m] *= step[m];
        }
        re += cur[m].real();
        im += cur[m].imag();
      }
      power[static_cast<std::size_t>(j)] *= re * re + im * im;
    }
  }
  return power;
}

/// (1/N^r) sum_{x != y} p(alpha . (a(x) - a(y))) evaluated through the power
/// spectrum. With include_constant = false the c_0 term is dropped (h = f - c_0).
inline double pair_functional(std::span<const ComponentValues> components, const AlphaVector& alpha,
                              const SelbergPolynomial& poly, long long N, bool include_constant = true) {
  double lattice = 1.0;
  for (const auto& c : components) lattice *= static_cast<double>(c.values.size());
  if (lattice < 2.0) return 0.0;  // no pairs
  const long long K = static_cast<long long>(poly.coeffs.size()) - 1;
  double total = include_constant ? poly.coeffs[0].real() * (lattice * lattice - lattice) : 0.0;
  if (K >= 1) {
    const auto power = lattice_power_spectrum(components, alpha, K);
    double acc = 0.0;
    for (long long j = 1; j <= K; ++j)
      acc += 2.0 * poly.coeffs[static_cast<std::size_t>(j)].real() * (power[static_cast<std::size_t>(j)] - lattice);
    total += acc;
  }
  return total / lattice_normalizer(N, static_cast<int>(components.size()));
}

inline MomentReport indicator_expectation(const VectorSequenceSpec& spec, double s, const AlphaSource& source,
                                          unsigned threads = 1) {
  const auto components = materialize(spec);
  const int r = spec.r();
  const auto draws = detail::expand(source, r);
  if (spec.N > 0 && s / lattice_normalizer(spec.N, r) > 0.5)
    fail(ErrorCode::WindowTooWide, "window s/N^r must not exceed 1/2");
  const double grid[] = {s};
  std::vector<double> values(draws.alphas.size());
  parallel_for(values.size(), threads, [&](std::size_t k) {
    const auto proj = project_values(std::span<const ComponentValues>(components), draws.alphas[k]);
    values[k] = pair_correlation(proj, spec.N, r, grid).r2_values[0];
  });
  MomentReport report;
  report.kind = MomentKind::ExpectationIndicator;
  report.N = spec.N;
  report.r = r;
  report.s = s;
  report.target = 2.0 * s;
  detail::summarize(report, draws, values);
  report.bias_constant = static_cast<double>(spec.N) * std::abs(report.estimate - report.target);
  return report;
}

namespace detail {

inline void check_budget(const std::vector<ComponentValues>& components, long long K, std::size_t draws) {
  double per_draw = 0.0;
  for (const auto& c : components) per_draw += static_cast<double>(c.values.size());
  const double cost = per_draw * static_cast<double>(K) * static_cast<double>(draws);
  if (cost > kMomentBudget)
    fail(ErrorCode::BudgetExceeded, "moment cost " + std::to_string(cost) + " exceeds budget");
}

inline MomentReport selberg_moment(MomentKind kind, const VectorSequenceSpec& spec, const SelbergPolynomial& poly,
                                   double s, const AlphaSource& source, unsigned threads) {
  const auto components = materialize(spec);
  const int r = spec.r();
  const auto draws = expand(source, r);
  const long long K = static_cast<long long>(poly.coeffs.size()) - 1;
  check_budget(components, K, draws.alphas.size());
  std::vector<double> values(draws.alphas.size());
  parallel_for(values.size(), threads, [&](std::size_t k) {
    const std::span<const ComponentValues> view(components);
    if (kind == MomentKind::Variance) {
      const double d = pair_functional(view, draws.alphas[k], poly, spec.N, false);
      values[k] = d * d;
    } else {
      values[k] = pair_functional(view, draws.alphas[k], poly, spec.N, true);
    }
  });
  MomentReport report;
  report.kind = kind;
  report.N = spec.N;
  report.r = r;
  report.s = s;
  report.t = poly.t_multiplier;
  report.K = poly.K;
  report.sign = poly.sign;
  report.c0 = poly.coeffs.empty() ? 0.0 : poly.coeffs[0].real();
  report.target = kind == MomentKind::Variance ? 0.0 : lattice_normalizer(spec.N, r) * report.c0;
  summarize(report, draws, values);
  report.bias_constant = static_cast<double>(spec.N) * std::abs(report.estimate - report.target);
  return report;
}

}  // namespace detail

/// Selberg polynomial f^{+/-}_{K, s, N^r} with K = t N^r capped at 10^4.
inline SelbergPolynomial moment_polynomial(const VectorSequenceSpec& spec, double s, long long t, Sign sign) {
  if (t < 1) fail(ErrorCode::InvalidDegree, "t must be >= 1");
  const long long K = selberg_degree(spec.N, spec.r(), t);
  auto poly = build_selberg(s, lattice_normalizer(spec.N, spec.r()), K, sign);
  poly.t_multiplier = t;
  return poly;
}

inline MomentReport selberg_expectation(const VectorSequenceSpec& spec, const SelbergPolynomial& poly, double s,
                                        const AlphaSource& source, unsigned threads = 1) {
  return detail::selberg_moment(MomentKind::ExpectationSelberg, spec, poly, s, source, threads);
}

inline MomentReport selberg_expectation(const VectorSequenceSpec& spec, double s, long long t,
                                        const AlphaSource& source, unsigned threads = 1, Sign sign = Sign::Plus) {
  return selberg_expectation(spec, moment_polynomial(spec, s, t, sign), s, source, threads);
}

inline MomentReport variance_estimate(const VectorSequenceSpec& spec, const SelbergPolynomial& poly, double s,
                                      const AlphaSource& source, unsigned threads = 1) {
  return detail::selberg_moment(MomentKind::Variance, spec, poly, s, source, threads);
}

inline MomentReport variance_estimate(const VectorSequenceSpec& spec, double s, long long t,
                                      const AlphaSource& source, unsigned threads = 1, Sign sign = Sign::Plus) {
  return variance_estimate(spec, moment_polynomial(spec, s, t, sign), s, source, threads);
}

}  // namespace finescale
