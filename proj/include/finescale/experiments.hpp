#pragma once

// Growth-exponent fits for the energy hypotheses and PPC convergence sweeps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finescale/energy.hpp"
#include "finescale/error.hpp"
#include "finescale/measure_mu.hpp"
#include "finescale/parallel.hpp"
#include "finescale/sequences.hpp"
#include "finescale/statistics.hpp"

namespace finescale {

struct SlopeFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log N, log count)
};

/// Ordinary least squares of log count against log N.
inline SlopeFit fit_exponent(std::span<const std::pair<long long, double>> table) {
  if (table.size() < 4) fail(ErrorCode::TooFewPoints, "exponent fit needs at least 4 points");
  SlopeFit fit;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto [n, count] = table[k];
    if (!(count > 0.0)) fail(ErrorCode::NonPositiveCount, "counts must be positive for a log-log fit");
    if (n < 1 || (k > 0 && n <= table[k - 1].first))
      fail(ErrorCode::InvalidSpec, "N must be positive and ascending");
    fit.points.emplace_back(std::log(static_cast<double>(n)), std::log(count));
  }
  const double m = static_cast<double>(fit.points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : fit.points) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    double sse = 0.0;
    for (const auto& [x, y] : fit.points) {
      const double e = y - (fit.intercept + fit.exponent * x);
      sse += e * e;
    }
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

/// Energy exponent ceiling (280 - 136/r) / 89 of the additive-energy criterion.
inline double thm2_threshold(int r) {
  if (r < 2) fail(ErrorCode::InvalidR, "threshold is defined for r >= 2");
  return (280.0 - 136.0 / static_cast<double>(r)) / 89.0;
}

enum class Theorem { T1, T2, T3 };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "?";
}

struct HypothesisParams {
  double delta_margin = 0.05;
  double eta = 0.1;
  double delta = 0.1;
  /// Jmax for T1; 0 means N^r at each grid point.
  long long jmax = 0;
  std::uint64_t thm1_budget = 2'000'000'000;
  /// T3 bound multiple of the median ratio.
  double ratio_bound = 2.0;
  unsigned threads = 1;
};

struct ComponentVerdict {
  int component = 0;
  std::vector<std::pair<long long, double>> table;
  std::optional<SlopeFit> fit;
  std::vector<double> ratios;  // T3 only
  double median_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
};

struct HypothesisVerdict {
  Theorem theorem = Theorem::T2;
  int r = 0;
  double fitted = 0.0;     // largest fitted exponent (T1, T2) or largest max/median ratio (T3)
  double threshold = 0.0;  // theorem exponent (T1, T2) or median multiple (T3)
  double delta_margin = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  std::vector<long long> grid;
  std::vector<ComponentVerdict> components;
  bool pass = false;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline void check_grid(std::span<const long long> grid) {
  if (grid.empty()) fail(ErrorCode::InvalidSpec, "empty N grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (grid[k] <= grid[k - 1]) fail(ErrorCode::InvalidSpec, "N grid must be ascending");
}

}  // namespace detail

/// Verdict for a precomputed (N, count) table: exponent test for T1/T2 or the
/// median-ratio rule for T3 (with gamma = 1/N).
inline ComponentVerdict judge_table(Theorem theorem, std::vector<std::pair<long long, double>> table,
                                    double threshold, const HypothesisParams& params) {
  ComponentVerdict v;
  v.table = std::move(table);
  if (theorem == Theorem::T3) {
    for (const auto& [n, count] : v.table) {
      const double N = static_cast<double>(n);
      const double gamma = 1.0 / N;
      v.ratios.push_back(count / (std::pow(N, 2.0 + params.eta) + gamma * std::pow(N, 3.0 - params.delta)));
    }
    v.median_ratio = detail::median(v.ratios);
    v.max_ratio = *std::max_element(v.ratios.begin(), v.ratios.end());
    v.pass = v.max_ratio <= params.ratio_bound * v.median_ratio;
  } else {
    v.fit = fit_exponent(v.table);
    v.pass = v.fit->exponent <= threshold - params.delta_margin;
  }
  return v;
}

inline HypothesisVerdict check_hypotheses(const VectorSequenceSpec& spec, Theorem theorem,
                                          std::span<const long long> grid, const HypothesisParams& params = {}) {
  detail::check_grid(grid);
  HypothesisVerdict verdict;
  verdict.theorem = theorem;
  verdict.r = spec.r();
  verdict.delta_margin = params.delta_margin;
  verdict.eta = params.eta;
  verdict.delta = params.delta;
  verdict.grid.assign(grid.begin(), grid.end());

  switch (theorem) {
    case Theorem::T1: {
      verdict.threshold = 4.0 * spec.r();
      std::vector<std::pair<long long, double>> table(grid.size());
      parallel_for(grid.size(), params.threads, [&](std::size_t k) {
        VectorSequenceSpec at = spec;
        at.N = grid[k];
        const long long jmax =
            params.jmax > 0 ? params.jmax : static_cast<long long>(std::llround(lattice_normalizer(at.N, at.r())));
        table[k] = {grid[k], static_cast<double>(thm1_count(at, Thm1Config{jmax, params.thm1_budget}))};
      });
      verdict.components.push_back(judge_table(theorem, std::move(table), verdict.threshold, params));
      break;
    }
    case Theorem::T2:
    case Theorem::T3: {
      verdict.threshold = theorem == Theorem::T2 ? thm2_threshold(spec.r()) : params.ratio_bound;
      const GammaSchedule schedule =
          theorem == Theorem::T2 ? GammaSchedule{GammaRule::Constant, 1.0} : GammaSchedule{GammaRule::InverseN, 1.0};
      for (int i = 0; i < spec.r(); ++i) {
        const auto reports = energy_table(spec.components[static_cast<std::size_t>(i)], grid, schedule,
                                          params.threads, i);
        std::vector<std::pair<long long, double>> table;
        for (const auto& rep : reports) table.emplace_back(rep.N, static_cast<double>(rep.count));
        auto cv = judge_table(theorem, std::move(table), verdict.threshold, params);
        cv.component = i;
        verdict.components.push_back(std::move(cv));
      }
      break;
    }
  }

  verdict.pass = !verdict.components.empty();
  verdict.fitted = -INFINITY;
  for (const auto& c : verdict.components) {
    verdict.pass = verdict.pass && c.pass;
    const double f = theorem == Theorem::T3 ? c.max_ratio / c.median_ratio : c.fit->exponent;
    verdict.fitted = std::max(verdict.fitted, f);
  }
  return verdict;
}

struct SweepSummary {
  long long N = 0;
  double median_deviation = 0.0;
  double median_relative_deviation = 0.0;
};

struct SweepResult {
  std::vector<PPCReport> reports;  // grid order, then draw order
  std::vector<SweepSummary> summary;
};

/// Largest lattice a sweep will project.
inline constexpr std::uint64_t kSweepLatticeCap = 1'000'000;

/// PPC reports for every N in the grid and each of n_alpha draws. Draw k uses
/// the same alpha at every N (counter positions sampler.counter + k r ...).
inline SweepResult ppc_sweep(const VectorSequenceSpec& spec, std::span<const long long> n_grid,
                             std::span<const double> s_grid, std::size_t n_alpha, const MuSampler& sampler,
                             unsigned threads = 1, std::optional<AlphaBox> box = std::nullopt) {
  SweepResult result;
  if (n_alpha == 0 || n_grid.empty()) return result;
  detail::check_grid(n_grid);
  const int r = spec.r();
  for (long long N : n_grid) {
    const double lattice = std::pow(static_cast<double>(N + 1), r);
    if (lattice > static_cast<double>(kSweepLatticeCap))
      fail(ErrorCode::CapacityGuard, "(N+1)^r exceeds 10^6 at N = " + std::to_string(N));
  }

  std::vector<AlphaVector> alphas;
  MuSampler draw = sampler;
  for (std::size_t k = 0; k < n_alpha; ++k)
    alphas.push_back(box ? sample_alpha_box(draw, r, *box) : sample_alpha(draw, r));

  VectorSequenceSpec largest = spec;
  largest.N = n_grid.back();
  const auto full = materialize(largest);

  result.reports.resize(n_grid.size() * n_alpha);
  parallel_for(result.reports.size(), threads, [&](std::size_t job) {
    const std::size_t g = job / n_alpha;
    const std::size_t k = job % n_alpha;
    const long long N = n_grid[g];
    std::vector<ComponentValues> prefix;
    for (const auto& c : full) {
      ComponentValues p;
      p.values.assign(c.values.begin(), c.values.begin() + N + 1);
      prefix.push_back(std::move(p));
    }
    const auto proj = project_values(std::span<const ComponentValues>(prefix), alphas[k]);
    PPCReport rep = pair_correlation(proj, N, r, s_grid);
    rep.alpha = alphas[k].coords;
    rep.seed = sampler.seed;
    rep.draw_index = k;
    result.reports[job] = std::move(rep);
  });

  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    std::vector<double> dev, rel;
    for (std::size_t k = 0; k < n_alpha; ++k) {
      dev.push_back(result.reports[g * n_alpha + k].deviation);
      rel.push_back(result.reports[g * n_alpha + k].relative_deviation);
    }
    result.summary.push_back({n_grid[g], detail::median(dev), detail::median(rel)});
  }
  return result;
}

}  // namespace finescale
