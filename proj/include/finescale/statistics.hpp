#pragma once

// Vector pair correlation R_2(s) of the fractional parts {alpha . a(x)} over
// the lattice box B(r, N) = {0..N}^r, counted with a circular two-pointer
// sweep over the sorted fractional parts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finescale/eft.hpp"
#include "finescale/error.hpp"
#include "finescale/sequences.hpp"

namespace finescale {

struct AlphaVector {
  std::vector<double> coords;
};

struct ProjectedValues {
  std::vector<double> fracs;  // sorted, each in [0, 1)
  std::size_t count = 0;
  double precision_bound = 0.0;
};

struct PPCReport {
  long long N = 0;
  int r = 0;
  std::vector<double> s_grid;
  std::vector<double> r2_values;
  std::vector<std::uint64_t> pair_counts;
  double deviation = 0.0;           // max |R_2(s) - 2s|
  double relative_deviation = 0.0;  // max |R_2(s) - 2s| / (2s)
  std::vector<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> draw_index;
};

/// Distance from t to the nearest integer.
inline double torus_distance(double t) {
  return std::abs(t - std::nearbyint(t));
}

inline double lattice_normalizer(long long N, int r) {
  return std::pow(static_cast<double>(N), r);
}

/// Fractional parts {alpha . a(x)} for every x in B(r, N), sorted ascending.
/// Products are formed error-free so the result is accurate to about
/// (r + 2) * 2^-52 relative to the given doubles.
inline ProjectedValues project_values(std::span<const ComponentValues> components, const AlphaVector& alpha) {
  const std::size_t r = components.size();
  if (r == 0) fail(ErrorCode::InvalidSpec, "no components to project");
  if (alpha.coords.size() != r)
    fail(ErrorCode::InvalidSpec, "alpha has " + std::to_string(alpha.coords.size()) + " coordinates, spec has r = " +
                                     std::to_string(r));

  std::vector<std::vector<eft::DoubleDouble>> tables(r);
  double product_max = 0.0;
  std::size_t count = 1;
  for (std::size_t i = 0; i < r; ++i) {
    const double a = alpha.coords[i];
    if (!std::isfinite(a)) fail(ErrorCode::MagnitudeGuard, "alpha is not finite");
    const auto& values = components[i].values;
    tables[i].reserve(values.size());
    for (double v : values) {
      const double p = std::abs(a * v);
      if (p > kMagnitudeLimit)
        fail(ErrorCode::MagnitudeGuard, "|alpha_i * a_i(n)| exceeds 2^45 in component " + std::to_string(i));
      product_max = std::max(product_max, p);
      tables[i].push_back(eft::frac_product(a, v));
    }
    count *= values.size();
  }

  ProjectedValues out;
  out.count = count;
  out.fracs.resize(count);
  // error of the compensated pipeline; 2^-40 is the contract ceiling
  out.precision_bound = static_cast<double>(r + 2) * 0x1p-52 + static_cast<double>(r) * product_max * 0x1p-100;
  if (out.precision_bound > 0x1p-40) fail(ErrorCode::MagnitudeGuard, "projected precision exceeds 2^-40");

  std::vector<std::size_t> index(r, 0);
  for (std::size_t k = 0; k < count; ++k) {
    eft::DoubleDouble acc = tables[0][index[0]];
    for (std::size_t i = 1; i < r; ++i) acc = eft::frac(eft::add(acc, tables[i][index[i]]));
    out.fracs[k] = eft::to_unit(acc);
    for (std::size_t i = r; i-- > 0;) {
      if (++index[i] < tables[i].size()) break;
      index[i] = 0;
    }
  }
  std::sort(out.fracs.begin(), out.fracs.end());
  return out;
}

inline ProjectedValues project_values(const VectorSequenceSpec& spec, const AlphaVector& alpha) {
  const auto components = materialize(spec);
  return project_values(std::span<const ComponentValues>(components), alpha);
}

/// Number of ordered pairs (u, v), u != v, with torus_distance(f[u] - f[v])
/// <= window. `sorted` must be ascending in [0, 1) and window < 1/2.
///
/// Each unordered pair is met exactly once as a forward circular gap from
/// one endpoint: the gap f[j] - f[i] for j after i, or 1 + (f[j] - f[i]) once
/// the sweep wraps past the end of the array.
inline std::uint64_t count_close_pairs(std::span<const double> sorted, double window) {
  const std::size_t m = sorted.size();
  if (m < 2) return 0;
  auto gap = [&](std::size_t i, std::size_t k) {
    // k in [i+1, i+m-1] addresses the doubled array
    if (k < m) return sorted[k] - sorted[i];
    return 1.0 + (sorted[k - m] - sorted[i]);
  };
  std::uint64_t unordered = 0;
  std::size_t end = 0;  // last k (absolute, doubled array) within the window
  for (std::size_t i = 0; i < m; ++i) {
    end = std::max(end, i);
    while (end + 1 <= i + m - 1 && gap(i, end + 1) <= window) ++end;
    unordered += end - i;
  }
  return 2 * unordered;
}

/// R_2(s) = #{ordered pairs within s / N^r} / N^r for every s in the grid.
inline PPCReport pair_correlation(const ProjectedValues& proj, long long N, int r, std::span<const double> s_grid) {
  PPCReport report;
  report.N = N;
  report.r = r;
  report.s_grid.assign(s_grid.begin(), s_grid.end());
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (!(s_grid[k] > 0.0)) fail(ErrorCode::InvalidSpec, "s values must be positive");
    if (k > 0 && !(s_grid[k] > s_grid[k - 1])) fail(ErrorCode::InvalidSpec, "s grid must be ascending");
  }
  if (proj.fracs.size() < 2) {
    // no pairs at all (single lattice point)
    report.r2_values.assign(s_grid.size(), 0.0);
    report.pair_counts.assign(s_grid.size(), 0);
  } else {
    const double norm = lattice_normalizer(N, r);
    for (double s : s_grid) {
      const double window = s / norm;
      if (window > 0.5)
        fail(ErrorCode::WindowTooWide, "window s/N^r = " + std::to_string(window) + " exceeds 1/2");
      // at exactly 1/2 every torus distance qualifies
      const std::uint64_t m = proj.fracs.size();
      const std::uint64_t pairs = window == 0.5 ? m * (m - 1) : count_close_pairs(proj.fracs, window);
      report.pair_counts.push_back(pairs);
      report.r2_values.push_back(static_cast<double>(pairs) / norm);
    }
  }
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    const double dev = std::abs(report.r2_values[k] - 2.0 * s_grid[k]);
    report.deviation = std::max(report.deviation, dev);
    report.relative_deviation = std::max(report.relative_deviation, dev / (2.0 * s_grid[k]));
  }
  return report;
}

}  // namespace finescale
