#pragma once

// Additive energies E_{N,gamma} = #{(n1,n2,n3,n4) : |v1 - v2 + v3 - v4| < gamma}
// and the two-coefficient Diophantine count behind the first PPC criterion.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "finescale/eft.hpp"
#include "finescale/error.hpp"
#include "finescale/parallel.hpp"
#include "finescale/sequences.hpp"

namespace finescale {

enum class EnergyMethod { Fast, Brute };

inline const char* to_string(EnergyMethod m) { return m == EnergyMethod::Fast ? "fast" : "brute"; }

struct EnergyReport {
  long long N = 0;
  double gamma = 1.0;
  std::uint64_t count = 0;
  int component_index = 0;
  EnergyMethod method = EnergyMethod::Fast;
};

/// Default ceiling on the number of pair sums held in memory (N <= 8192).
inline constexpr std::uint64_t kPairSumCap = std::uint64_t{1} << 26;

inline constexpr long long kBruteForceMaxN = 64;

namespace detail {

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(ErrorCode::InvalidSpec, "gamma must lie in (0, 1]");
}

// (b - a) for normalised double-doubles
inline double dd_gap(const eft::DoubleDouble& a, const eft::DoubleDouble& b) {
  return (b.hi - a.hi) + (b.lo - a.lo);
}

}  // namespace detail

/// Counts ordered quadruples with |v[n1] - v[n2] + v[n3] - v[n4]| < gamma.
///
/// The N^2 pair sums v[n1] + v[n3] are formed exactly as double-doubles and
/// sorted; a forward sweep then counts pairs of sums closer than gamma. Every
/// sum is paired with itself, and each unordered pair of distinct positions
/// contributes two ordered quadruple classes.
inline EnergyReport additive_energy(std::span<const double> values, double gamma,
                                    std::uint64_t cap = kPairSumCap) {
  detail::check_gamma(gamma);
  const std::uint64_t n = values.size();
  if (n == 0) fail(ErrorCode::InvalidSpec, "additive energy needs at least one value");
  if (n * n > cap)
    fail(ErrorCode::CapacityGuard, std::to_string(n) + "^2 pair sums exceed the cap of " + std::to_string(cap));

  std::vector<eft::DoubleDouble> sums;
  sums.reserve(n * n);
  for (double a : values)
    for (double b : values) sums.push_back(eft::two_sum(a, b));
  std::sort(sums.begin(), sums.end(), [](const eft::DoubleDouble& x, const eft::DoubleDouble& y) {
    return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo);
  });

  const std::size_t m = sums.size();
  std::uint64_t close = 0;
  std::size_t end = 0;
  for (std::size_t p = 0; p < m; ++p) {
    end = std::max(end, p);
    while (end + 1 < m && detail::dd_gap(sums[p], sums[end + 1]) < gamma) ++end;
    close += end - p;
  }
  EnergyReport report;
  report.N = static_cast<long long>(n);
  report.gamma = gamma;
  report.count = m + 2 * close;
  report.method = EnergyMethod::Fast;
  return report;
}

/// Quadruple enumeration, N <= 64.
inline EnergyReport additive_energy_bruteforce(std::span<const double> values, double gamma) {
  detail::check_gamma(gamma);
  const auto n = static_cast<long long>(values.size());
  if (n > kBruteForceMaxN) fail(ErrorCode::TooLarge, "brute force is limited to N <= 64");
  std::uint64_t count = 0;
  for (long double a : values)
    for (long double b : values)
      for (long double c : values)
        for (long double d : values)
          if (std::abs(a - b + c - d) < static_cast<long double>(gamma)) ++count;
  EnergyReport report;
  report.N = n;
  report.gamma = gamma;
  report.count = count;
  report.method = EnergyMethod::Brute;
  return report;
}

struct Thm1Config {
  long long jmax = 1;
  std::uint64_t budget = 2'000'000'000;
};

/// Counts tuples (j1, j2, x, y, z, w) with 1 <= j1, j2 <= Jmax, x != y and
/// z != w in B(r, N), and max_i |j1 (a^i(x_i) - a^i(y_i)) - j2 (a^i(z_i) - a^i(w_i))| < 1.
///
/// For fixed difference vectors and j2, each component admits an interval of
/// j1; the count is the number of integers in their intersection. Interval
/// ends are snapped to the exact predicate so boundary ties follow `< 1`.
inline std::uint64_t thm1_count(std::span<const ComponentValues> components, const Thm1Config& config) {
  if (config.jmax < 1) fail(ErrorCode::InvalidSpec, "Jmax must be at least 1");
  const std::size_t r = components.size();
  if (r == 0) fail(ErrorCode::InvalidSpec, "no components");

  std::uint64_t lattice = 1;
  for (const auto& c : components) lattice *= c.values.size();
  const std::uint64_t pairs = lattice * (lattice - 1);
  const long double cost = static_cast<long double>(pairs) * pairs * config.jmax;
  if (cost > static_cast<long double>(config.budget))
    fail(ErrorCode::BudgetExceeded, "pairs^2 * Jmax = " + std::to_string(static_cast<double>(cost)) +
                                        " exceeds budget " + std::to_string(config.budget));

  // difference vectors rho(u) for every ordered distinct lattice pair, row-major
  std::vector<double> rho;
  rho.reserve(pairs * r);
  std::vector<std::size_t> x(r), y(r);
  auto decode = [&](std::uint64_t k, std::vector<std::size_t>& idx) {
    for (std::size_t i = r; i-- > 0;) {
      idx[i] = k % components[i].values.size();
      k /= components[i].values.size();
    }
  };
  for (std::uint64_t a = 0; a < lattice; ++a) {
    decode(a, x);
    for (std::uint64_t b = 0; b < lattice; ++b) {
      if (a == b) continue;
      decode(b, y);
      for (std::size_t i = 0; i < r; ++i) {
        const double d = components[i].values[x[i]] - components[i].values[y[i]];
        if (d == 0.0 && x[i] != y[i])
          fail(ErrorCode::ZeroDifference, "component " + std::to_string(i) + " repeats a value");
        rho.push_back(d);
      }
    }
  }

  const long long jmax = config.jmax;
  std::uint64_t total = 0;
  for (std::uint64_t u = 0; u < pairs; ++u) {
    const double* ru = &rho[u * r];
    for (std::uint64_t v = 0; v < pairs; ++v) {
      const double* rv = &rho[v * r];
      for (long long j2 = 1; j2 <= jmax; ++j2) {
        long long lo = 1, hi = jmax;
        for (std::size_t i = 0; i < r && lo <= hi; ++i) {
          const double target = static_cast<double>(j2) * rv[i];
          auto admissible = [&](long long j1) { return std::abs(static_cast<double>(j1) * ru[i] - target) < 1.0; };
          if (ru[i] == 0.0) {
            // shared coordinate: the constraint does not involve j1
            if (!(std::abs(target) < 1.0)) hi = lo - 1;
            continue;
          }
          const double e1 = (target - 1.0) / ru[i];
          const double e2 = (target + 1.0) / ru[i];
          // candidate integers strictly inside (min, max), clamped to [lo, hi]
          const double first = std::clamp(std::floor(std::min(e1, e2)) + 1.0, lo * 1.0, hi + 1.0);
          const double last = std::clamp(std::ceil(std::max(e1, e2)) - 1.0, lo - 1.0, hi * 1.0);
          long long clo = static_cast<long long>(first);
          long long chi = static_cast<long long>(last);
          // snap both ends to the exact predicate; the admissible set is contiguous
          while (clo > lo && admissible(clo - 1)) --clo;
          while (chi < hi && admissible(chi + 1)) ++chi;
          while (clo <= chi && !admissible(clo)) ++clo;
          while (chi >= clo && !admissible(chi)) --chi;
          lo = clo;
          hi = chi;
        }
        if (lo <= hi) total += static_cast<std::uint64_t>(hi - lo + 1);
      }
    }
  }
  return total;
}

inline std::uint64_t thm1_count(const VectorSequenceSpec& spec, const Thm1Config& config) {
  const auto components = materialize(spec);
  return thm1_count(std::span<const ComponentValues>(components), config);
}

enum class GammaRule { Constant, InverseN };

struct GammaSchedule {
  GammaRule rule = GammaRule::Constant;
  double gamma = 1.0;

  double at(long long N) const { return rule == GammaRule::Constant ? gamma : 1.0 / static_cast<double>(N); }
};

/// E_{N,gamma} for each N in the grid, over the values a(1..N).
inline std::vector<EnergyReport> energy_table(const ComponentSpec& spec, std::span<const long long> n_grid,
                                              GammaSchedule schedule, unsigned threads = 1,
                                              int component_index = 0) {
  if (n_grid.empty()) return {};
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (n_grid[k] < 1) fail(ErrorCode::InvalidSpec, "grid values must be >= 1");
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) fail(ErrorCode::InvalidSpec, "N grid must be ascending");
  }
  const ComponentValues all = materialize(spec, n_grid.back());
  std::vector<EnergyReport> out(n_grid.size());
  parallel_for(n_grid.size(), threads, [&](std::size_t k) {
    const long long N = n_grid[k];
    std::span<const double> prefix(all.values.data() + 1, static_cast<std::size_t>(N));
    out[k] = additive_energy(prefix, schedule.at(N));
    out[k].component_index = component_index;
  });
  return out;
}

}  // namespace finescale
