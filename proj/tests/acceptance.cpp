// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "finescale/finescale.hpp"
#include "oracles.hpp"

using namespace finescale;

namespace {

constexpr std::uint64_t kShippedSeed = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> random_increasing(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> gap(0.01, 2.0);
  std::vector<double> v(n);
  double x = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  for (auto& e : v) {
    e = x;
    x += gap(rng);
  }
  return v;
}

std::vector<std::pair<long long, double>> energy_counts(const ComponentSpec& c, const std::vector<long long>& grid,
                                                        GammaSchedule g) {
  std::vector<std::pair<long long, double>> t;
  for (const auto& rep : energy_table(c, grid, g, 0)) t.emplace_back(rep.N, static_cast<double>(rep.count));
  return t;
}

std::vector<long long> range(long long a, long long b, long long step) {
  std::vector<long long> g;
  for (long long n = a; n <= b; n += step) g.push_back(n);
  return g;
}

Outcome c1_energy_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    const auto v = random_increasing(rng, 1 + rng() % 24);
    for (double g : {1.0, 0.3, 0.05})
      if (additive_energy(v, g).count != additive_energy_bruteforce(v, g).count) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0, fmt("mismatches=%d runtime=%.2fs (limit 10s)", mismatches, secs)};
}

Outcome c2_known_counts() {
  const auto a = additive_energy(std::vector<double>{1, 2}, 1.0).count;
  const auto b = additive_energy(std::vector<double>{1, 2, 3}, 1.0).count;
  const auto c = additive_energy(std::vector<double>{0, 0.5, 1.0}, 0.6).count;
  return {a == 6 && b == 19 && c == 51, fmt("[1,2]->%llu [1,2,3]->%llu [0,.5,1]@0.6->%llu (want 6, 19, 51)",
                                            (unsigned long long)a, (unsigned long long)b, (unsigned long long)c)};
}

Outcome c3_thresholds() {
  const double t2 = thm2_threshold(2), t3 = thm2_threshold(3);
  return {std::abs(t2 - 2.382) <= 0.001 && std::abs(t3 - 2.6367) <= 0.0001, fmt("r=2: %.6f r=3: %.6f", t2, t3)};
}

Outcome c4_lacunary() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = load_spec(harness::spec("lacunary_r2.json"));
  const auto grid = range(100, 400, 50);
  const auto fit = fit_exponent(energy_counts(spec.components[0], grid, {GammaRule::Constant, 1.0}));
  HypothesisParams p;
  p.threads = 0;
  const auto verdict = check_hypotheses(spec, Theorem::T2, grid, p);
  const double secs = seconds_since(t0);
  const bool pass = fit.exponent >= 1.90 && fit.exponent <= 2.20 && verdict.pass && secs < 120.0;
  return {pass, fmt("exponent=%.4f in [1.90, 2.20], T2 verdict=%s (threshold %.4f), runtime=%.1fs", fit.exponent,
                    verdict.pass ? "pass" : "fail", verdict.threshold, secs)};
}

Outcome c5_quadratic_convex() {
  const auto grid = range(64, 512, 64);
  auto t0 = std::chrono::steady_clock::now();
  const auto q = fit_exponent(
      energy_counts(load_spec(harness::spec("quadratic_sqrt2.json")).components[0], grid, {GammaRule::Constant, 1.0}));
  const double tq = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto c = fit_exponent(
      energy_counts(load_spec(harness::spec("convex_1_5.json")).components[0], grid, {GammaRule::Constant, 1.0}));
  const double tc = seconds_since(t0);
  const bool pass = q.exponent <= 2.25 && c.exponent <= 2.5 && tq < 120.0 && tc < 120.0;
  return {pass, fmt("quadratic exponent=%.4f (<= 2.25, %.1fs), n^1.5 exponent=%.4f (<= 2.5, %.1fs)", q.exponent, tq,
                    c.exponent, tc)};
}

Outcome c6_thm3_ratio() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = range(128, 1024, 128);
  HypothesisParams p;
  p.threads = 0;
  const auto table =
      energy_counts(load_spec(harness::spec("power_1_5.json")).components[0], grid, {GammaRule::InverseN, 1.0});
  const auto v = judge_table(Theorem::T3, table, p.ratio_bound, p);
  // trend: log-log slope of the ratio against N
  std::vector<std::pair<long long, double>> ratios;
  for (std::size_t k = 0; k < grid.size(); ++k) ratios.emplace_back(grid[k], v.ratios[k]);
  const double trend = fit_exponent(ratios).exponent;
  const double secs = seconds_since(t0);
  const bool pass = v.pass && trend <= 0.05 && secs < 300.0;
  return {pass, fmt("max/median=%.4f (<= 2), ratio trend exponent=%.4f (<= 0.05), runtime=%.1fs",
                    v.max_ratio / v.median_ratio, trend, secs)};
}

std::uint64_t six_loop(const std::vector<double>& v, long long jmax) {
  std::uint64_t count = 0;
  const std::size_t n = v.size();
  for (long long j1 = 1; j1 <= jmax; ++j1)
    for (long long j2 = 1; j2 <= jmax; ++j2)
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z)
            for (std::size_t w = 0; w < n; ++w)
              if (x != y && z != w) {
                const long double e = static_cast<long double>(j1) * (static_cast<long double>(v[x]) - v[y]) -
                                      static_cast<long double>(j2) * (static_cast<long double>(v[z]) - v[w]);
                if (std::abs(e) < 1.0L) ++count;
              }
  return count;
}

Outcome c7_thm1() {
  std::mt19937_64 rng(7);
  int mismatches = 0, bound_failures = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + rng() % 6;
    const long long jmax = 1 + static_cast<long long>(rng() % 8);
    const auto v = random_increasing(rng, n);
    const std::vector<ComponentValues> c{{v, 0, 0}};
    const auto got = thm1_count(std::span<const ComponentValues>(c), {jmax, 2'000'000'000});
    if (got != six_loop(v, jmax)) ++mismatches;
    if (got < static_cast<std::uint64_t>(jmax) * n * (n - 1)) ++bound_failures;
  }
  return {mismatches == 0 && bound_failures == 0,
          fmt("mismatches=%d diagonal-bound failures=%d over 50 instances", mismatches, bound_failures)};
}

Outcome c8_selberg() {
  bool pass = true;
  std::string detail;
  for (auto [s, delta, K] : {std::tuple{1.0, 64.0, 127LL}, std::tuple{2.0, 256.0, 511LL}}) {
    const auto plus = build_selberg(s, delta, K, Sign::Plus);
    const auto minus = build_selberg(s, delta, K, Sign::Minus);
    const double w = s / delta, inv = 1.0 / static_cast<double>(K + 1);
    const double c0err = std::max(std::abs(plus.coeffs[0].real() - (2 * w + inv)),
                                  std::abs(minus.coeffs[0].real() - (2 * w - inv)));
    double excess = -1.0;
    for (const auto* p : {&plus, &minus})
      for (long long j = 1; j <= K; ++j)
        excess = std::max(excess, std::abs(p->coeff(j)) -
                                      (std::min(2 * w, 1.0 / (std::numbers::pi * static_cast<double>(j))) + inv));
    const auto sw = verify_sandwich(minus, plus, 100000, 0);
    const bool ok = c0err <= 1e-15 && excess <= 0.0 && sw.max_violation <= 1e-12;
    pass = pass && ok;
    detail += fmt("(s=%g,D=%g,K=%lld: c0err=%.1e coef-excess=%.2e violation=%.2e) ", s, delta, K, c0err, excess,
                  sw.max_violation);
  }
  return {pass, detail};
}

Outcome c9_mu() {
  const auto x = sample_mu_many(kShippedSeed, 0, 1'000'000, 0);
  double worst = 0.0;
  for (double u : {0.25, 0.5, 0.75, 1.0, 1.5})
    worst = std::max(worst, std::abs(empirical_charfn(x, u) - std::complex<double>(mu_charfn(u), 0.0)));
  using boost::math::quadrature::gauss_kronrod;
  const double period = 2.0 * std::numbers::pi;
  double mass = 0.0;
  const int pieces = 1592;  // [-1e4, 1e4] up to the last full period
  for (int k = 0; k < pieces; ++k)
    mass += 2.0 * gauss_kronrod<double, 31>::integrate(mu_density, k * period, (k + 1) * period, 5, 1e-14);
  mass += 2.0 * gauss_kronrod<double, 31>::integrate(mu_density, pieces * period, 1e4, 5, 1e-14);
  const bool pass = worst <= 0.01 && std::abs(mass - 1.0) <= 1e-4;
  return {pass, fmt("max |ecf - triangle|=%.5f (<= 0.01), mass on [-1e4,1e4]=%.7f (1 +- 1e-4)", worst, mass)};
}

Outcome c10_ppc() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = load_spec(harness::spec("ppc_r2.json"));
  const std::vector<long long> grid{300};
  const std::vector<double> s{0.5, 1.0, 2.0};
  const auto sweep = ppc_sweep(spec, grid, s, 20, MuSampler{kShippedSeed, 0}, 0);
  const double med = sweep.summary.front().median_relative_deviation;
  const double secs = seconds_since(t0);
  return {med <= 0.10 && secs < 600.0, fmt("median max relative deviation=%.4f (<= 0.10), runtime=%.1fs", med, secs)};
}

Outcome c11_moments() {
  const auto spec = load_spec(harness::spec("ppc_r2.json"));
  VectorSequenceSpec at150 = spec;
  at150.N = 150;
  const auto ind = indicator_expectation(at150, 1.0, MonteCarloAlpha{{kShippedSeed, 0}, 200, {}}, 0);

  std::vector<double> var;
  for (long long N : {50, 100, 200}) {
    VectorSequenceSpec at = spec;
    at.N = N;
    var.push_back(variance_estimate(at, 1.0, 2, MonteCarloAlpha{{kShippedSeed, 0}, 100, {}}, 0).estimate);
  }
  const bool decreasing = var[0] > var[1] && var[1] > var[2];

  // tiny r = 1 instances: quadrature mode against adaptive-quadrature oracles on the same truncated measure
  const QuadratureAlpha quad;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const std::vector<double> golden_values{0, phi, 2 * phi};
  VectorSequenceSpec golden;
  golden.N = 2;
  golden.components = {Explicit{golden_values}};
  const double e1 = std::abs(indicator_expectation(golden, 0.3, quad).estimate -
                             oracle::truncated_indicator(golden_values, 2, 0.3, quad.truncation));
  VectorSequenceSpec power;
  power.N = 4;
  power.components = {Power{1.5}};
  const auto power_values = materialize(power)[0].values;
  const auto f = moment_polynomial(power, 1.0, 1, Sign::Plus);
  const double e2 = std::abs(selberg_expectation(power, f, 1.0, quad).estimate -
                             oracle::truncated_selberg_expectation(power_values, 4, f, quad.truncation));
  const double e3 = std::abs(variance_estimate(power, f, 1.0, quad).estimate -
                             oracle::truncated_variance(power_values, 4, f, quad.truncation));
  const double qerr = std::max({e1, e2, e3});

  const bool pass = ind.estimate >= 1.7 && ind.estimate <= 2.3 && decreasing && qerr <= 1e-3;
  return {pass, fmt("indicator E=%.4f in [1.7, 2.3]; variance N=50,100,200: %.3e %.3e %.3e (%s); quadrature err=%.1e",
                    ind.estimate, var[0], var[1], var[2], decreasing ? "decreasing" : "not decreasing", qerr)};
}

Outcome c12_determinism() {
  std::string bad;
  int n = 0;
  for (const auto& args : harness::determinism_suite()) {
    ++n;
    const auto d = harness::compare_threads(args);
    if (!d.empty()) bad += d + "; ";
  }
  return {bad.empty(), bad.empty() ? fmt("%d invocations identical for --threads 1 and 4", n) : bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C1 energy oracle equivalence", c1_energy_oracle},
      {"C2 known energy counts", c2_known_counts},
      {"C3 energy exponent thresholds", c3_thresholds},
      {"C4 lacunary exponent and T2 verdict", c4_lacunary},
      {"C5 quadratic and convex exponents", c5_quadratic_convex},
      {"C6 T3 ratio bounded", c6_thm3_ratio},
      {"C7 T1 counter vs six-loop", c7_thm1},
      {"C8 Selberg suite", c8_selberg},
      {"C9 mu sampler and density", c9_mu},
      {"C10 PPC convergence", c10_ppc},
      {"C11 moments", c11_moments},
      {"C12 CLI determinism", c12_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
