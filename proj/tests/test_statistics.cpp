#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "finescale/statistics.hpp"
#include "oracles.hpp"

using namespace finescale;
using oracle::quad;

namespace {

std::vector<ComponentValues> comps(std::initializer_list<std::vector<double>> lists) {
  std::vector<ComponentValues> out;
  for (const auto& l : lists) out.push_back(ComponentValues{l, 0.0, 0.0});
  return out;
}

}  // namespace

TEST(TorusDistance, Examples) {
  EXPECT_DOUBLE_EQ(torus_distance(2.25), 0.25);
  EXPECT_DOUBLE_EQ(torus_distance(-0.1), 0.1);
  EXPECT_DOUBLE_EQ(torus_distance(0.5), 0.5);
  EXPECT_DOUBLE_EQ(torus_distance(3.0), 0.0);
}

TEST(TorusDistance, SymmetricPeriodicBounded) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = u(rng);
    EXPECT_DOUBLE_EQ(torus_distance(t), torus_distance(-t));
    EXPECT_NEAR(torus_distance(t), torus_distance(t + 7.0), 1e-13);
    EXPECT_GE(torus_distance(t), 0.0);
    EXPECT_LE(torus_distance(t), 0.5);
  }
}

TEST(Project, ScalarExample) {
  const auto c = comps({{0, 1, 2}});
  const auto p = project_values(std::span<const ComponentValues>(c), AlphaVector{{0.3}});
  ASSERT_EQ(p.fracs.size(), 3u);
  EXPECT_DOUBLE_EQ(p.fracs[0], 0.0);
  EXPECT_NEAR(p.fracs[1], 0.3, 1e-16);
  EXPECT_NEAR(p.fracs[2], 0.6, 1e-16);
}

TEST(Project, FourLatticePoints) {
  const auto c = comps({{0, 1}, {0, 1}});
  const auto p = project_values(std::span<const ComponentValues>(c), AlphaVector{{0.25, 0.5}});
  EXPECT_EQ(p.fracs, (std::vector<double>{0.0, 0.25, 0.5, 0.75}));
  EXPECT_EQ(p.count, 4u);
}

TEST(Project, PowerMatchesQuadOracle) {
  const auto cv = materialize(Power{1.5}, 4);
  const std::vector<ComponentValues> c{cv};
  const double alpha = std::numbers::sqrt2;
  const auto p = project_values(std::span<const ComponentValues>(c), AlphaVector{{alpha}});
  std::vector<double> want;
  for (double v : cv.values) want.push_back(static_cast<double>(oracle::frac(quad(alpha) * quad(v))));
  std::sort(want.begin(), want.end());
  ASSERT_EQ(p.fracs.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(p.fracs[k], want[k], 1e-10);
}

TEST(Project, RandomR2MatchesQuadOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> al(-30.0, 30.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::increasing(rng, 9, 5e5);
    const auto b = oracle::increasing(rng, 9, 3e4);
    const std::vector<ComponentValues> c{{a, 0, 0}, {b, 0, 0}};
    const AlphaVector alpha{{al(rng), al(rng)}};
    const auto p = project_values(std::span<const ComponentValues>(c), alpha);
    std::vector<double> want;
    for (double x : a)
      for (double y : b)
        want.push_back(static_cast<double>(oracle::frac(quad(alpha.coords[0]) * quad(x) + quad(alpha.coords[1]) * quad(y))));
    std::sort(want.begin(), want.end());
    for (std::size_t k = 0; k < want.size(); ++k) {
      const double d = std::abs(p.fracs[k] - want[k]);
      EXPECT_LE(std::min(d, 1.0 - d), p.precision_bound + 1e-15);
    }
    EXPECT_TRUE(std::is_sorted(p.fracs.begin(), p.fracs.end()));
  }
}

TEST(Project, Guards) {
  const auto c = comps({{0, 1e13}});
  EXPECT_THROW(project_values(std::span<const ComponentValues>(c), AlphaVector{{100.0}}), Error);
  EXPECT_THROW(project_values(std::span<const ComponentValues>(c), AlphaVector{{1.0, 2.0}}), Error);
  EXPECT_THROW(project_values(std::span<const ComponentValues>(c), AlphaVector{{NAN}}), Error);
}

TEST(PairCorrelation, ThreePointExample) {
  ProjectedValues p{{0.05, 0.10, 0.50}, 3, 0.0};
  const std::vector<double> s{0.2};
  const auto rep = pair_correlation(p, 3, 1, s);
  EXPECT_EQ(rep.pair_counts[0], 2u);
  EXPECT_DOUBLE_EQ(rep.r2_values[0], 2.0 / 3.0);
}

TEST(PairCorrelation, SmallWindowGivesZero) {
  ProjectedValues p{{0.05, 0.10, 0.50, 0.93}, 4, 0.0};
  const std::vector<double> s{1e-3};
  EXPECT_EQ(pair_correlation(p, 3, 1, s).pair_counts[0], 0u);
}

TEST(PairCorrelation, R2LatticeExampleMatchesBruteForce) {
  const auto c = comps({{0, 0.3}, {0, 0.4}});
  const auto p = project_values(std::span<const ComponentValues>(c), AlphaVector{{1.0, 1.0}});
  const std::vector<double> s{0.5};
  const auto rep = pair_correlation(p, 1, 2, s);
  EXPECT_EQ(rep.pair_counts[0], oracle::close_pairs(p.fracs, 0.5));
  EXPECT_EQ(rep.pair_counts[0], 12u);
}

TEST(PairCorrelation, SinglePointHasNoPairs) {
  ProjectedValues p{{0.3}, 1, 0.0};
  const std::vector<double> s{0.5, 1.0};
  const auto rep = pair_correlation(p, 0, 1, s);
  EXPECT_EQ(rep.r2_values, (std::vector<double>{0.0, 0.0}));
}

TEST(PairCorrelation, RejectsBadWindows) {
  ProjectedValues p{{0.1, 0.2, 0.3}, 3, 0.0};
  const std::vector<double> wide{2.0}, unsorted{1.0, 0.5}, zero{0.0};
  EXPECT_THROW(pair_correlation(p, 2, 1, wide), Error);
  EXPECT_THROW(pair_correlation(p, 2, 1, unsorted), Error);
  EXPECT_THROW(pair_correlation(p, 2, 1, zero), Error);
}

TEST(PairCorrelation, SweepEqualsBruteForceOnRandomInputs) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    std::vector<double> f(n);
    for (auto& x : f) x = u(rng);
    if (trial % 4 == 0)
      for (std::size_t k = 0; k < n / 3; ++k) f[k] = f[n - 1 - k];  // repeated points
    std::sort(f.begin(), f.end());
    const double window = 0.45 * u(rng) * u(rng);
    EXPECT_EQ(count_close_pairs(f, window), oracle::close_pairs(f, window)) << "trial " << trial;
  }
}

TEST(PairCorrelation, MonotoneInS) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(500);
  for (auto& x : f) x = u(rng);
  std::sort(f.begin(), f.end());
  ProjectedValues p{f, f.size(), 0.0};
  std::vector<double> s;
  for (int k = 1; k <= 40; ++k) s.push_back(0.25 * k);
  const auto rep = pair_correlation(p, 499, 1, s);
  EXPECT_TRUE(std::is_sorted(rep.r2_values.begin(), rep.r2_values.end()));
  // for uniform random points R_2(s) is close to 2s
  EXPECT_NEAR(rep.r2_values[3], 2.0, 0.4);
}
