#pragma once

// Component sequences a^i(n), n = 0..N, and their structural checks
// (growth, lacunarity, convexity).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "finescale/error.hpp"

namespace finescale {

/// Largest magnitude any materialized or projected value may reach.
inline constexpr double kMagnitudeLimit = 35184372088832.0;  // 2^45

struct Lacunary {
  double a0 = 1.0;
  double lambda = 2.0;
};

struct QuadraticReal {
  double p2 = 1.0;
  double p1 = 0.0;
  double p0 = 0.0;
  long long shift = 0;
};

struct Power {
  double theta = 1.0;
};

struct ConvexCumulative {
  std::vector<double> gaps;
};

struct Explicit {
  std::vector<double> values;
};

using ComponentSpec = std::variant<Lacunary, QuadraticReal, Power, ConvexCumulative, Explicit>;

inline std::string_view kind_name(const ComponentSpec& spec) {
  constexpr std::string_view names[] = {"Lacunary", "QuadraticReal", "Power", "ConvexCumulative",
                                        "Explicit"};
  return names[spec.index()];
}

struct ComponentValues {
  std::vector<double> values;
  double min_gap = 0.0;
  double magnitude_max = 0.0;

  std::size_t size() const { return values.size(); }
};

struct VectorSequenceSpec {
  long long N = 1;
  std::vector<ComponentSpec> components;

  int r() const { return static_cast<int>(components.size()); }
};

inline void validate(const ComponentSpec& spec) {
  struct Visitor {
    void operator()(const Lacunary& s) const {
      if (!(s.a0 > 0.0) || !(s.lambda > 1.0))
        fail(ErrorCode::InvalidSpec, "Lacunary needs a0 > 0 and lambda > 1");
    }
    void operator()(const QuadraticReal& s) const {
      if (!(s.p2 > 0.0)) fail(ErrorCode::InvalidSpec, "QuadraticReal needs p2 > 0");
      if (s.shift < 0) fail(ErrorCode::InvalidSpec, "QuadraticReal shift must be nonnegative");
    }
    void operator()(const Power& s) const {
      if (!(s.theta > 0.0)) fail(ErrorCode::InvalidSpec, "Power needs theta > 0");
    }
    void operator()(const ConvexCumulative& s) const {
      if (s.gaps.empty()) fail(ErrorCode::InvalidSpec, "ConvexCumulative needs gaps");
      for (std::size_t i = 0; i < s.gaps.size(); ++i) {
        if (!(s.gaps[i] > 0.0)) fail(ErrorCode::InvalidSpec, "ConvexCumulative gaps must be positive");
        if (i > 0 && !(s.gaps[i] > s.gaps[i - 1]))
          fail(ErrorCode::InvalidSpec, "ConvexCumulative gaps must be strictly increasing");
      }
    }
    void operator()(const Explicit& s) const {
      if (s.values.empty()) fail(ErrorCode::InvalidSpec, "Explicit values must be nonempty");
    }
  };
  std::visit(Visitor{}, spec);
}

namespace detail {

inline std::vector<double> evaluate(const ComponentSpec& spec, long long N) {
  const auto count = static_cast<std::size_t>(N + 1);
  std::vector<double> out(count);
  struct Visitor {
    std::vector<double>& out;
    long long N;
    void operator()(const Lacunary& s) const {
      for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = s.a0 * std::pow(s.lambda, static_cast<double>(n));
    }
    void operator()(const QuadraticReal& s) const {
      for (std::size_t n = 0; n < out.size(); ++n) {
        const double m = static_cast<double>(static_cast<long long>(n) + s.shift);
        out[n] = std::fma(std::fma(s.p2, m, s.p1), m, s.p0);
      }
    }
    void operator()(const Power& s) const {
      for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = n == 0 ? 0.0 : std::pow(static_cast<double>(n), s.theta);
    }
    void operator()(const ConvexCumulative& s) const {
      if (s.gaps.size() < out.size() - 1)
        fail(ErrorCode::InvalidSpec, "ConvexCumulative has " + std::to_string(s.gaps.size()) +
                                         " gaps, need " + std::to_string(N));
      double acc = 0.0;
      out[0] = 0.0;
      for (std::size_t n = 1; n < out.size(); ++n) {
        acc += s.gaps[n - 1];
        out[n] = acc;
      }
    }
    void operator()(const Explicit& s) const {
      if (s.values.size() < out.size())
        fail(ErrorCode::InvalidSpec, "Explicit has " + std::to_string(s.values.size()) +
                                         " values, need N+1 = " + std::to_string(N + 1));
      std::copy_n(s.values.begin(), out.size(), out.begin());
    }
  };
  std::visit(Visitor{out, N}, spec);
  return out;
}

}  // namespace detail

/// Evaluates the component at n = 0..N.
///
/// Throws InvalidSpec for broken parameters, MagnitudeGuard when any value
/// exceeds 2^45 and NotIncreasing when the result is not strictly increasing.
inline ComponentValues materialize(const ComponentSpec& spec, long long N) {
  if (N < 0) fail(ErrorCode::InvalidSpec, "N must be nonnegative");
  validate(spec);
  ComponentValues result;
  result.values = detail::evaluate(spec, N);
  result.min_gap = result.values.size() > 1 ? INFINITY : 0.0;
  for (std::size_t n = 0; n < result.values.size(); ++n) {
    const double v = result.values[n];
    if (!std::isfinite(v) || std::abs(v) > kMagnitudeLimit)
      fail(ErrorCode::MagnitudeGuard,
           "value at index " + std::to_string(n) + " exceeds 2^45 (" + std::string(kind_name(spec)) + ")");
    result.magnitude_max = std::max(result.magnitude_max, std::abs(v));
    if (n > 0) {
      const double gap = v - result.values[n - 1];
      if (!(gap > 0.0))
        fail(ErrorCode::NotIncreasing, "values not strictly increasing at index " + std::to_string(n));
      result.min_gap = std::min(result.min_gap, gap);
    }
  }
  return result;
}

inline std::vector<ComponentValues> materialize(const VectorSequenceSpec& spec) {
  if (spec.components.empty()) fail(ErrorCode::InvalidSpec, "spec needs at least one component");
  std::vector<ComponentValues> out;
  out.reserve(spec.components.size());
  for (const auto& c : spec.components) out.push_back(materialize(c, spec.N));
  return out;
}

inline bool check_growth(std::span<const double> values, double c) {
  for (std::size_t n = 1; n < values.size(); ++n)
    if (!(values[n] - values[n - 1] >= c)) return false;
  return true;
}

/// Ratio test values[n+1] / values[n] >= lambda. `slack` is a relative
/// tolerance for ratios that equal lambda up to rounding.
inline bool check_lacunary(std::span<const double> values, double lambda, double slack = 0.0) {
  for (std::size_t n = 0; n < values.size(); ++n)
    if (!(values[n] > 0.0))
      fail(ErrorCode::NonPositiveValue, "lacunary check needs positive values (index " + std::to_string(n) + ")");
  for (std::size_t n = 1; n < values.size(); ++n)
    if (!(values[n] / values[n - 1] >= lambda * (1.0 - slack))) return false;
  return true;
}

inline bool check_convex(std::span<const double> values) {
  if (values.size() < 3) fail(ErrorCode::TooShort, "convexity needs at least 3 values");
  for (std::size_t n = 1; n + 1 < values.size(); ++n)
    if (!(values[n] - values[n - 1] < values[n + 1] - values[n])) return false;
  return true;
}

/// Gap lower bound c that each built-in family guarantees from index 0, if
/// one is known in closed form.
inline std::optional<double> documented_gap(const ComponentSpec& spec) {
  struct Visitor {
    std::optional<double> operator()(const Lacunary& s) const { return s.a0 * (s.lambda - 1.0); }
    std::optional<double> operator()(const QuadraticReal& s) const {
      return s.p2 * (2.0 * static_cast<double>(s.shift) + 1.0) + s.p1;
    }
    std::optional<double> operator()(const Power& s) const {
      if (s.theta >= 1.0) return 1.0;
      return std::nullopt;
    }
    std::optional<double> operator()(const ConvexCumulative& s) const { return s.gaps.front(); }
    std::optional<double> operator()(const Explicit&) const { return std::nullopt; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace finescale
