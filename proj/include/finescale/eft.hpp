#pragma once

// Error-free transformations for fractional parts of large products.
//
// A product alpha * a is split into hi + lo with hi = fl(alpha * a) and lo the
// exact rounding error (via fma). The fractional part of hi is exact for
// |hi| < 2^52, so the fractional part of the exact product is recovered to
// roughly 2^-100 * |alpha * a| plus one final rounding.

#include <cmath>

namespace finescale::eft {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

// s + e == a + b exactly
inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

// requires |a| >= |b|
inline DoubleDouble fast_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble add(DoubleDouble x, DoubleDouble y) {
  DoubleDouble s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return fast_two_sum(s.hi, s.lo);
}

/// Reduces a double-double to its fractional part, normalised so hi is in
/// [0, 1). The pair still carries the low-order correction.
inline DoubleDouble frac(DoubleDouble x) {
  const double f = x.hi - std::floor(x.hi);  // exact for |hi| < 2^52
  DoubleDouble r = two_sum(f, x.lo);
  const double shift = std::floor(r.hi);
  if (shift != 0.0) {
    const DoubleDouble t = two_sum(r.hi, -shift);
    r = two_sum(t.hi, t.lo + r.lo);
  }
  // hi may land on exactly 1.0 (value just below 1) or carry a tiny negative
  // lo at 0; both are the same torus point and to_unit folds them.
  return r;
}

/// Fractional part of alpha * a as a double-double.
inline DoubleDouble frac_product(double alpha, double a) {
  return frac(two_prod(alpha, a));
}

/// Collapses a double-double in [0, 1] into a double in [0, 1).
inline double to_unit(DoubleDouble x) {
  double v = x.hi + x.lo;
  if (v >= 1.0) v -= 1.0;
  if (v < 0.0) v += 1.0;
  if (v >= 1.0) v = 0.0;
  return v;
}

/// Fractional part of j * x where x is a double-double in [0, 1) and j an
/// integer of moderate size.
inline double frac_multiple(long long j, DoubleDouble x) {
  const double jd = static_cast<double>(j);
  DoubleDouble p = two_prod(jd, x.hi);
  p.lo += jd * x.lo;
  return to_unit(frac(p));
}

}  // namespace finescale::eft
