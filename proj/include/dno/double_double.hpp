#pragma once

#include <cmath>

namespace dno {

/// Error-free transformations. two_sum/two_prod return the rounded result in
/// .hi and the exact rounding error in .lo.
struct Dd {
  double hi = 0.0;
  double lo = 0.0;
};

inline Dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline Dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline Dd dd_add(Dd a, Dd b) {
  Dd s = two_sum(a.hi, b.hi);
  Dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Dd dd_add(Dd a, double b) {
  Dd s = two_sum(a.hi, b);
  s.lo += a.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Dd dd_neg(Dd a) { return {-a.hi, -a.lo}; }

inline Dd dd_sub(Dd a, Dd b) { return dd_add(a, dd_neg(b)); }

inline Dd dd_mul(Dd a, Dd b) {
  Dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Dd dd_mul(Dd a, double b) {
  Dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline Dd dd_div(Dd a, Dd b) {
  const double q1 = a.hi / b.hi;
  Dd r = dd_sub(a, dd_mul(b, q1));
  const double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  const double q3 = r.hi / b.hi;
  Dd q = quick_two_sum(q1, q2);
  return dd_add(q, q3);
}

inline Dd dd_from(double x) { return {x, 0.0}; }

inline Dd dd_from_int64(long long v) {
  const double hi = static_cast<double>(v);
  const double lo = static_cast<double>(v - static_cast<long long>(hi));
  return {hi, lo};
}

inline Dd dd_pow_int(Dd base, int exponent) {
  Dd acc = dd_from(1.0);
  for (int i = 0; i < exponent; ++i) acc = dd_mul(acc, base);
  return acc;
}

inline double dd_to_double(Dd a) { return a.hi + a.lo; }

/// exp in double-double precision (relative error ~1e-31 on finite range;
/// underflows to 0 below -709, overflows to +inf above 709.78).
Dd dd_exp(Dd x);

/// Stable sigmoid in double-double precision.
Dd dd_sigmoid(Dd t);

}  // namespace dno
