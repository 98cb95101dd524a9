#include "dno/double_double.hpp"

#include <limits>

namespace dno {

namespace {

// ln(2) split into high/low parts for exact argument reduction.
constexpr double kLn2Hi = 6.93147180559945286e-01;
constexpr double kLn2Lo = 2.31904681384629956e-17;
constexpr double kLog2e = 1.4426950408889634074;

}  // namespace

Dd dd_exp(Dd x) {
  if (std::isnan(x.hi)) return {x.hi, 0.0};
  if (x.hi > 709.782712893384) return {std::numeric_limits<double>::infinity(), 0.0};
  if (x.hi < -709.0) return {0.0, 0.0};

  const double k = std::nearbyint(x.hi * kLog2e);
  // r = x - k*ln2, |r| <= ln2/2 + tiny
  Dd r = dd_sub(x, dd_mul(Dd{kLn2Hi, kLn2Lo}, k));

  // Taylor series sum_{i=0}^{25} r^i/i!; remainder below 1e-34 for |r|<=0.35.
  Dd sum = dd_from(1.0);
  Dd term = dd_from(1.0);
  for (int i = 1; i <= 25; ++i) {
    term = dd_mul(term, r);
    term = dd_div(term, dd_from(static_cast<double>(i)));
    sum = dd_add(sum, term);
  }

  const double scale = std::ldexp(1.0, static_cast<int>(k));
  return {sum.hi * scale, sum.lo * scale};
}

Dd dd_sigmoid(Dd t) {
  if (t.hi >= 0.0) {
    const Dd q = dd_exp(dd_neg(t));
    return dd_div(dd_from(1.0), dd_add(q, 1.0));
  }
  const Dd q = dd_exp(t);
  return dd_div(q, dd_add(q, 1.0));
}

}  // namespace dno
