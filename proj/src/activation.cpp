#include "dno/activation.hpp"

#include <cmath>

#include "dno/errors.hpp"

namespace dno {

namespace {

// (e^2-1)/(2 e^2) and e^{-2}, the constants of the product form of phi.
constexpr double kPhiScale = 0.43233235838169365;
constexpr double kExpm2 = 0.1353352832366127;

}  // namespace

double sigmoid(double t) {
  if (!std::isfinite(t)) throw DomainError("sigmoid: non-finite input");
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double bell(double t) {
  if (!std::isfinite(t)) throw DomainError("bell: non-finite input");
  const double m = std::fabs(t);
  const double big = std::exp(m - 1.0);
  // (1+e^{m-1})(1+e^{-m-1}) = 1 + e^{m-1} + e^{-m-1} + e^{-2}
  return kPhiScale / (1.0 + big + kExpm2 / big + kExpm2);
}

namespace {

// sigma'(u) = e^{-|u|} / (1+e^{-|u|})^2, symmetric and cancellation-free.
double sigmoid_prime(double u) {
  const double q = std::exp(-std::fabs(u));
  const double d = 1.0 + q;
  return q / (d * d);
}

}  // namespace

double bell_derivative(double t) {
  if (!std::isfinite(t)) throw DomainError("bell_derivative: non-finite input");
  return 0.5 * (sigmoid_prime(t + 1.0) - sigmoid_prime(t - 1.0));
}

SigmoidDerivativeTable::SigmoidDerivativeTable() {
  rows_.push_back({0, 1});  // sigma = s
  for (;;) {
    const auto& a = rows_.back();
    std::vector<std::int64_t> b(a.size() + 1, 0);
    bool overflow = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::int64_t term1 = 0;
      std::int64_t term2 = 0;
      if (i < a.size() &&
          __builtin_mul_overflow(static_cast<std::int64_t>(i), a[i], &term1)) {
        overflow = true;
        break;
      }
      if (i >= 1 && __builtin_mul_overflow(static_cast<std::int64_t>(i) - 1,
                                           a[i - 1], &term2)) {
        overflow = true;
        break;
      }
      if (__builtin_sub_overflow(term1, term2, &b[i])) {
        overflow = true;
        break;
      }
    }
    if (overflow || rows_.size() > 24) break;
    rows_.push_back(std::move(b));
  }
  max_abs_.assign(rows_.size(), -1.0);
}

const SigmoidDerivativeTable& SigmoidDerivativeTable::instance() {
  static const SigmoidDerivativeTable table;
  return table;
}

const std::vector<std::int64_t>& SigmoidDerivativeTable::row(int order) const {
  if (order < 0 || order > max_order())
    throw CapabilityError("sigmoid derivative order exceeds table");
  return rows_[static_cast<std::size_t>(order)];
}

double SigmoidDerivativeTable::evaluate_at_sigma(int order, double s) const {
  const auto& r = row(order);
  double acc = 0.0;
  for (std::size_t i = r.size(); i-- > 0;) {
    acc = acc * s + static_cast<double>(r[i]);
  }
  return acc;
}

double SigmoidDerivativeTable::evaluate(int order, double t) const {
  return evaluate_at_sigma(order, sigmoid(t));
}

Dd SigmoidDerivativeTable::evaluate_dd(int order, Dd t) const {
  const auto& r = row(order);
  const Dd s = dd_sigmoid(t);
  Dd acc = dd_from(0.0);
  for (std::size_t i = r.size(); i-- > 0;) {
    acc = dd_add(dd_mul(acc, s), dd_from_int64(r[i]));
  }
  return acc;
}

double SigmoidDerivativeTable::max_abs(int order) const {
  if (order < 0 || order > max_order())
    throw CapabilityError("sigmoid derivative order exceeds table");
  std::lock_guard<std::mutex> guard(max_abs_mutex_);
  double& cached = max_abs_[static_cast<std::size_t>(order)];
  if (cached >= 0.0) return cached;
  // Derivatives of sigma decay like e^{-|t|}; [-16,16] covers every extremum.
  double m = 0.0;
  const int samples = 200000;
  for (int i = 0; i <= samples; ++i) {
    const double t = -16.0 + 32.0 * static_cast<double>(i) / samples;
    m = std::fmax(m, std::fabs(evaluate(order, t)));
  }
  cached = m;
  return m;
}

double sigmoid_derivative(int order, double t) {
  if (!std::isfinite(t)) throw DomainError("sigmoid_derivative: non-finite input");
  if (order < 0) throw CapabilityError("sigmoid_derivative: negative order");
  return SigmoidDerivativeTable::instance().evaluate(order, t);
}

}  // namespace dno
