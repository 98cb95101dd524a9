#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

#include "dno/double_double.hpp"

namespace dno {

/// sigma(t) = 1/(1+e^{-t}), evaluated overflow-free by branching on the sign
/// of t. Throws DomainError for non-finite input.
double sigmoid(double t);

/// phi(t) = (sigma(t+1) - sigma(t-1))/2, evaluated through the cancellation-free
/// product form (e^2-1) / (2 e^2 (1+e^{t-1})(1+e^{-t-1})).
double bell(double t);

/// phi'(t); satisfies |phi'(t)| <= ((e^2-1)/(2e)) e^{-|t|}.
double bell_derivative(double t);

/// (e^2-1)/(2e), the decay envelope scale of phi and phi'.
inline constexpr double kBellEnvelope = 1.1752011936438014;

/// Derivatives of the sigmoid as exact integer-coefficient polynomials in
/// s = sigma(t). Row j has degree j+1; row j+1 follows from row j through
/// sigma' = sigma(1-sigma):  b_i = i*a_i - (i-1)*a_{i-1}.
class SigmoidDerivativeTable {
 public:
  static const SigmoidDerivativeTable& instance();

  int max_order() const { return static_cast<int>(rows_.size()) - 1; }

  /// sigma^{(j)}(t). Throws CapabilityError when j exceeds max_order().
  double evaluate(int order, double t) const;

  /// Polynomial row evaluated at a given s = sigma(t) value (Horner).
  double evaluate_at_sigma(int order, double s) const;

  /// sigma^{(order)}(t) in double-double precision; the constructions divide
  /// by these values and cancel the quotients against each other.
  Dd evaluate_dd(int order, Dd t) const;

  const std::vector<std::int64_t>& row(int order) const;

  /// max over the real line of |sigma^{(order)}| (cached fine-grid estimate).
  double max_abs(int order) const;

 private:
  SigmoidDerivativeTable();

  std::vector<std::vector<std::int64_t>> rows_;
  mutable std::vector<double> max_abs_;
  mutable std::mutex max_abs_mutex_;
};

/// sigma^{(order)}(t) through the polynomial-in-sigma recurrence.
double sigmoid_derivative(int order, double t);

}  // namespace dno
