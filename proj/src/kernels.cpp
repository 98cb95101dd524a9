#include "dno/kernels.hpp"

#include <atomic>
#include <cmath>

namespace dno::kernels {

namespace {

constexpr double kPhiScale = 0.43233235838169365;  // (e^2-1)/(2e^2)
constexpr double kExpm2 = 0.1353352832366127;      // e^{-2}

double phi_scalar(double t) {
  const double m = std::fabs(t);
  const double big = std::exp(m - 1.0);
  return kPhiScale / (1.0 + big + kExpm2 / big + kExpm2);
}

double sigmoid_prime_scalar(double u) {
  const double q = std::exp(-std::fabs(u));
  const double d = 1.0 + q;
  return q / (d * d);
}

double phi_deriv_scalar(double t) {
  return 0.5 * (sigmoid_prime_scalar(t + 1.0) - sigmoid_prime_scalar(t - 1.0));
}

void exp_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void sigmoid_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x[i];
    if (t >= 0.0) {
      out[i] = 1.0 / (1.0 + std::exp(-t));
    } else {
      const double e = std::exp(t);
      out[i] = e / (1.0 + e);
    }
  }
}

void bell_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = phi_scalar(x[i]);
}

void bell_deriv_v_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = phi_deriv_scalar(x[i]);
}

double bell_comb_scalar(const double* beta, std::size_t m, double base) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    acc += beta[k] * phi_scalar(base - static_cast<double>(k));
  }
  return acc;
}

double bell_comb_deriv_scalar(const double* beta, std::size_t m, double base) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    acc += beta[k] * phi_deriv_scalar(base - static_cast<double>(k));
  }
  return acc;
}

const Backend kScalar{
    "scalar",         exp_v_scalar,      sigmoid_v_scalar, bell_v_scalar,
    bell_deriv_v_scalar, bell_comb_scalar, bell_comb_deriv_scalar,
};

std::atomic<const Backend*> g_active{nullptr};

const Backend* default_backend() {
  if (const Backend* avx2 = avx2_backend()) return avx2;
  return &kScalar;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

#ifndef DNO_HAVE_AVX2_TU
const Backend* avx2_backend() { return nullptr; }
#endif

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (b == nullptr) {
    b = default_backend();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool select(std::string_view name) {
  if (name == "auto") {
    g_active.store(default_backend(), std::memory_order_release);
    return true;
  }
  if (name == "scalar") {
    g_active.store(&kScalar, std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    const Backend* avx2 = avx2_backend();
    if (avx2 == nullptr) return false;
    g_active.store(avx2, std::memory_order_release);
    return true;
  }
  return false;
}

}  // namespace dno::kernels
