#pragma once

#include <cstddef>
#include <string_view>

namespace dno::kernels {

/// Batch kernels behind the grid-evaluation hot loops. One scalar reference
/// implementation plus an AVX2 variant selected at runtime; the two are
/// equivalence-tested against each other.
struct Backend {
  const char* name;
  void (*exp_v)(const double* x, double* out, std::size_t n);
  void (*sigmoid_v)(const double* x, double* out, std::size_t n);
  void (*bell_v)(const double* x, double* out, std::size_t n);
  void (*bell_deriv_v)(const double* x, double* out, std::size_t n);
  /// sum_{k=0}^{m-1} beta[k] * phi(base - k)
  double (*bell_comb)(const double* beta, std::size_t m, double base);
  /// sum_{k=0}^{m-1} beta[k] * phi'(base - k)
  double (*bell_comb_deriv)(const double* beta, std::size_t m, double base);
};

const Backend& scalar_backend();

/// AVX2 backend, or nullptr when the binary/CPU does not support it.
const Backend* avx2_backend();

/// Currently selected backend (AVX2 when available, scalar otherwise).
const Backend& active();

/// Select by name: "auto", "scalar", or "avx2". Returns false when the
/// requested backend is unavailable. Intended for startup configuration.
bool select(std::string_view name);

}  // namespace dno::kernels
