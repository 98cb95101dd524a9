#include <immintrin.h>

#include <cmath>

#include "dno/kernels.hpp"

namespace dno::kernels {

namespace {

constexpr double kPhiScale = 0.43233235838169365;
constexpr double kExpm2 = 0.1353352832366127;

// exp on 4 lanes: argument reduction x = k ln2 + r, degree-13 Taylor on r,
// 2^k applied through the exponent field in two halves.
__m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180559945286e-01);
  const __m256d ln2_lo = _mm256_set1_pd(2.31904681384629956e-17);

  __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                              _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  k = _mm256_max_pd(k, _mm256_set1_pd(-1074.0));
  k = _mm256_min_pd(k, _mm256_set1_pd(1024.0));

  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.08767569878681e-09));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.505210838544172e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.755731922398589e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985893e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.984126984126984e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^k = 2^k1 * 2^k2 with k1 = trunc(k/2); each half stays in exponent range.
  __m256d k1 = _mm256_round_pd(_mm256_mul_pd(k, _mm256_set1_pd(0.5)),
                               _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  __m256d k2 = _mm256_sub_pd(k, k1);
  const __m256d bias = _mm256_set1_pd(1023.0);
  auto pow2 = [&](__m256d e) {
    __m128i ei = _mm256_cvtpd_epi32(_mm256_add_pd(e, bias));
    __m256i wide = _mm256_cvtepi32_epi64(ei);
    return _mm256_castsi256_pd(_mm256_slli_epi64(wide, 52));
  };
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(k1)), pow2(k2));

  const __m256d inf = _mm256_set1_pd(HUGE_VAL);
  __m256d big_mask = _mm256_cmp_pd(x, _mm256_set1_pd(709.782712893384), _CMP_GT_OQ);
  __m256d small_mask = _mm256_cmp_pd(x, _mm256_set1_pd(-745.2), _CMP_LT_OQ);
  result = _mm256_blendv_pd(result, inf, big_mask);
  result = _mm256_andnot_pd(small_mask, result);
  return result;
}

__m256d abs4(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

__m256d sigmoid4(__m256d t) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d q = exp4(_mm256_xor_pd(abs4(t), _mm256_set1_pd(-0.0)));  // e^{-|t|}
  __m256d s_neg = _mm256_div_pd(q, _mm256_add_pd(one, q));
  __m256d s_pos = _mm256_sub_pd(one, s_neg);
  __m256d nonneg = _mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_GE_OQ);
  return _mm256_blendv_pd(s_neg, s_pos, nonneg);
}

__m256d phi4(__m256d t) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d m = abs4(t);
  __m256d big = exp4(_mm256_sub_pd(m, one));
  __m256d denom = _mm256_add_pd(
      _mm256_add_pd(one, big),
      _mm256_add_pd(_mm256_div_pd(_mm256_set1_pd(kExpm2), big),
                    _mm256_set1_pd(kExpm2)));
  return _mm256_div_pd(_mm256_set1_pd(kPhiScale), denom);
}

__m256d sigmoid_prime4(__m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d q = exp4(_mm256_xor_pd(abs4(u), _mm256_set1_pd(-0.0)));
  __m256d d = _mm256_add_pd(one, q);
  return _mm256_div_pd(q, _mm256_mul_pd(d, d));
}

__m256d phi_deriv4(__m256d t) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d a = sigmoid_prime4(_mm256_add_pd(t, one));
  __m256d b = sigmoid_prime4(_mm256_sub_pd(t, one));
  return _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_sub_pd(a, b));
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

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

void exp_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void sigmoid_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, sigmoid4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) {
    const double t = x[i];
    const double q = std::exp(-std::fabs(t));
    const double s_neg = q / (1.0 + q);
    out[i] = t >= 0.0 ? 1.0 - s_neg : s_neg;
  }
}

void bell_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, phi4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = phi_scalar(x[i]);
}

void bell_deriv_v_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, phi_deriv4(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = phi_deriv_scalar(x[i]);
}

double bell_comb_avx2(const double* beta, std::size_t m, double base) {
  __m256d acc = _mm256_setzero_pd();
  __m256d kv = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d base_v = _mm256_set1_pd(base);
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    __m256d arg = _mm256_sub_pd(base_v, kv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(beta + k), phi4(arg), acc);
    kv = _mm256_add_pd(kv, four);
  }
  double out = hsum(acc);
  for (; k < m; ++k) out += beta[k] * phi_scalar(base - static_cast<double>(k));
  return out;
}

double bell_comb_deriv_avx2(const double* beta, std::size_t m, double base) {
  __m256d acc = _mm256_setzero_pd();
  __m256d kv = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d base_v = _mm256_set1_pd(base);
  std::size_t k = 0;
  for (; k + 4 <= m; k += 4) {
    __m256d arg = _mm256_sub_pd(base_v, kv);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(beta + k), phi_deriv4(arg), acc);
    kv = _mm256_add_pd(kv, four);
  }
  double out = hsum(acc);
  for (; k < m; ++k)
    out += beta[k] * phi_deriv_scalar(base - static_cast<double>(k));
  return out;
}

const Backend kAvx2{
    "avx2",           exp_v_avx2,      sigmoid_v_avx2, bell_v_avx2,
    bell_deriv_v_avx2, bell_comb_avx2, bell_comb_deriv_avx2,
};

}  // namespace

const Backend* avx2_backend() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace dno::kernels
