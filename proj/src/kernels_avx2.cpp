// AVX2/FMA variants of the inner-loop kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; callers go through the runtime
// dispatcher in kernels.cpp.

#include <immintrin.h>

#include <cmath>

#include "ballprob/kernels.hpp"

namespace ballprob::kern {

void cf_factors_avx2(std::span<const double> lambda,
                     std::span<const double> delta_sq, bool has_shift,
                     std::span<const double> t, CfTerms* out) {
  const std::size_t p = lambda.size();
  const std::size_t nt = t.size();
  std::size_t k = 0;
  // Four frequencies per pass; the eigenvalue loop is the inner one.
  for (; k + 4 <= nt; k += 4) {
    const __m256d tk = _mm256_loadu_pd(t.data() + k);
    __m256d pr = _mm256_set1_pd(1.0);
    __m256d pi = _mm256_setzero_pd();
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    for (std::size_t j = 0; j < p; ++j) {
      const __m256d b =
          _mm256_mul_pd(_mm256_set1_pd(2.0 * lambda[j]), tk);
      const __m256d r2 = _mm256_fmadd_pd(b, b, one);
      const __m256d r = _mm256_sqrt_pd(r2);
      const __m256d s =
          _mm256_sqrt_pd(_mm256_mul_pd(half, _mm256_add_pd(r, one)));
      const __m256d q = _mm256_div_pd(b, _mm256_add_pd(s, s));
      const __m256d wr = _mm256_div_pd(s, r);
      const __m256d wi = _mm256_div_pd(q, r);
      const __m256d npr =
          _mm256_fmsub_pd(pr, wr, _mm256_mul_pd(pi, wi));
      pi = _mm256_fmadd_pd(pr, wi, _mm256_mul_pd(pi, wr));
      pr = npr;
      if (has_shift) {
        const __m256d f =
            _mm256_div_pd(_mm256_set1_pd(delta_sq[j]), r2);
        const __m256d hb = _mm256_mul_pd(half, b);
        sr = _mm256_fnmadd_pd(_mm256_mul_pd(hb, b), f, sr);
        si = _mm256_fmadd_pd(hb, f, si);
      }
    }
    alignas(32) double buf[16];
    _mm256_store_pd(buf + 0, pr);
    _mm256_store_pd(buf + 4, pi);
    _mm256_store_pd(buf + 8, sr);
    _mm256_store_pd(buf + 12, si);
    for (int l = 0; l < 4; ++l) {
      out[k + l] = CfTerms{buf[l], buf[4 + l], buf[8 + l], buf[12 + l]};
    }
  }
  if (k < nt) {
    cf_factors_scalar(lambda, delta_sq, has_shift, t.subspan(k), out + k);
  }
}

void quadform_accum_avx2(std::span<const double> lambda,
                         std::span<const double> delta, double offset,
                         const double* z, std::size_t n, double* y) {
  const __m256d off = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, off);
  for (; i < n; ++i) y[i] = offset;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const __m256d lam = _mm256_set1_pd(lambda[j]);
    const __m256d del = _mm256_set1_pd(delta[j]);
    const double* zj = z + j * n;
    std::size_t i2 = 0;
    for (; i2 + 4 <= n; i2 += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(zj + i2), del);
      const __m256d acc = _mm256_loadu_pd(y + i2);
      _mm256_storeu_pd(y + i2,
                       _mm256_fmadd_pd(_mm256_mul_pd(lam, d), d, acc));
    }
    for (; i2 < n; ++i2) {
      const double d = zj[i2] - delta[j];
      y[i2] = std::fma(lambda[j] * d, d, y[i2]);
    }
  }
}

}  // namespace ballprob::kern
