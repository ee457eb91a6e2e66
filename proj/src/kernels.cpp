#include "ballprob/kernels.hpp"

#include <cmath>

namespace ballprob::kern {

void cf_factors_scalar(std::span<const double> lambda,
                       std::span<const double> delta_sq, bool has_shift,
                       std::span<const double> t, CfTerms* out) {
  const std::size_t p = lambda.size();
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double tk = t[k];
    double pr = 1.0, pi = 0.0;
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double b = 2.0 * tk * lambda[j];
      const double r2 = 1.0 + b * b;          // |1 - i b|^2
      const double r = std::sqrt(r2);
      // sqrt(1 - i b) = s - i q with s = sqrt((r+1)/2), q = b / (2 s);
      // 1/sqrt(1 - i b) = (s + i q) / r.
      const double s = std::sqrt(0.5 * (r + 1.0));
      const double q = b / (2.0 * s);
      const double wr = s / r;
      const double wi = q / r;
      const double npr = pr * wr - pi * wi;
      pi = pr * wi + pi * wr;
      pr = npr;
      if (has_shift) {
        const double f = delta_sq[j] / r2;
        const double hb = 0.5 * b;
        sr -= hb * b * f;
        si += hb * f;
      }
    }
    out[k] = CfTerms{pr, pi, sr, si};
  }
}

void quadform_accum_scalar(std::span<const double> lambda,
                           std::span<const double> delta, double offset,
                           const double* z, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = offset;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const double lam = lambda[j];
    const double del = delta[j];
    const double* zj = z + j * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = zj[i] - del;
      y[i] = std::fma(lam * d, d, y[i]);
    }
  }
}

namespace {

bool avx2_usable() {
#if defined(BALLPROB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void cf_factors_resolve(std::span<const double> lambda,
                        std::span<const double> delta_sq, bool has_shift,
                        std::span<const double> t, CfTerms* out);
void quadform_accum_resolve(std::span<const double> lambda,
                            std::span<const double> delta, double offset,
                            const double* z, std::size_t n, double* y);

void select_kernels() {
#if defined(BALLPROB_HAVE_AVX2_TU)
  if (avx2_usable()) {
    cf_factors = &cf_factors_avx2;
    quadform_accum = &quadform_accum_avx2;
    return;
  }
#endif
  cf_factors = &cf_factors_scalar;
  quadform_accum = &quadform_accum_scalar;
}

void cf_factors_resolve(std::span<const double> lambda,
                        std::span<const double> delta_sq, bool has_shift,
                        std::span<const double> t, CfTerms* out) {
  select_kernels();
  cf_factors(lambda, delta_sq, has_shift, t, out);
}

void quadform_accum_resolve(std::span<const double> lambda,
                            std::span<const double> delta, double offset,
                            const double* z, std::size_t n, double* y) {
  select_kernels();
  quadform_accum(lambda, delta, offset, z, n, y);
}

}  // namespace

CfFactorsFn cf_factors = &cf_factors_resolve;
QuadFormAccumFn quadform_accum = &quadform_accum_resolve;

std::string_view active_kernel_name() {
  select_kernels();
  return cf_factors == &cf_factors_scalar ? "scalar" : "avx2";
}

}  // namespace ballprob::kern
