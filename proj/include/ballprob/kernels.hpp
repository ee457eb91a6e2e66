#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace ballprob::kern {

/// Per-frequency characteristic-function factors of a weighted noncentral
/// chi-square law, before the final exponential:
///   factor(t) = prod_j (1 - 2 i t lambda_j)^{-1/2}        -> (prod_re, prod_im)
///   shift(t)  = sum_j i t lambda_j delta_j^2 / (1 - 2 i t lambda_j)
///             = sum_j (-b^2/2 + i b/2) delta_j^2 / (1 + b^2),  b = 2 t lambda_j
///                                                        -> (shift_re, shift_im)
/// so that cf0(t) = (prod) * exp(shift). Each per-factor square root uses the
/// principal branch (Re(1 - 2 i t lambda) = 1 > 0), which is why the product
/// of roots is accumulated instead of one root of the product: the latter
/// picks the wrong branch once the total argument winds past pi.
struct CfTerms {
  double prod_re;
  double prod_im;
  double shift_re;
  double shift_im;
};

using CfFactorsFn = void (*)(std::span<const double> lambda,
                             std::span<const double> delta_sq, bool has_shift,
                             std::span<const double> t, CfTerms* out);

/// y[i] = offset + sum_j lambda[j] * (z[j*n + i] - delta[j])^2 for i < n.
/// z is laid out coordinate-major so the draw index is the contiguous one.
using QuadFormAccumFn = void (*)(std::span<const double> lambda,
                                 std::span<const double> delta, double offset,
                                 const double* z, std::size_t n, double* y);

// Scalar reference kernels.
void cf_factors_scalar(std::span<const double> lambda,
                       std::span<const double> delta_sq, bool has_shift,
                       std::span<const double> t, CfTerms* out);
void quadform_accum_scalar(std::span<const double> lambda,
                           std::span<const double> delta, double offset,
                           const double* z, std::size_t n, double* y);

#if defined(BALLPROB_HAVE_AVX2_TU)
void cf_factors_avx2(std::span<const double> lambda,
                     std::span<const double> delta_sq, bool has_shift,
                     std::span<const double> t, CfTerms* out);
void quadform_accum_avx2(std::span<const double> lambda,
                         std::span<const double> delta, double offset,
                         const double* z, std::size_t n, double* y);
#endif

// Dispatched entry points (resolved once, on first use).
extern CfFactorsFn cf_factors;
extern QuadFormAccumFn quadform_accum;

/// "avx2" or "scalar", whichever the dispatcher picked for this machine.
std::string_view active_kernel_name();

}  // namespace ballprob::kern
