#pragma once

namespace ballprob::calib {

/// Seed of the reference random corpus used by every calibration below and
/// by the regression suites.
inline constexpr unsigned long long kCorpusSeed = 20240601ULL;

/// Single empirical stand-in for the absolute constants of the comparison,
/// anti-concentration and density bounds. Calibration runs (all at the
/// corpus seed above):
///   ballprob sweep --n 1000 --seed 20240601            -> max ratio 0.159
///   ballprob sweep --band --n 1000 --eps {0.01,0.1,0.5} -> max ratio 0.486
///   density-sup / kappa probes over two-dominant spectra -> sup -> 0.49990
///   bayes scenario suite                                -> max ratio 0.131
/// The two-eigenvalue limit is exactly 1/2 (sup density = 1/(2 sqrt(l1 l2))
/// is attained there), so 0.55 clears every instance with headroom while
/// staying tight enough to be a meaningful regression guard.
inline constexpr double kEmpiricalConstant = 0.55;

/// Uniform bound on (integral of prod_j (1 + lambda_j^2 t^2)^{-1/4}) *
/// Lambda_1 over spectra with 3 lambda_1^2 <= Lambda_1^2. The worst case is
/// the boundary p = 3 with equal eigenvalues, where the integral is
/// H(1/4) = Gamma(1/2)Gamma(1/4)/(2 Gamma(3/4)) and the product with
/// sqrt(3) evaluates to 4.5415; frozen with headroom.
inline constexpr double kHolderConstant = 5.0;

/// Dimension-free bracket for sup_x density * sqrt(p) on identity spectra,
/// p in {3, ..., 50}. Frozen from the closed-form mode-density oracle:
/// the exact values fall from 0.41900 (p = 3) monotonically towards
/// 1/(2 sqrt(pi)) ~ 0.28209, reaching 0.28693 at p = 50.
inline constexpr double kIdentityDensityLow = 0.27;
inline constexpr double kIdentityDensityHigh = 0.45;

}  // namespace ballprob::calib
