#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ballprob/quadform.hpp"
#include "ballprob/spectrum.hpp"

namespace ballprob {

/// Evaluated right-hand side of one of the comparison / anti-concentration /
/// density bounds, constant-free (the absolute constants hidden behind the
/// bound statements' "up to a constant" are calibrated empirically elsewhere).
struct BoundReport {
  std::string formula_id;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> ingredients;
  bool condition_ok = true;
};

/// Kolmogorov-on-balls comparison bound
///   (kappa(Sx) + kappa(Sy)) * (||lambda_x - lambda_y||_1 + ||a||^2).
/// The same RHS covers balls around a common shift; same_shift only relabels
/// the report.
BoundReport comparison_bound(const Spectrum& sx, const Spectrum& sy,
                             double shift_norm_sq, bool same_shift = false);

/// Unified form with (Lambda_1 Lambda_2)^{-1/2} prefactors; equals
/// comparison_bound up to a factor in [0.9, 1.8] per kappa term.
BoundReport comparison_bound_lambda12(const Spectrum& sx, const Spectrum& sy,
                                      double shift_norm_sq);

/// High-dimensional form (1/Lambda_1x + 1/Lambda_1y) * (...). Requires
/// 3 lambda_1^2 <= Lambda_1^2 for both spectra; throws ConditionError naming
/// the offender otherwise.
BoundReport comparison_bound_frobenius(const Spectrum& sx, const Spectrum& sy,
                                       double shift_norm_sq);

/// Operator-norm form: the l1 spectral difference is replaced by
/// tr(Sx) * ||Sx^{-1/2} Sy Sx^{-1/2} - I||. Sx must be strictly positive
/// definite.
BoundReport comparison_bound_operator(const Eigen::MatrixXd& sx_full,
                                      const Eigen::MatrixXd& sy_full,
                                      double shift_norm_sq);

/// sup_x P(x < ||xi - a||^2 < x + eps) <~ kappa(s) * eps.
BoundReport anticoncentration_bound(const Spectrum& s, double eps);

/// sup_x p(x, a) <~ kappa(s), shift-independent.
BoundReport density_uniform_bound(const Spectrum& s);

/// Pointwise density bound
///   exp(-(sqrt(x) - ||a||)^2 / (2 lambda)) / sqrt(2 l1 l2)
///     * prod_{j>=3} (1 - lambda_j/lambda)^{-1/2},   lambda > lambda_1.
/// Defaults lambda to the trace, for which the product is at most sqrt(e).
double density_nonuniform_bound(const QuadFormLaw& law, double x,
                                std::optional<double> lambda_free = {});

/// Total-variation baseline via the Kullback-Leibler route:
///   0.5 * (||Sx^{-1/2} Sy Sx^{-1/2} - I||_Fr + ||Sx^{-1/2} a||).
/// Involves the inverse covariance, hence blows up on nearly singular Sx --
/// exactly the failure mode the comparison bounds avoid.
double pinsker_baseline(const Eigen::MatrixXd& sx_full,
                        const Eigen::MatrixXd& sy_full,
                        const Eigen::VectorXd& a);

}  // namespace ballprob
