#include "ballprob/bounds.hpp"

#include <cmath>
#include <limits>

#include "ballprob/errors.hpp"

namespace ballprob {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BoundReport comparison_bound(const Spectrum& sx, const Spectrum& sy,
                             double shift_norm_sq, bool same_shift) {
  if (shift_norm_sq < 0.0) {
    throw DomainError("comparison_bound: shift_norm_sq must be >= 0");
  }
  const double kx = kappa(sx);
  const double ky = kappa(sy);
  const double l1 = nuclear_diff(sx, sy);
  BoundReport r;
  r.formula_id = same_shift ? "comparison_same_shift" : "comparison";
  r.ingredients = {{"kappa_x", kx},
                   {"kappa_y", ky},
                   {"nuclear_diff", l1},
                   {"shift_norm_sq", shift_norm_sq}};
  r.value = (kx + ky) * (l1 + shift_norm_sq);
  if (std::isnan(r.value)) r.value = 0.0;  // inf * 0
  return r;
}

BoundReport comparison_bound_lambda12(const Spectrum& sx, const Spectrum& sy,
                                      double shift_norm_sq) {
  if (shift_norm_sq < 0.0) {
    throw DomainError("comparison_bound_lambda12: shift_norm_sq must be >= 0");
  }
  const auto prefactor = [](const Spectrum& s) {
    const TailNorms t = tail_norms(s);
    const double prod = t.lambda1() * t.lambda2();
    return prod > 0.0 ? 1.0 / std::sqrt(prod) : kInf;
  };
  const double px = prefactor(sx);
  const double py = prefactor(sy);
  const double l1 = nuclear_diff(sx, sy);
  BoundReport r;
  r.formula_id = "comparison_lambda12";
  r.ingredients = {{"prefactor_x", px},
                   {"prefactor_y", py},
                   {"nuclear_diff", l1},
                   {"shift_norm_sq", shift_norm_sq}};
  r.value = (px + py) * (l1 + shift_norm_sq);
  if (std::isnan(r.value)) r.value = 0.0;
  return r;
}

BoundReport comparison_bound_frobenius(const Spectrum& sx, const Spectrum& sy,
                                       double shift_norm_sq) {
  if (shift_norm_sq < 0.0) {
    throw DomainError("comparison_bound_frobenius: shift_norm_sq must be >= 0");
  }
  const auto check = [](const Spectrum& s, const char* which) -> double {
    const TailNorms t = tail_norms(s);
    const double top = s.empty() ? 0.0 : s[0];
    if (3.0 * top * top > t.lambda1_sq) {
      throw ConditionError(std::string("comparison_bound_frobenius: spectrum ") +
                           which + " violates 3 lambda_1^2 <= Lambda_1^2");
    }
    return t.lambda1();
  };
  const double fx = check(sx, "x");
  const double fy = check(sy, "y");
  const double l1 = nuclear_diff(sx, sy);
  BoundReport r;
  r.formula_id = "comparison_frobenius";
  r.ingredients = {{"frobenius_x", fx},
                   {"frobenius_y", fy},
                   {"nuclear_diff", l1},
                   {"shift_norm_sq", shift_norm_sq}};
  const double pre = (fx > 0.0 ? 1.0 / fx : kInf) + (fy > 0.0 ? 1.0 / fy : kInf);
  r.value = pre * (l1 + shift_norm_sq);
  if (std::isnan(r.value)) r.value = 0.0;
  return r;
}

BoundReport comparison_bound_operator(const Eigen::MatrixXd& sx_full,
                                      const Eigen::MatrixXd& sy_full,
                                      double shift_norm_sq) {
  if (shift_norm_sq < 0.0) {
    throw DomainError("comparison_bound_operator: shift_norm_sq must be >= 0");
  }
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(sx_full.rows());
  const MatrixSpectrum mx = spectrum_of_matrix(sx_full, zero);
  const MatrixSpectrum my = spectrum_of_matrix(sy_full, zero);
  if (mx.spectrum.empty() || mx.spectrum[mx.spectrum.size() - 1] <= 0.0) {
    throw DomainError("comparison_bound_operator: Sigma_x must be positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sx_full + sx_full.transpose()));
  const Eigen::MatrixXd inv_sqrt =
      es.operatorInverseSqrt();
  const Eigen::MatrixXd m =
      inv_sqrt * (0.5 * (sy_full + sy_full.transpose())) * inv_sqrt -
      Eigen::MatrixXd::Identity(sx_full.rows(), sx_full.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esm(0.5 * (m + m.transpose()),
                                                     Eigen::EigenvaluesOnly);
  const double opnorm = esm.eigenvalues().cwiseAbs().maxCoeff();
  const double kx = kappa(mx.spectrum);
  const double ky = kappa(my.spectrum);
  const double trace = mx.spectrum.trace();
  BoundReport r;
  r.formula_id = "comparison_operator";
  r.ingredients = {{"kappa_x", kx},
                   {"kappa_y", ky},
                   {"trace_x", trace},
                   {"relative_opnorm", opnorm},
                   {"shift_norm_sq", shift_norm_sq}};
  r.value = (kx + ky) * (trace * opnorm + shift_norm_sq);
  if (std::isnan(r.value)) r.value = 0.0;
  return r;
}

BoundReport anticoncentration_bound(const Spectrum& s, double eps) {
  if (!(eps > 0.0)) {
    throw DomainError("anticoncentration_bound: eps must be > 0");
  }
  const double k = kappa(s);
  BoundReport r;
  r.formula_id = "anticoncentration";
  r.ingredients = {{"kappa", k}, {"eps", eps}};
  r.value = k * eps;
  return r;
}

BoundReport density_uniform_bound(const Spectrum& s) {
  const double k = kappa(s);
  BoundReport r;
  r.formula_id = "density_uniform";
  r.ingredients = {{"kappa", k}};
  r.value = k;
  return r;
}

double density_nonuniform_bound(const QuadFormLaw& law, double x,
                                std::optional<double> lambda_free) {
  if (x < 0.0) throw DomainError("density_nonuniform_bound: x must be >= 0");
  const auto& w = law.weights();
  const double l1 = w.empty() ? 0.0 : w[0];
  const double l2 = w.size() > 1 ? w[1] : 0.0;
  const double lambda = lambda_free.value_or(w.trace());
  if (!(lambda > l1)) {
    throw DomainError("density_nonuniform_bound: lambda must exceed lambda_1");
  }
  if (l2 <= 0.0) return kInf;
  // ||a||^2 = sum lambda_j delta_j^2 + offset.
  double a_sq = law.offset();
  for (std::size_t j = 0; j < law.dim(); ++j) {
    a_sq += w[j] * law.noncentrality_sq()[j];
  }
  const double gap = std::sqrt(x) - std::sqrt(a_sq);
  double log_prod = 0.0;
  for (std::size_t j = 2; j < w.size(); ++j) {
    log_prod += -0.5 * std::log1p(-w[j] / lambda);
  }
  return std::exp(-gap * gap / (2.0 * lambda) + log_prod) /
         std::sqrt(2.0 * l1 * l2);
}

double pinsker_baseline(const Eigen::MatrixXd& sx_full,
                        const Eigen::MatrixXd& sy_full,
                        const Eigen::VectorXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sx_full + sx_full.transpose()));
  if (es.info() != Eigen::Success) {
    throw DomainError("pinsker_baseline: eigendecomposition failed");
  }
  const double min_ev = es.eigenvalues().minCoeff();
  const double max_ev = es.eigenvalues().maxCoeff();
  if (min_ev <= 0.0 || min_ev < 1e-14 * max_ev) {
    throw DomainError(
        "pinsker_baseline: Sigma_x must be strictly positive definite "
        "(this baseline needs the inverse covariance)");
  }
  const Eigen::MatrixXd inv_sqrt = es.operatorInverseSqrt();
  const Eigen::MatrixXd m =
      inv_sqrt * (0.5 * (sy_full + sy_full.transpose())) * inv_sqrt -
      Eigen::MatrixXd::Identity(sx_full.rows(), sx_full.cols());
  return 0.5 * (m.norm() + (inv_sqrt * a).norm());
}

}  // namespace ballprob
