#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ballprob/analysis.hpp"
#include "ballprob/quadform.hpp"
#include "ballprob/spectrum.hpp"

namespace ballprob {

/// Gaussian linear model Y = Psi^T theta + eps, eps ~ N(0, sigma^2 I_n),
/// with the design stored as the p x n matrix Psi.
struct LinearGaussianModel {
  Eigen::MatrixXd design;    // Psi, p x n
  double noise_var = 1.0;    // sigma^2
  Eigen::VectorXd response;  // Y, n
  Eigen::VectorXd truth;     // f* = Psi^T theta*, n
};

/// Gaussian posterior for a prior N(0, G^{-2}):
///   mean = (Psi Psi^T + sigma^2 G^2)^{-1} Psi Y,
///   precision = sigma^{-2} Psi Psi^T + G^2.
struct Posterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd precision;
};

/// Seeded synthetic design: random orthogonal factors with polynomially
/// decaying singular values s_i = i^{-decay}, a smooth truth, and a response
/// drawn from the model.
LinearGaussianModel synthesize_model(Eigen::Index n, Eigen::Index p,
                                     double sigma2, std::uint64_t design_seed,
                                     double decay = 1.0);

Posterior posterior(const LinearGaussianModel& model,
                    const Eigen::MatrixXd& prior_precision_sq);

/// Radius r with P(||xi_G|| >= r) = alpha for xi_G centred Gaussian with
/// covariance spectrum sigma_g.
double credible_radius(const Spectrum& sigma_g, double alpha,
                       const InversionConfig& cfg = {});

/// Swaps the prior G -> G1 and measures how much credibility the G-credible
/// set loses: observed = |P(||W(theta_G1 - mean_G)|| >= r_G | Y) - alpha|,
/// against the constant-free envelope
/// (tr Sigma_G1 - tr Sigma_G + ||a||^2) / ||Sigma_G||_Fr. When G^2 - G1^2 is
/// not PSD the trace identity fails; the record is flagged and the general
/// l1 spectral difference is used instead. The Pinsker baseline rides along
/// in extras (+inf when Sigma_G is singular).
ExperimentRecord prior_impact(const LinearGaussianModel& model,
                              const Eigen::MatrixXd& g_sq,
                              const Eigen::MatrixXd& g1_sq,
                              const Eigen::MatrixXd& w, double alpha,
                              const InversionConfig& cfg = {});

/// Frequentist coverage deviation of the nonparametric-Bayes credible set
/// for the true response: observed = |P(f* not in E_G(r_G)) - alpha| against
/// (tr Sigma_G - tr Sigma + ||a||^2) / ||Sigma||_Fr, where
/// Pi_G = Psi^T (Psi Psi^T + sigma^2 G^2)^{-1} Psi,
/// Sigma_G = sigma^2 A Pi_G A^T, Sigma = sigma^2 A Pi_G^2 A^T,
/// a = A (I - Pi_G) f*.
ExperimentRecord np_bayes_coverage(const LinearGaussianModel& model,
                                   const Eigen::MatrixXd& g_sq,
                                   const Eigen::MatrixXd& a_map, double alpha,
                                   const InversionConfig& cfg = {});

/// Monte Carlo P(||a + xi|| <= radius), xi ~ N(0, Sigma): the independent
/// check for every probability the demos compute through quadform.
double mc_ball_probability(const Eigen::MatrixXd& sigma,
                           const Eigen::VectorXd& a, double radius,
                           std::size_t n, std::uint64_t seed);

}  // namespace ballprob
