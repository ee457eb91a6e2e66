#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ballprob {

/// Eigenvalue sequence of a covariance operator, stored nonincreasing.
/// All entries are nonnegative and the sum (the trace / nuclear norm of the
/// operator) is finite by construction.
class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts the values nonincreasing. Throws DomainError on a negative or
  /// non-finite entry.
  explicit Spectrum(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// tr(Sigma) = sum of eigenvalues = nuclear norm for a covariance operator.
  double trace() const;

  bool operator==(const Spectrum&) const = default;

 private:
  std::vector<double> values_;
};

Spectrum make_spectrum(std::span<const double> values);

/// Squared tail norms Lambda_k^2 = sum_{j>=k} lambda_j^2 for k = 1, 2.
/// Lambda_1 equals the Frobenius norm of the operator.
struct TailNorms {
  double lambda1_sq = 0.0;
  double lambda2_sq = 0.0;

  double lambda1() const;
  double lambda2() const;
};

TailNorms tail_norms(const Spectrum& s);

/// Shape classes of a spectrum, as used by the piecewise kappa.
///   HighDim: 3 lambda_1^2 <= Lambda_1^2   (no dominant eigenvalue)
///   Spike:   one dominant eigenvalue over a diffuse tail
///   TwoDim:  two dominant eigenvalues
enum class Regime { HighDim, Spike, TwoDim };

std::string_view regime_name(Regime r);

Regime regime(const Spectrum& s);

/// The piecewise dimension-free quantity controlling the density and
/// comparison bounds:
///   HighDim: 1/Lambda_1,  Spike: (lambda_1 Lambda_2)^{-1/2},
///   TwoDim:  (lambda_1 lambda_2)^{-1/2}.
/// Degenerate denominators yield +inf (the bounds are then vacuous).
/// Throws DomainError for the all-zero spectrum.
double kappa(const Spectrum& s);

/// l1 distance of the sorted eigenvalue sequences, the shorter one padded
/// with zeros. By the Weilandt-Hoffman inequality this never exceeds the
/// nuclear norm of the difference of the underlying operators.
double nuclear_diff(const Spectrum& sx, const Spectrum& sy);

/// Spectrum of a symmetric PSD matrix together with the shift rotated into
/// the (sorted) eigenbasis; the rotation preserves the norm of the shift.
struct MatrixSpectrum {
  Spectrum spectrum;
  std::vector<double> shift;
};

/// Eigendecomposes S and expresses a in its eigenbasis, ordered by
/// nonincreasing eigenvalue. Eigenvalues in [-tol, 0] with
/// tol = 1e-10 * max|eigenvalue| are clamped to zero; anything lower throws.
/// Asymmetry beyond 1e-10 (relative to the largest entry) throws.
MatrixSpectrum spectrum_of_matrix(const Eigen::MatrixXd& S,
                                  const Eigen::VectorXd& a);

/// Nuclear (Schatten-one) norm of a symmetric matrix.
double schatten1(const Eigen::MatrixXd& S);

}  // namespace ballprob
