#include "ballprob/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ballprob/errors.hpp"

namespace ballprob {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw DomainError("spectrum entries must be finite");
    }
    if (v < 0.0) {
      throw DomainError("covariance eigenvalues must be >= 0");
    }
  }
  std::sort(values_.begin(), values_.end(), std::greater<double>());
}

double Spectrum::trace() const {
  double t = 0.0;
  for (double v : values_) t += v;
  return t;
}

Spectrum make_spectrum(std::span<const double> values) {
  return Spectrum(std::vector<double>(values.begin(), values.end()));
}

double TailNorms::lambda1() const { return std::sqrt(lambda1_sq); }
double TailNorms::lambda2() const { return std::sqrt(lambda2_sq); }

TailNorms tail_norms(const Spectrum& s) {
  TailNorms t;
  // Sum the tail first (small values) for a little extra accuracy.
  for (std::size_t j = s.size(); j-- > 1;) t.lambda2_sq += s[j] * s[j];
  t.lambda1_sq = t.lambda2_sq + (s.empty() ? 0.0 : s[0] * s[0]);
  return t;
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::HighDim: return "HighDim";
    case Regime::Spike: return "Spike";
    case Regime::TwoDim: return "TwoDim";
  }
  return "?";
}

Regime regime(const Spectrum& s) {
  const TailNorms t = tail_norms(s);
  const double l1 = s.empty() ? 0.0 : s[0];
  const double l2 = s.size() > 1 ? s[1] : 0.0;
  if (3.0 * l1 * l1 <= t.lambda1_sq) return Regime::HighDim;
  if (3.0 * l2 * l2 <= t.lambda2_sq) return Regime::Spike;
  return Regime::TwoDim;
}

double kappa(const Spectrum& s) {
  const TailNorms t = tail_norms(s);
  if (t.lambda1_sq <= 0.0) {
    throw DomainError("kappa needs a nonzero spectrum");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double l1 = s[0];
  const double l2 = s.size() > 1 ? s[1] : 0.0;
  switch (regime(s)) {
    case Regime::HighDim:
      return 1.0 / t.lambda1();
    case Regime::Spike: {
      const double d = l1 * t.lambda2();
      return d > 0.0 ? 1.0 / std::sqrt(d) : inf;
    }
    case Regime::TwoDim: {
      const double d = l1 * l2;
      return d > 0.0 ? 1.0 / std::sqrt(d) : inf;
    }
  }
  return inf;
}

double nuclear_diff(const Spectrum& sx, const Spectrum& sy) {
  const std::size_t n = std::max(sx.size(), sy.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = j < sx.size() ? sx[j] : 0.0;
    const double y = j < sy.size() ? sy[j] : 0.0;
    sum += std::abs(x - y);
  }
  return sum;
}

MatrixSpectrum spectrum_of_matrix(const Eigen::MatrixXd& S,
                                  const Eigen::VectorXd& a) {
  if (S.rows() != S.cols()) {
    throw DomainError("spectrum_of_matrix: matrix must be square");
  }
  if (a.size() != S.rows()) {
    throw DomainError("spectrum_of_matrix: shift dimension mismatch");
  }
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw DomainError("spectrum_of_matrix: matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (S + S.transpose()));
  if (es.info() != Eigen::Success) {
    throw DomainError("spectrum_of_matrix: eigendecomposition failed");
  }
  Eigen::VectorXd evals = es.eigenvalues();  // ascending
  const double emax = std::max(evals.cwiseAbs().maxCoeff(), 0.0);
  const double tol = 1e-10 * std::max(1e-300, emax);

  const Eigen::VectorXd rotated = es.eigenvectors().transpose() * a;

  const auto n = evals.size();
  std::vector<double> lam(static_cast<std::size_t>(n));
  std::vector<double> shift(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = evals(n - 1 - i);  // descending
    if (v < 0.0) {
      if (v < -tol) {
        throw DomainError("spectrum_of_matrix: matrix is not PSD");
      }
      v = 0.0;
    }
    lam[static_cast<std::size_t>(i)] = v;
    shift[static_cast<std::size_t>(i)] = rotated(n - 1 - i);
  }
  // Eigen returns ascending eigenvalues, so the reversal above already
  // keeps ties in a deterministic order.
  return MatrixSpectrum{Spectrum(std::move(lam)), std::move(shift)};
}

double schatten1(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace ballprob
