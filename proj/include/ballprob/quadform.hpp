#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ballprob/spectrum.hpp"

namespace ballprob {

/// Accuracy knobs for characteristic-function inversion.
struct InversionConfig {
  /// Target absolute error. 0 picks the per-law default: 1e-6 with three or
  /// more positive weights, 1e-5 otherwise (the c.f. then decays slower).
  double abs_tol = 0.0;
  /// Hard cap on the truncation frequency of the inversion integral.
  double max_freq = 1e12;
  /// Budget of Gauss-Kronrod panels for one head integral.
  std::size_t max_panels = 4000;
  /// Geometric growth ratio of the seeded head grid.
  double panel_growth = 4.0;
  /// Multiplies the width h = 1e-4/(1 + tr) of the first head panel.
  double head_step_scale = 1.0;
};

/// Law of offset + sum_j lambda_j (Z_j - delta_j)^2 with independent standard
/// normal Z_j: a weighted non-central chi-square. This is the law of the
/// squared Hilbert-space distance ||xi - a||^2 of a centred Gaussian element
/// from a point, expressed in the eigenbasis of its covariance operator.
/// Zero weights are dropped (their coordinates contribute nothing here;
/// from_gaussian folds zero-eigenvalue coordinates into the offset instead).
class QuadFormLaw {
 public:
  QuadFormLaw() = default;
  QuadFormLaw(const Spectrum& weights, std::vector<double> noncentrality,
              double offset);

  const Spectrum& weights() const { return weights_; }
  std::span<const double> noncentrality() const { return delta_; }
  std::span<const double> noncentrality_sq() const { return delta_sq_; }
  double offset() const { return offset_; }
  /// Number of positive weights.
  std::size_t dim() const { return weights_.size(); }
  bool has_shift() const { return has_shift_; }

  double mean() const;
  double variance() const;

  bool operator==(const QuadFormLaw&) const = default;

 private:
  Spectrum weights_;
  std::vector<double> delta_;
  std::vector<double> delta_sq_;
  double offset_ = 0.0;
  bool has_shift_ = false;
};

/// Law of ||xi - a||^2 for xi centred Gaussian with the given covariance
/// spectrum, a expressed in the eigenbasis. delta_j = shift_j / sqrt(lambda_j)
/// for positive eigenvalues; coordinates with lambda_j = 0 (including shift
/// entries beyond the spectrum length) contribute shift_j^2 to the offset.
/// A shorter shift is padded with zeros.
QuadFormLaw from_gaussian(const Spectrum& s, std::span<const double> shift);

/// E exp(i t ||xi - a||^2): product over coordinates of
/// (1 - 2 i t lambda_j)^{-1/2} exp(i t lambda_j delta_j^2 / (1 - 2 i t lambda_j)),
/// times exp(i t offset).
std::complex<double> cf(const QuadFormLaw& law, double t);

/// prod_j (1 + 4 lambda_j^2 t^2)^{-1/4} >= |cf(law, t)| for all t.
double cf_modulus_bound(const QuadFormLaw& law, double t);

/// CDF/density evaluator. Precomputes truncation-error envelopes once per
/// law, so prefer one Inverter per law when evaluating many points.
/// Immutable and safe to share across threads.
class Inverter {
 public:
  explicit Inverter(QuadFormLaw law, InversionConfig cfg = {});
  ~Inverter();
  Inverter(Inverter&&) noexcept;
  Inverter& operator=(Inverter&&) noexcept;

  struct Eval {
    double value = 0.0;
    double err_est = 0.0;
  };

  /// Gil-Pelaez: F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itw} f0(t)) / t dt,
  /// w = x - offset. Does not throw on accuracy shortfall; check err_est.
  Eval cdf_eval(double x) const;
  /// p(x) = (1/pi) int_0^inf Re(e^{-itw} f0(t)) dt. Needs dim() >= 2.
  Eval density_eval(double x) const;

  /// Checked variants: throw NumericalError when err_est exceeds abs_tol.
  double cdf(double x) const;
  double density(double x) const;
  /// Inverse CDF by bracketing + bisection; cdf(result) = p within abs_tol.
  double quantile(double p) const;

  double abs_tol() const { return tol_; }
  const QuadFormLaw& law() const { return law_; }

 private:
  struct Impl;
  QuadFormLaw law_;
  double tol_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrappers around Inverter.
double cdf(const QuadFormLaw& law, double x, const InversionConfig& cfg = {});
double density(const QuadFormLaw& law, double x,
               const InversionConfig& cfg = {});
double quantile(const QuadFormLaw& law, double p,
                const InversionConfig& cfg = {});

/// n deterministic draws: offset + sum_j lambda_j (Z_j - delta_j)^2.
std::vector<double> sample(const QuadFormLaw& law, std::size_t n,
                           std::uint64_t seed);

/// Tail bound attached to a truncated law. With S = sum of removed weights
/// and D = sum of removed lambda_j delta_j^2 (the removed shift mass),
/// the removed remainder R satisfies, for any eps > 0,
///   P(R >= 2 eps^2 + 2 D) <= operator()(eps) = min(1, 2 exp(-eps^2 / (2 S))).
struct TruncationTail {
  double tail_lambda_sum = 0.0;
  double discarded_shift_sq = 0.0;

  double operator()(double eps) const;
};

/// Keeps the first m (largest) positive weights. m >= dim() returns the law
/// unchanged with a zero tail bound.
std::pair<QuadFormLaw, TruncationTail> truncate(const QuadFormLaw& law,
                                                std::size_t m);

}  // namespace ballprob
