#pragma once

#include <span>
#include <utility>

#include "ballprob/bounds.hpp"
#include "ballprob/quadform.hpp"
#include "ballprob/spectrum.hpp"

namespace ballprob {

/// Numerically computed Kolmogorov distance between two ball-probability
/// CDFs together with the comparison bound that controls it.
struct ComparisonResult {
  double distance = 0.0;
  double argmax_x = 0.0;
  BoundReport bound;
  /// distance / bound.value; 0 when the bound is infinite or zero.
  double ratio = 0.0;
};

/// sup_x |F_X(x) - F_Y(x)| over the squared-radius scale (identical to the
/// radius scale by monotone reparametrization). 512-point grid over the
/// union of both supports, then golden-section refinement around the
/// incumbent.
std::pair<double, double> kolmogorov_distance(const QuadFormLaw& law_x,
                                              const QuadFormLaw& law_y,
                                              const InversionConfig& cfg = {});

/// P(x < ||xi - a||^2 < x + eps) = F(x + eps) - F(x).
double band_probability(const QuadFormLaw& law, double x, double eps,
                        const InversionConfig& cfg = {});

/// sup over x of band_probability, by grid plus refinement. eps = 0 returns
/// {0, 0} by convention.
std::pair<double, double> sup_band(const QuadFormLaw& law, double eps,
                                   const InversionConfig& cfg = {});

/// Distance between ||xi - a||^2 (covariance spectrum sx, shift a in its
/// eigenbasis) and ||eta||^2 (spectrum sy, centred), with the comparison
/// bound and their ratio.
ComparisonResult compare(const Spectrum& sx, const Spectrum& sy,
                         std::span<const double> shift,
                         const InversionConfig& cfg = {});

}  // namespace ballprob
