#include "ballprob/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ballprob/errors.hpp"

namespace ballprob {

namespace {

// Maximizes a smooth nonnegative objective on [lo, hi]: fixed grid scan,
// then three golden-section rounds around the incumbent.
std::pair<double, double> grid_maximize(
    const std::function<double(double)>& f, double lo, double hi,
    std::size_t grid_points) {
  double best_x = lo, best_v = -1.0;
  const std::size_t n = std::max<std::size_t>(grid_points, 8);
  double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  constexpr double kGolden = 0.6180339887498949;
  for (int round = 0; round < 3; ++round) {
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 16; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = f(x1);
      }
    }
    const double cand_x = f1 > f2 ? x1 : x2;
    const double cand_v = std::max(f1, f2);
    if (cand_v > best_v) {
      best_v = cand_v;
      best_x = cand_x;
    }
    step = (b - a);
  }
  return {best_v, best_x};
}

}  // namespace

std::pair<double, double> kolmogorov_distance(const QuadFormLaw& law_x,
                                              const QuadFormLaw& law_y,
                                              const InversionConfig& cfg) {
  const Inverter ix(law_x, cfg);
  const Inverter iy(law_y, cfg);
  const double lo = std::min(law_x.offset(), law_y.offset());
  const double hi =
      std::max(law_x.mean() + 8.0 * std::sqrt(law_x.variance()),
               law_y.mean() + 8.0 * std::sqrt(law_y.variance()));
  const auto gap = [&](double x) {
    return std::abs(ix.cdf_eval(x).value - iy.cdf_eval(x).value);
  };
  auto [v, x] = grid_maximize(gap, lo, hi, 512);
  return {v, x};
}

double band_probability(const QuadFormLaw& law, double x, double eps,
                        const InversionConfig& cfg) {
  if (!(eps > 0.0)) {
    throw DomainError("band_probability: eps must be > 0");
  }
  const Inverter inv(law, cfg);
  return std::clamp(inv.cdf(x + eps) - inv.cdf(x), 0.0, 1.0);
}

std::pair<double, double> sup_band(const QuadFormLaw& law, double eps,
                                   const InversionConfig& cfg) {
  if (eps < 0.0) throw DomainError("sup_band: eps must be >= 0");
  if (eps == 0.0) return {0.0, 0.0};
  const Inverter inv(law, cfg);
  const double lo = law.offset();
  const double hi = law.mean() + 8.0 * std::sqrt(law.variance());
  const auto band = [&](double x) {
    const double v =
        inv.cdf_eval(x + eps).value - inv.cdf_eval(x).value;
    return std::clamp(v, 0.0, 1.0);
  };
  // For unimodal densities the sup sits near the mode; the grid handles the
  // rest.
  auto [v, x] = grid_maximize(band, lo, hi, 512);
  return {v, x};
}

ComparisonResult compare(const Spectrum& sx, const Spectrum& sy,
                         std::span<const double> shift,
                         const InversionConfig& cfg) {
  const QuadFormLaw law_x = from_gaussian(sx, shift);
  const QuadFormLaw law_y = from_gaussian(sy, {});
  double shift_norm_sq = 0.0;
  for (double a : shift) shift_norm_sq += a * a;

  ComparisonResult r;
  std::tie(r.distance, r.argmax_x) = kolmogorov_distance(law_x, law_y, cfg);
  r.bound = comparison_bound(sx, sy, shift_norm_sq);
  r.ratio = (std::isfinite(r.bound.value) && r.bound.value > 0.0)
                ? r.distance / r.bound.value
                : 0.0;
  return r;
}

}  // namespace ballprob
