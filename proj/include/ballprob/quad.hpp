#pragma once

#include <cstddef>
#include <functional>

namespace ballprob {

struct QuadResult {
  double value = 0.0;
  double err = 0.0;
  std::size_t evals = 0;
};

/// One Gauss-Kronrod 7-15 panel on [a, b]; err is |K15 - G7|.
QuadResult gk15(const std::function<double(double)>& f, double a, double b);

/// Globally adaptive GK7-15 on [a, b]: bisects the worst panel until the
/// summed error estimate drops below abs_tol or the panel budget runs out.
/// Never throws; the caller inspects .err.
QuadResult adaptive_gk(const std::function<double(double)>& f, double a,
                       double b, double abs_tol, std::size_t max_panels = 800);

/// integral_T^inf W(t) dt for a smooth nonnegative W decaying at least like
/// t^{-3/2}, via t = T/v^2 (which turns an algebraic tail into a bounded
/// integrand on (0,1]). Used for truncation-error envelopes, so a few percent
/// of relative accuracy is all that is asked of it.
double decreasing_tail_integral(const std::function<double(double)>& W,
                                double T);

}  // namespace ballprob
