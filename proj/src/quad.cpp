#include "ballprob/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace ballprob {

namespace {

// Kronrod-15 abscissae and weights with the embedded Gauss-7 rule
// (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace

QuadResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kres = kWgk[7] * fc;
  double gres = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double s = f(c - x) + f(c + x);
    kres += kWgk[i] * s;
    if (i % 2 == 1) gres += kWg[i / 2] * s;
  }
  QuadResult r;
  r.value = kres * h;
  r.err = std::abs((kres - gres) * h);
  r.evals = 15;
  return r;
}

QuadResult adaptive_gk(const std::function<double(double)>& f, double a,
                       double b, double abs_tol, std::size_t max_panels) {
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  std::priority_queue<Panel> heap;
  QuadResult total = gk15(f, a, b);
  heap.push(Panel{a, b, total.value, total.err});
  std::size_t panels = 1;
  while (total.err > abs_tol && panels < max_panels) {
    Panel worst = heap.top();
    if (worst.err <= 0.0) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at double precision
      heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    const QuadResult left = gk15(f, worst.a, mid);
    const QuadResult right = gk15(f, mid, worst.b);
    total.value += left.value + right.value - worst.value;
    total.err += left.err + right.err - worst.err;
    total.evals += 30;
    heap.push(Panel{worst.a, mid, left.value, left.err});
    heap.push(Panel{mid, worst.b, right.value, right.err});
    ++panels;
  }
  // Rebuild the error sum to shed cancellation from the incremental updates.
  double err = 0.0, val = 0.0;
  while (!heap.empty()) {
    err += heap.top().err;
    val += heap.top().value;
    heap.pop();
  }
  total.err = err;
  total.value = val;
  return total;
}

double decreasing_tail_integral(const std::function<double(double)>& W,
                                double T) {
  // t = T/v^2:  int_T^inf W dt = 2T int_0^1 W(T/v^2) v^{-3} dv.
  const auto g = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double t = T / (v * v);
    return 2.0 * T * W(t) / (v * v * v);
  };
  const double scale = std::abs(gk15(g, 0.0, 1.0).value);
  QuadResult r = adaptive_gk(g, 0.0, 1.0, 0.01 * scale, 48);
  // This feeds error budgets only; pad it rather than chase digits.
  return r.value + r.err;
}

}  // namespace ballprob
