#include "ballprob/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <queue>

#include "ballprob/errors.hpp"
#include "ballprob/kernels.hpp"
#include "ballprob/quad.hpp"
#include "ballprob/rng.hpp"

namespace ballprob {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
using cplx = std::complex<double>;
}  // namespace

QuadFormLaw::QuadFormLaw(const Spectrum& weights,
                         std::vector<double> noncentrality, double offset)
    : offset_(offset) {
  if (offset < 0.0 || !std::isfinite(offset)) {
    throw DomainError("QuadFormLaw: offset must be finite and >= 0");
  }
  if (noncentrality.size() > weights.size()) {
    throw DomainError("QuadFormLaw: more noncentralities than weights");
  }
  std::vector<double> lam;
  lam.reserve(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) break;  // sorted, the rest are zeros
    lam.push_back(weights[j]);
    delta_.push_back(j < noncentrality.size() ? noncentrality[j] : 0.0);
  }
  weights_ = Spectrum(std::move(lam));
  delta_sq_.resize(delta_.size());
  for (std::size_t j = 0; j < delta_.size(); ++j) {
    if (!std::isfinite(delta_[j])) {
      throw DomainError("QuadFormLaw: noncentrality must be finite");
    }
    delta_sq_[j] = delta_[j] * delta_[j];
    if (delta_sq_[j] > 0.0) has_shift_ = true;
  }
}

double QuadFormLaw::mean() const {
  double m = offset_;
  for (std::size_t j = 0; j < dim(); ++j) {
    m += weights_[j] * (1.0 + delta_sq_[j]);
  }
  return m;
}

double QuadFormLaw::variance() const {
  double v = 0.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    v += 2.0 * weights_[j] * weights_[j] * (1.0 + 2.0 * delta_sq_[j]);
  }
  return v;
}

QuadFormLaw from_gaussian(const Spectrum& s, std::span<const double> shift) {
  double offset = 0.0;
  std::vector<double> delta;
  delta.reserve(s.size());
  const std::size_t n = std::max(s.size(), shift.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = j < s.size() ? s[j] : 0.0;
    const double a = j < shift.size() ? shift[j] : 0.0;
    if (lam > 0.0) {
      delta.push_back(a / std::sqrt(lam));
    } else {
      offset += a * a;
    }
  }
  return QuadFormLaw(s, std::move(delta), offset);
}

std::complex<double> cf(const QuadFormLaw& law, double t) {
  kern::CfTerms terms;
  const double tv[1] = {t};
  kern::cf_factors(law.weights().values(), law.noncentrality_sq(),
                   law.has_shift(), std::span<const double>(tv, 1), &terms);
  const double amp = std::exp(terms.shift_re);
  const double ang = terms.shift_im + t * law.offset();
  return amp * cplx(terms.prod_re, terms.prod_im) *
         cplx(std::cos(ang), std::sin(ang));
}

double cf_modulus_bound(const QuadFormLaw& law, double t) {
  double logsum = 0.0;
  for (double lam : law.weights().values()) {
    const double b = 2.0 * lam * t;
    logsum += std::log1p(b * b);
  }
  return std::exp(-0.25 * logsum);
}

// ---------------------------------------------------------------------------
// Inversion internals
//
// Everything is phrased for the offset-free part X0 = sum lambda_j(Z_j-d_j)^2
// with c.f. f0; the offset only shifts the evaluation point (w = x - offset).
//
//   F(x)  = 1/2 - (1/pi) int_0^inf Im(f0(t) e^{-iwt}) / t dt
//   p(x)  =       (1/pi) int_0^inf Re(f0(t) e^{-iwt})     dt
//
// The head [0, T] is done with adaptive Gauss-Kronrod panels on batched
// kernel evaluations. The tail [T, inf) is either dropped (bounded by the
// c.f. modulus envelope) or replaced by three integration-by-parts boundary
// terms whose remainder is bounded by int_T^inf |u'''| / w^3 -- that rescues
// the slowly decaying low-dimensional cases where a plain cut-off frequency
// would be astronomically large.
// ---------------------------------------------------------------------------

struct Inverter::Impl {
  InversionConfig cfg;
  const QuadFormLaw* law = nullptr;  // points at the owner's copy
  double tol = 0.0;
  double mean0 = 0.0;
  double sd = 0.0;
  double h0 = 0.0;      // width of the first head panel
  double t_base = 0.0;  // bottom rung of the truncation ladder

  struct Env {
    double T = 0.0;
    double cdf_plain = kInf;  // int_T^inf B/t
    double cdf_ibp = kInf;    // int_T^inf |g0'''| envelope
    double den_plain = kInf;  // int_T^inf B
    double den_ibp = kInf;    // int_T^inf |f0'''| envelope
  };
  mutable std::vector<Env> ladder;
  mutable std::mutex mu;

  std::span<const double> lam() const { return law->weights().values(); }
  std::span<const double> dsq() const { return law->noncentrality_sq(); }

  // --- modulus envelopes ---------------------------------------------------

  double B(double t) const {
    double logsum = 0.0;
    for (double l : lam()) {
      const double b = 2.0 * l * t;
      logsum += std::log1p(b * b);
    }
    return std::exp(-0.25 * logsum);
  }

  // M1 >= |l0'|, M2 >= |l0''|, M3 >= |l0'''| for the log-derivatives of f0.
  void moduli(double t, double& m1, double& m2, double& m3) const {
    m1 = m2 = m3 = 0.0;
    const auto l = lam();
    const auto d2 = dsq();
    for (std::size_t j = 0; j < l.size(); ++j) {
      const double b = 2.0 * l[j] * t;
      const double r2 = 1.0 + b * b;
      const double r1 = std::sqrt(r2);
      const double l2 = l[j] * l[j];
      const double dd = d2[j];
      m1 += l[j] / r1 + l[j] * dd / r2;
      m2 += 2.0 * l2 / r2 + 4.0 * l2 * dd / (r2 * r1);
      m3 += 8.0 * l2 * l[j] / (r2 * r1) + 24.0 * l2 * l[j] * dd / (r2 * r2);
    }
  }

  double w3_cdf(double t) const {
    double m1, m2, m3;
    moduli(t, m1, m2, m3);
    const double inv_t = 1.0 / t;
    const double poly = (m1 * m1 * m1 + 3.0 * m1 * m2 + m3) +
                        inv_t * (3.0 * (m1 * m1 + m2) +
                                 inv_t * (6.0 * m1 + 6.0 * inv_t));
    return B(t) * poly * inv_t;
  }

  double w3_den(double t) const {
    double m1, m2, m3;
    moduli(t, m1, m2, m3);
    return B(t) * (m1 * m1 * m1 + 3.0 * m1 * m2 + m3);
  }

  const Env& env(std::size_t k) const {
    std::scoped_lock lock(mu);
    while (ladder.size() <= k) {
      Env e;
      e.T = t_base * std::ldexp(1.0, static_cast<int>(ladder.size()));
      e.cdf_plain =
          decreasing_tail_integral([this](double t) { return B(t) / t; }, e.T);
      e.cdf_ibp =
          decreasing_tail_integral([this](double t) { return w3_cdf(t); }, e.T);
      // int_T^inf B diverges with fewer than three positive weights.
      e.den_plain = law->dim() >= 3
                        ? decreasing_tail_integral(
                              [this](double t) { return B(t); }, e.T)
                        : kInf;
      e.den_ibp =
          decreasing_tail_integral([this](double t) { return w3_den(t); }, e.T);
      ladder.push_back(e);
    }
    return ladder[k];
  }

  // --- exact boundary values for the integration-by-parts terms -------------

  cplx f0(double t) const {
    kern::CfTerms terms;
    const double tv[1] = {t};
    kern::cf_factors(lam(), dsq(), law->has_shift(),
                     std::span<const double>(tv, 1), &terms);
    const double amp = std::exp(terms.shift_re);
    return amp * cplx(terms.prod_re, terms.prod_im) *
           cplx(std::cos(terms.shift_im), std::sin(terms.shift_im));
  }

  // log-derivatives l0', l0'' of f0 at t.
  void log_derivs(double t, cplx& l1, cplx& l2) const {
    l1 = l2 = 0.0;
    const auto l = lam();
    const auto d2 = dsq();
    for (std::size_t j = 0; j < l.size(); ++j) {
      const double b = 2.0 * l[j] * t;
      const cplx zinv = cplx(1.0, b) / (1.0 + b * b);  // (1 - ib)^{-1}
      const cplx zinv2 = zinv * zinv;
      const cplx il(0.0, l[j]);
      l1 += il * zinv + il * d2[j] * zinv2;
      l2 += -2.0 * l[j] * l[j] * zinv2 -
            4.0 * l[j] * l[j] * d2[j] * zinv2 * zinv;
    }
  }

  // Sum of the three boundary terms of int_T^inf u(t) e^{-iwt} dt where
  // u = f0/t (cdf) or u = f0 (density).
  cplx ibp_terms(double T, double w, bool for_density) const {
    const cplx f = f0(T);
    cplx l1, l2;
    log_derivs(T, l1, l2);
    cplx u0, u1, u2;
    if (for_density) {
      u0 = f;
      u1 = f * l1;
      u2 = f * (l1 * l1 + l2);
    } else {
      const double it = 1.0 / T;
      u0 = f * it;
      u1 = f * (l1 * it - it * it);
      u2 = f * ((l1 * l1 + l2) * it - 2.0 * l1 * it * it +
                2.0 * it * it * it);
    }
    const cplx iw(0.0, w);
    const cplx phase(std::cos(w * T), -std::sin(w * T));
    return phase * (u0 / iw + u1 / (iw * iw) + u2 / (iw * iw * iw));
  }

  struct TailPlan {
    double T = 0.0;
    bool use_ibp = false;
    double err = kInf;
    bool ok = false;
  };

  TailPlan plan_tail(double w, bool for_density, double budget) const {
    TailPlan best;
    const double w3 = w * w * w;
    for (std::size_t k = 0;; ++k) {
      const double T = t_base * std::ldexp(1.0, static_cast<int>(k));
      if (T > cfg.max_freq && k > 0) break;
      const Env& e = env(k);
      const double e_plain = for_density ? e.den_plain : e.cdf_plain;
      const double e_ibp =
          w > 0.0 ? (for_density ? e.den_ibp : e.cdf_ibp) / w3 : kInf;
      const double err = std::min(e_plain, e_ibp);
      if (err < best.err) {
        best = TailPlan{e.T, e_ibp < e_plain, err, err <= budget};
      }
      if (best.ok) break;
      if (k > 60) break;
    }
    return best;
  }

  // --- head quadrature -------------------------------------------------------

  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };

  // Kronrod-15 abscissae/weights (QUADPACK dqk15).
  static constexpr double kX[8] = {
      0.991455371120812639206854697526329,
      0.949107912342758524526189684047851,
      0.864864423359769072789712788640926,
      0.741531185599394439863864773280788,
      0.586087235467691130294144838258730,
      0.405845151377397166906606412076961,
      0.207784955007898467600689403773245,
      0.0};
  static constexpr double kWk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double kWgauss[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  Panel eval_panel(double a, double b, double w, bool for_density) const {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double nodes[15];
    for (int i = 0; i < 7; ++i) {
      nodes[i] = c - h * kX[i];
      nodes[14 - i] = c + h * kX[i];
    }
    nodes[7] = c;
    kern::CfTerms terms[15];
    kern::cf_factors(lam(), dsq(), law->has_shift(),
                     std::span<const double>(nodes, 15), terms);
    double g[15];
    for (int i = 0; i < 15; ++i) {
      const double amp = std::exp(terms[i].shift_re);
      const double ang = terms[i].shift_im - w * nodes[i];
      const double ca = std::cos(ang), sa = std::sin(ang);
      if (for_density) {
        g[i] = amp * (terms[i].prod_re * ca - terms[i].prod_im * sa);
      } else {
        g[i] = amp * (terms[i].prod_re * sa + terms[i].prod_im * ca) /
               nodes[i];
      }
    }
    double kres = kWk[7] * g[7];
    double gres = kWgauss[3] * g[7];
    for (int i = 0; i < 7; ++i) {
      const double s = g[i] + g[14 - i];
      kres += kWk[i] * s;
      if (i % 2 == 1) gres += kWgauss[i / 2] * s;
    }
    return Panel{a, b, kres * h, std::abs((kres - gres) * h)};
  }

  // Adaptive head integral over [0, T].
  void head(double T, double w, bool for_density, double budget,
            double& value, double& err) const {
    // Seed: geometric panels from h0, split further so that no panel spans
    // more than ~1.5 oscillation periods.
    std::vector<double> cuts;
    cuts.push_back(0.0);
    const double wmax = w > 0.0 ? 3.0 * kPi / w : kInf;
    double a = std::min(h0, T);
    while (cuts.back() < T) {
      const double next = std::min(a, T);
      double lo = cuts.back();
      const double width = next - lo;
      if (width > wmax) {
        const int extra = static_cast<int>(
            std::min(2047.0, std::floor(width / wmax)));
        for (int i = 1; i <= extra; ++i) {
          cuts.push_back(lo + width * i / (extra + 1));
        }
      }
      cuts.push_back(next);
      a *= cfg.panel_growth;
    }

    std::priority_queue<Panel> heap;
    value = 0.0;
    err = 0.0;
    std::size_t panels = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Panel p = eval_panel(cuts[i], cuts[i + 1], w, for_density);
      value += p.value;
      err += p.err;
      heap.push(p);
      ++panels;
    }
    while (err > budget && panels < cfg.max_panels) {
      Panel worst = heap.top();
      if (worst.err <= 0.0) break;
      heap.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      if (mid <= worst.a || mid >= worst.b) {
        heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
        continue;
      }
      Panel l = eval_panel(worst.a, mid, w, for_density);
      Panel r = eval_panel(mid, worst.b, w, for_density);
      value += l.value + r.value - worst.value;
      err += l.err + r.err - worst.err;
      heap.push(l);
      heap.push(r);
      ++panels;
    }
    if (err > 0.0) {
      // Rebuild the error sum without incremental cancellation.
      double e = 0.0;
      while (!heap.empty()) {
        e += heap.top().err;
        heap.pop();
      }
      err = e;
    }
  }

  Eval invert(double x, bool for_density) const {
    const double w = x - law->offset();
    if (w <= 0.0) return {0.0, 0.0};
    const double budget_total = tol * kPi;
    TailPlan plan = plan_tail(w, for_density, 0.45 * budget_total);
    double hv = 0.0, he = kInf;
    if (plan.T > 0.0) {
      head(plan.T, w, for_density, 0.45 * budget_total, hv, he);
    }
    double integral = hv;
    if (plan.use_ibp) {
      const cplx r = ibp_terms(plan.T, w, for_density);
      integral += for_density ? r.real() : r.imag();
    }
    Eval out;
    out.err_est = (he + plan.err) / kPi;
    if (for_density) {
      out.value = integral / kPi;
    } else {
      out.value = std::clamp(0.5 - integral / kPi, 0.0, 1.0);
    }
    return out;
  }
};

Inverter::Inverter(QuadFormLaw law, InversionConfig cfg)
    : law_(std::move(law)), impl_(std::make_unique<Impl>()) {
  if (cfg.abs_tol < 0.0 || !(cfg.max_freq > 0.0) ||
      !(cfg.panel_growth > 1.0) || !(cfg.head_step_scale > 0.0) ||
      cfg.max_panels < 16) {
    throw DomainError("InversionConfig: invalid accuracy parameters");
  }
  impl_->cfg = cfg;
  impl_->law = &law_;
  tol_ = cfg.abs_tol > 0.0 ? cfg.abs_tol
                           : (law_.dim() >= 3 ? 1e-6 : 1e-5);
  impl_->tol = tol_;
  impl_->mean0 = law_.mean() - law_.offset();
  impl_->sd = std::sqrt(law_.variance());
  const double tr = law_.weights().trace();
  impl_->h0 = cfg.head_step_scale * 1e-4 / (1.0 + tr);
  impl_->t_base =
      law_.dim() > 0 ? 0.5 / law_.weights()[0] : 1.0;
}

Inverter::~Inverter() = default;
Inverter::Inverter(Inverter&& o) noexcept
    : law_(std::move(o.law_)), tol_(o.tol_), impl_(std::move(o.impl_)) {
  if (impl_) impl_->law = &law_;
}
Inverter& Inverter::operator=(Inverter&& o) noexcept {
  law_ = std::move(o.law_);
  tol_ = o.tol_;
  impl_ = std::move(o.impl_);
  if (impl_) impl_->law = &law_;
  return *this;
}

Inverter::Eval Inverter::cdf_eval(double x) const {
  if (law_.dim() == 0) {
    // Point mass at the offset.
    return {x >= law_.offset() ? 1.0 : 0.0, 0.0};
  }
  return impl_->invert(x, /*for_density=*/false);
}

Inverter::Eval Inverter::density_eval(double x) const {
  if (law_.dim() < 2) {
    throw DomainError(
        "density needs at least two positive weights (the inversion "
        "integral diverges otherwise)");
  }
  return impl_->invert(x, /*for_density=*/true);
}

double Inverter::cdf(double x) const {
  const Eval e = cdf_eval(x);
  if (e.err_est > tol_) {
    throw NumericalError("cdf: requested accuracy not reached", e.err_est);
  }
  return e.value;
}

double Inverter::density(double x) const {
  const Eval e = density_eval(x);
  if (e.err_est > tol_) {
    throw NumericalError("density: requested accuracy not reached",
                         e.err_est);
  }
  return std::max(0.0, e.value);
}

double Inverter::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0, 1)");
  }
  if (law_.dim() == 0) return law_.offset();
  const double c0 = law_.offset();
  double lo = c0;
  double hi = c0 + impl_->mean0 + 8.0 * impl_->sd;
  int guard = 0;
  while (cdf(hi) < p) {
    hi = c0 + 2.0 * (hi - c0);
    if (++guard > 200) {
      throw NumericalError("quantile: bracketing failed", kInf);
    }
  }
  // Bisection on F(x) - p; F is monotone and cheap enough here.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = cdf(mid);
    if (std::abs(f - p) <= 0.5 * tol_) return mid;
    if (f < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * (1.0 + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double cdf(const QuadFormLaw& law, double x, const InversionConfig& cfg) {
  return Inverter(law, cfg).cdf(x);
}

double density(const QuadFormLaw& law, double x, const InversionConfig& cfg) {
  return Inverter(law, cfg).density(x);
}

double quantile(const QuadFormLaw& law, double p, const InversionConfig& cfg) {
  return Inverter(law, cfg).quantile(p);
}

std::vector<double> sample(const QuadFormLaw& law, std::size_t n,
                           std::uint64_t seed) {
  if (n == 0) return {};
  std::vector<double> out(n);
  const std::size_t p = law.dim();
  if (p == 0) {
    std::fill(out.begin(), out.end(), law.offset());
    return out;
  }
  Rng rng(seed);
  constexpr std::size_t kBatch = 8192;
  std::vector<double> z(p * kBatch);
  std::vector<double> y(kBatch);
  std::size_t done = 0;
  while (done < n) {
    const std::size_t m = std::min(kBatch, n - done);
    // Coordinate-major fill; the RNG stream does not depend on the kernel.
    for (std::size_t j = 0; j < p; ++j) {
      rng.fill_normal(std::span<double>(z.data() + j * m, m));
    }
    kern::quadform_accum(law.weights().values(), law.noncentrality(),
                         law.offset(), z.data(), m, y.data());
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m),
              out.begin() + static_cast<std::ptrdiff_t>(done));
    done += m;
  }
  return out;
}

double TruncationTail::operator()(double eps) const {
  if (tail_lambda_sum <= 0.0) return eps > 0.0 ? 0.0 : 1.0;
  return std::min(1.0, 2.0 * std::exp(-eps * eps / (2.0 * tail_lambda_sum)));
}

std::pair<QuadFormLaw, TruncationTail> truncate(const QuadFormLaw& law,
                                                std::size_t m) {
  if (m == 0) throw DomainError("truncate: m must be >= 1");
  if (m >= law.dim()) return {law, TruncationTail{0.0, 0.0}};
  TruncationTail tail;
  for (std::size_t j = m; j < law.dim(); ++j) {
    tail.tail_lambda_sum += law.weights()[j];
    tail.discarded_shift_sq += law.weights()[j] * law.noncentrality_sq()[j];
  }
  std::vector<double> lam(law.weights().values().begin(),
                          law.weights().values().begin() +
                              static_cast<std::ptrdiff_t>(m));
  std::vector<double> delta(law.noncentrality().begin(),
                            law.noncentrality().begin() +
                                static_cast<std::ptrdiff_t>(m));
  return {QuadFormLaw(Spectrum(std::move(lam)), std::move(delta),
                      law.offset()),
          tail};
}

}  // namespace ballprob
