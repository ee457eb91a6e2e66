#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ballprob/analysis.hpp"
#include "ballprob/calibration.hpp"
#include "ballprob/errors.hpp"
#include "ballprob/io.hpp"
#include "ballprob/rng.hpp"

using namespace ballprob;

TEST_CASE("H(a): exact values and recurrence") {
  // H(1) = 1 via the antiderivative t/sqrt(1+t^2)
  CHECK(h_integral(1.0) == doctest::Approx(1.0).epsilon(1e-10));
  // H(2) = (1/(3/2)) H(1) = 2/3, H(3) = (2/(5/2)) H(2) = 8/15
  CHECK(h_integral(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(h_integral(3.0) == doctest::Approx(8.0 / 15.0).epsilon(1e-10));

  for (double a : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double resid =
        h_integral(a + 1.0) - a / (a + 0.5) * h_integral(a);
    CHECK(std::abs(resid) <= 1e-8);
  }

  // monotone decrease and the small-a envelope a H(a) <= 1.5 H(1)
  double prev = h_integral(0.01);
  for (int i = 1; i <= 100; ++i) {
    const double a = 0.01 * i;
    const double h = h_integral(a);
    CHECK(h <= prev + 1e-12);
    CHECK(a * h <= 1.5 + 1e-9);
    prev = h;
  }

  CHECK_THROWS_AS(h_integral(0.0), DomainError);
}

TEST_CASE("Hoelder product integral and the exponent construction") {
  // equal weights, p = 3: tau = (p-2)/4 = 1/4 and q_j = 3
  const HolderResult h =
      holder_product_integral(make_spectrum(std::vector<double>{1, 1, 1}));
  CHECK(h.tau == doctest::Approx(0.25).epsilon(1e-10));
  REQUIRE(h.q.size() == 3);
  for (double q : h.q) CHECK(q == doctest::Approx(3.0).epsilon(1e-9));
  // closed form for the equal-weight integral: H(p/4 - 1/2)
  CHECK(h.integral == doctest::Approx(h_integral(0.25)).epsilon(1e-8));

  // q_j >= 3 and sum 1/q_j = 1 in general
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> lam;
    for (int j = 0; j < 6; ++j) lam.push_back(rng.uniform(0.3, 1.0));
    const Spectrum s = make_spectrum(lam);
    if (regime(s) != Regime::HighDim) continue;
    const HolderResult r = holder_product_integral(s);
    double inv_sum = 0.0;
    for (double q : r.q) {
      CHECK(q >= 3.0 - 1e-9);
      inv_sum += 1.0 / q;
    }
    CHECK(inv_sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.tau <= 0.25 * tail_norms(s).lambda1_sq + 1e-12);
  }

  CHECK_THROWS_AS(
      holder_product_integral(make_spectrum(std::vector<double>{4, 1})),
      ConditionError);
}

TEST_CASE("Hoelder lemma: integral * Lambda_1 uniformly bounded") {
  // equal weights across p: integral * sqrt(p) must stay below the frozen
  // constant (the p = 3 boundary case is the worst)
  for (int p = 3; p <= 50; ++p) {
    const Spectrum s =
        make_spectrum(std::vector<double>(static_cast<std::size_t>(p), 1.0));
    const HolderResult h = holder_product_integral(s);
    CHECK(h.integral * std::sqrt(static_cast<double>(p)) <=
          calib::kHolderConstant);
  }
}

TEST_CASE("r3 lower bound construction") {
  const ExperimentRecord r = r3_lower_bound(1, 1, 1, 0.1);
  CHECK(r.reference ==
        doctest::Approx(0.1 / 16.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(r.reference == doctest::Approx(8.459e-4).epsilon(1e-3));
  CHECK(r.observed >= r.reference);
  CHECK(r.pass);

  // ratio stays >= 1 as eps shrinks
  for (double eps : {0.01, 0.05, 0.2}) {
    const ExperimentRecord rr = r3_lower_bound(1, 1, 1, eps);
    CHECK(rr.pass);
  }
  CHECK(r3_lower_bound(2, 1, 0.5, 0.2).pass);

  CHECK_THROWS_AS(r3_lower_bound(1, 1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(r3_lower_bound(1, 1, 0, 0.1), DomainError);
}

TEST_CASE("one-dimensional sandwich") {
  const ExperimentRecord r = one_dim_bounds(1.0, 4.0);
  double upper = 0.0;
  for (const auto& [k, v] : r.extras) {
    if (k == "upper") upper = v;
  }
  CHECK(r.pass);
  CHECK(r.reference <= r.observed);
  CHECK(r.observed <= upper);

  // order of the arguments must not matter
  const ExperimentRecord swapped = one_dim_bounds(4.0, 1.0);
  CHECK(swapped.observed == doctest::Approx(r.observed).epsilon(1e-12));

  // near-equal variances
  const ExperimentRecord close = one_dim_bounds(1.0, 1.01);
  CHECK(close.pass);
  CHECK(close.observed < 0.01);

  CHECK_THROWS_AS(one_dim_bounds(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(one_dim_bounds(0.0, 1.0), DomainError);
}

TEST_CASE("degenerate band lower bound") {
  const ExperimentRecord r = degenerate_band(0.25);
  CHECK(r.observed == doctest::Approx(0.38292).epsilon(1e-4));
  CHECK(r.reference == doctest::Approx(0.14105).epsilon(1e-4));
  CHECK(r.pass);

  const ExperimentRecord at_log2 = degenerate_band(std::log(2.0));
  CHECK(at_log2.observed == doctest::Approx(0.5949040).epsilon(1e-5));
  CHECK(at_log2.reference == doctest::Approx(0.2348593).epsilon(1e-5));
  CHECK(at_log2.pass);

  // eps -> 0: observed/sqrt(eps) -> sqrt(2/pi) > 1/(2 sqrt(pi))
  const double eps = 1e-8;
  const ExperimentRecord tiny = degenerate_band(eps);
  CHECK(tiny.observed / std::sqrt(eps) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-4));

  CHECK_THROWS_AS(degenerate_band(0.0), DomainError);
  CHECK_THROWS_AS(degenerate_band(0.7), DomainError);  // above log 2
}

TEST_CASE("corpus generation is deterministic and regime-spanning") {
  const auto a = make_corpus(123, 30);
  const auto b = make_corpus(123, 30);
  REQUIRE(a.size() == b.size());
  int seen[3] = {0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sx.values().size() == b[i].sx.values().size());
    for (std::size_t j = 0; j < a[i].sx.size(); ++j) {
      CHECK(a[i].sx[j] == b[i].sx[j]);
    }
    CHECK(a[i].shift == b[i].shift);
    seen[static_cast<int>(a[i].regime_x)]++;
    CHECK(a[i].sx.size() >= 2);
    CHECK(a[i].sx.size() <= 8);
    double norm_sq = 0.0;
    for (double v : a[i].shift) norm_sq += v * v;
    CHECK(norm_sq <= 2.0 * a[i].sx.trace() + 1e-9);
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("ratio sweep: determinism and calibrated ceiling") {
  InversionConfig cfg;
  cfg.abs_tol = 1e-5;
  const auto rows = ratio_sweep(20240601, 45, cfg);
  const auto rows2 = ratio_sweep(20240601, 45, cfg);
  CHECK(sweep_csv(rows) == sweep_csv(rows2));  // byte-identical

  for (const auto& row : rows) {
    if (std::isfinite(row.result.bound.value) && row.result.bound.value > 0) {
      CHECK(row.result.ratio <= calib::kEmpiricalConstant);
      CHECK(row.result.ratio ==
            doctest::Approx(row.result.distance / row.result.bound.value));
    }
  }
}
