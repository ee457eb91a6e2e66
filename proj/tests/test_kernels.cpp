#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ballprob/kernels.hpp"
#include "ballprob/quadform.hpp"
#include "ballprob/rng.hpp"
#include "ballprob/spectrum.hpp"

using namespace ballprob;

namespace {

struct RandomLaw {
  std::vector<double> lambda;
  std::vector<double> delta;
  std::vector<double> delta_sq;
};

RandomLaw random_law(Rng& rng, std::size_t p) {
  RandomLaw law;
  for (std::size_t j = 0; j < p; ++j) {
    law.lambda.push_back(rng.uniform(0.05, 3.0));
    law.delta.push_back(rng.normal());
    law.delta_sq.push_back(law.delta.back() * law.delta.back());
  }
  return law;
}

}  // namespace

TEST_CASE("dispatched cf kernel agrees with the scalar reference") {
  MESSAGE("active kernel: ", kern::active_kernel_name());
  Rng rng(314159);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t p = 1 + rng.below(40);
    const RandomLaw law = random_law(rng, p);
    std::vector<double> t(37);
    for (double& v : t) v = rng.uniform(-80.0, 80.0);

    std::vector<kern::CfTerms> ref(t.size()), got(t.size());
    kern::cf_factors_scalar(law.lambda, law.delta_sq, true, t, ref.data());
    kern::cf_factors(law.lambda, law.delta_sq, true, t, got.data());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double scale =
          std::abs(ref[i].prod_re) + std::abs(ref[i].prod_im) + 1e-300;
      CHECK(std::abs(got[i].prod_re - ref[i].prod_re) <= 1e-12 * scale);
      CHECK(std::abs(got[i].prod_im - ref[i].prod_im) <= 1e-12 * scale);
      CHECK(got[i].shift_re ==
            doctest::Approx(ref[i].shift_re).epsilon(1e-12));
      CHECK(got[i].shift_im ==
            doctest::Approx(ref[i].shift_im).epsilon(1e-12));
    }
  }
}

#if defined(BALLPROB_HAVE_AVX2_TU)
TEST_CASE("avx2 cf kernel agrees with the scalar reference") {
  if (kern::active_kernel_name() != "avx2") {
    MESSAGE("avx2 not available on this machine; skipping");
    return;
  }
  Rng rng(2718);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t p = 1 + rng.below(12);
    const RandomLaw law = random_law(rng, p);
    std::vector<double> t(29);
    for (double& v : t) v = rng.uniform(0.0, 200.0);
    std::vector<kern::CfTerms> ref(t.size()), got(t.size());
    kern::cf_factors_scalar(law.lambda, law.delta_sq, true, t, ref.data());
    kern::cf_factors_avx2(law.lambda, law.delta_sq, true, t, got.data());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double scale =
          std::abs(ref[i].prod_re) + std::abs(ref[i].prod_im) + 1e-300;
      CHECK(std::abs(got[i].prod_re - ref[i].prod_re) <= 1e-12 * scale);
      CHECK(std::abs(got[i].prod_im - ref[i].prod_im) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("avx2 accumulation kernel agrees with the scalar reference") {
  if (kern::active_kernel_name() != "avx2") return;
  Rng rng(55);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t p = 1 + rng.below(8);
    const std::size_t n = 1 + rng.below(1000);
    const RandomLaw law = random_law(rng, p);
    std::vector<double> z(p * n);
    for (double& v : z) v = rng.normal();
    std::vector<double> ya(n), yb(n);
    kern::quadform_accum_scalar(law.lambda, law.delta, 0.7, z.data(), n,
                                ya.data());
    kern::quadform_accum_avx2(law.lambda, law.delta, 0.7, z.data(), n,
                              yb.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-13));
    }
  }
}
#endif

TEST_CASE("cf kernel matches a direct complex-arithmetic evaluation") {
  // Independent recomputation of the per-coordinate factors with
  // std::complex, including the zero-shift fast path.
  Rng rng(99);
  const RandomLaw law = random_law(rng, 6);
  for (double t : {0.0, 0.37, -2.2, 11.0}) {
    kern::CfTerms got;
    const double tv[1] = {t};
    kern::cf_factors(law.lambda, law.delta_sq, true,
                     std::span<const double>(tv, 1), &got);
    std::complex<double> prod(1.0, 0.0);
    std::complex<double> shift(0.0, 0.0);
    for (std::size_t j = 0; j < law.lambda.size(); ++j) {
      const std::complex<double> z(1.0, -2.0 * t * law.lambda[j]);
      prod /= std::sqrt(z);
      shift += std::complex<double>(0.0, t * law.lambda[j] *
                                             law.delta_sq[j]) / z;
    }
    CHECK(got.prod_re == doctest::Approx(prod.real()).epsilon(1e-12));
    CHECK(got.prod_im == doctest::Approx(prod.imag()).epsilon(1e-12));
    CHECK(got.shift_re == doctest::Approx(shift.real()).epsilon(1e-12));
    CHECK(got.shift_im == doctest::Approx(shift.imag()).epsilon(1e-12));
  }
}

TEST_CASE("accumulation kernel computes the quadratic form") {
  Rng rng(17);
  const RandomLaw law = random_law(rng, 5);
  const std::size_t n = 101;
  std::vector<double> z(5 * n);
  for (double& v : z) v = rng.normal();
  std::vector<double> y(n);
  kern::quadform_accum(law.lambda, law.delta, 2.5, z.data(), n, y.data());
  for (std::size_t i = 0; i < n; i += 17) {
    double want = 2.5;
    for (std::size_t j = 0; j < 5; ++j) {
      const double d = z[j * n + i] - law.delta[j];
      want += law.lambda[j] * d * d;
    }
    CHECK(y[i] == doctest::Approx(want).epsilon(1e-13));
  }
}
