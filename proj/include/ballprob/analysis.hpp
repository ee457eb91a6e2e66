#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ballprob/metrics.hpp"
#include "ballprob/quadform.hpp"
#include "ballprob/spectrum.hpp"

namespace ballprob {

/// One executable tightness/lemma experiment: the observed quantity, the
/// reference value it must respect (a lower or upper envelope depending on
/// the experiment), and the verdict.
struct ExperimentRecord {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double observed = 0.0;
  double reference = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extras;
};

/// H(a) = int_0^inf (1 + t^2)^{-(a + 1/2)} dt, a > 0. Decreasing in a,
/// H(1) = 1, and H(a+1) = a/(a + 1/2) H(a).
double h_integral(double a);

/// int_0^inf prod_j (1 + lambda_j^2 t^2)^{-1/4} dt under the hypothesis
/// 3 lambda_1^2 <= Lambda_1^2, together with the exponent construction:
/// tau solves sum_j lambda_j^2/(4 tau + 2 lambda_j^2) = 1 (bisection on
/// (0, Lambda_1^2/4]) and q_j = 4 tau / lambda_j^2 + 2, all >= 3.
struct HolderResult {
  double integral = 0.0;
  double tau = 0.0;
  std::vector<double> q;
};
HolderResult holder_product_integral(const Spectrum& s);

/// R^3 tightness construction: Sigma_x = diag(l1, l2, l3),
/// Sigma_y = diag(l1, l2, l3 (1+eps)), evaluated at the witness point
/// x = 2 l3 in the squared-radius scale. The observed CDF gap must beat
///   (||Delta||_1 / (16 sqrt(l1 l2))) * exp(-l3/l1 - l3/l2).
ExperimentRecord r3_lower_bound(double l1, double l2, double l3, double eps,
                                const InversionConfig& cfg = {});

/// One-dimensional two-sided envelopes: the exact sup distance between
/// |N(0, lx)| and |N(0, ly)| must sit between the evaluated lower and upper
/// chains (explicit constants, no hidden factors). The record's reference
/// is the lower envelope; the upper envelope rides in extras.
ExperimentRecord one_dim_bounds(double lam_x, double lam_y,
                                const InversionConfig& cfg = {});

/// Degenerate two-dimensional spectrum (1, 0): the eps-band of the squared
/// norm is at least sqrt(eps)/(2 sqrt(pi)) for eps <= log 2; the observed
/// sup equals 2 Phi(sqrt(eps)) - 1 (attained at x = 0).
ExperimentRecord degenerate_band(double eps);

/// One random comparison instance of the validation corpus.
struct CorpusInstance {
  Spectrum sx;
  Spectrum sy;
  std::vector<double> shift;  // in the eigenbasis of sx
  Regime regime_x = Regime::HighDim;
  Regime regime_y = Regime::HighDim;
};

/// Deterministic regime-spanning corpus: HighDim draws i.i.d. uniform
/// spectra, Spike one large eigenvalue over a diffuse tail, TwoDim two
/// dominant ones; dims 2-8, shift norms ||a||^2 in [0, 2 tr].
std::vector<CorpusInstance> make_corpus(std::uint64_t seed, std::size_t n);

struct SweepRow {
  std::size_t instance_id = 0;
  Regime regime_x = Regime::HighDim;
  Regime regime_y = Regime::HighDim;
  ComparisonResult result;
};

/// compare() over the whole corpus (parallel across instances, deterministic
/// output per seed).
std::vector<SweepRow> ratio_sweep(std::uint64_t corpus_seed,
                                  std::size_t n_instances,
                                  const InversionConfig& cfg = {});

}  // namespace ballprob
