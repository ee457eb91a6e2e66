// ballprob command-line interface: Gaussian ball-probability laws, bounds,
// distances and validation experiments. JSON records go to stdout (or --out);
// sweeps emit CSV. Exit codes: 0 ok, 1 usage, 2 domain/condition error,
// 3 numerical error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ballprob/analysis.hpp"
#include "ballprob/bayes.hpp"
#include "ballprob/bounds.hpp"
#include "ballprob/calibration.hpp"
#include "ballprob/errors.hpp"
#include "ballprob/io.hpp"
#include "ballprob/metrics.hpp"
#include "ballprob/quadform.hpp"
#include "ballprob/spectrum.hpp"

#include <json.hpp>

namespace {

using namespace ballprob;

struct Output {
  std::optional<std::string> path;

  void emit(const std::string& text) const {
    if (path) {
      std::ofstream f(*path);
      if (!f) throw DomainError("cannot open output file: " + *path);
      f << text;
      if (!text.empty() && text.back() != '\n') f << "\n";
    } else {
      std::cout << text;
      if (text.empty() || text.back() != '\n') std::cout << "\n";
    }
  }
};

Instance instance_from(const std::string& inline_spectrum,
                       const std::string& inline_shift,
                       const std::string& file) {
  if (!file.empty()) return load_instance(file);
  if (inline_spectrum.empty()) {
    throw DomainError("need --spectrum or an instance file");
  }
  std::string json = "{\"spectrum\":" + inline_spectrum;
  if (!inline_shift.empty()) json += ",\"shift\":" + inline_shift;
  json += "}";
  return parse_instance(json);
}

InversionConfig cfg_of(double tol, double max_freq) {
  InversionConfig cfg;
  cfg.abs_tol = tol;
  cfg.max_freq = max_freq;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{
      "ballprob: laws of squared Gaussian distances ||xi - a||^2 in Hilbert "
      "space, dimension-free comparison and anti-concentration bounds, and "
      "their numerical validation"};
  app.require_subcommand(1);

  std::string spectrum_json, shift_json, law_file;
  std::string spectrum_y_json, law_file_y;
  std::string out_path;
  double tol = 0.0;
  double max_freq = 1e12;
  std::uint64_t seed = calib::kCorpusSeed;

  const auto add_common = [&](CLI::App* cmd, bool with_y = false) {
    cmd->add_option("--spectrum", spectrum_json,
                    "inline JSON eigenvalue array, e.g. '[1,1,1]'");
    cmd->add_option("--shift", shift_json, "inline JSON shift array");
    cmd->add_option("--law,--x", law_file,
                    "instance file {\"spectrum\":[..],\"shift\":[..]} or "
                    "{\"matrix\":[[..]],\"shift\":[..]}");
    if (with_y) {
      cmd->add_option("--spectrum-y", spectrum_y_json,
                      "inline JSON eigenvalue array of the second element");
      cmd->add_option("--y", law_file_y, "second instance file");
    }
    cmd->add_option("--out", out_path, "write results to this path");
    cmd->add_option("--tol", tol,
                    "inversion absolute tolerance (0 = per-law default)");
    cmd->add_option("--max-freq", max_freq,
                    "cap on the inversion truncation frequency");
  };

  // kappa ---------------------------------------------------------------
  auto* c_kappa = app.add_subcommand(
      "kappa",
      "regime and kappa of a spectrum: 1/Lambda_1 (no dominant eigenvalue), "
      "(lambda_1 Lambda_2)^{-1/2} (spike), (lambda_1 lambda_2)^{-1/2} (two "
      "dominant)");
  add_common(c_kappa);

  // cdf / density / quantile ---------------------------------------------
  double at_x = 0.0, at_p = 0.5;
  std::string grid_spec;
  auto* c_cdf = app.add_subcommand(
      "cdf", "P(||xi - a||^2 <= x) by characteristic-function inversion");
  add_common(c_cdf);
  c_cdf->add_option("--at", at_x, "evaluation point x");
  c_cdf->add_option("--grid", grid_spec,
                    "lo:hi:n evaluation grid; one JSON record per line");

  auto* c_density = app.add_subcommand(
      "density", "density of ||xi - a||^2 by inversion (needs >= 2 positive "
                 "eigenvalues)");
  add_common(c_density);
  c_density->add_option("--at", at_x, "evaluation point x");
  c_density->add_option("--grid", grid_spec,
                        "lo:hi:n evaluation grid; one JSON record per line");

  auto* c_quantile =
      app.add_subcommand("quantile", "inverse CDF of ||xi - a||^2");
  add_common(c_quantile);
  c_quantile->add_option("--p", at_p, "probability level in (0,1)")->required();

  // bound -----------------------------------------------------------------
  std::string formula = "comparison";
  double eps = 0.1;
  std::optional<double> lambda_free;
  double shift_norm_sq_opt = -1.0;
  auto* c_bound = app.add_subcommand(
      "bound",
      "evaluate a comparison / anti-concentration / density bound "
      "(constant-free right-hand side with its ingredient breakdown)");
  add_common(c_bound, /*with_y=*/true);
  c_bound
      ->add_option("--formula", formula,
                   "comparison | comparison-same-shift | lambda12 | frobenius "
                   "| operator | anticoncentration | density-uniform | "
                   "density-nonuniform | pinsker")
      ->required();
  c_bound->add_option("--eps", eps, "band width for anticoncentration");
  c_bound->add_option("--at", at_x, "evaluation point for density-nonuniform");
  double lambda_free_in = 0.0;
  auto* lf_opt = c_bound->add_option(
      "--lambda-free", lambda_free_in,
      "free parameter lambda > lambda_1 of the pointwise density bound "
      "(default: trace)");
  c_bound->add_option("--shift-norm-sq", shift_norm_sq_opt,
                      "override ||a||^2 (default: from the shift)");

  // compare / band ---------------------------------------------------------
  auto* c_compare = app.add_subcommand(
      "compare",
      "Kolmogorov distance between ||xi - a||^2 and ||eta||^2 plus the "
      "comparison bound and their ratio");
  add_common(c_compare, /*with_y=*/true);

  bool band_sup = false;
  auto* c_band = app.add_subcommand(
      "band", "band probability P(x < ||xi - a||^2 < x + eps), or its sup "
              "over x with --sup");
  add_common(c_band);
  c_band->add_option("--eps", eps, "band width")->required();
  c_band->add_option("--at", at_x, "left edge x of the band");
  c_band->add_flag("--sup", band_sup, "maximize over x");

  // experiment ---------------------------------------------------------------
  std::string exp_name;
  double e_l1 = 1.0, e_l2 = 1.0, e_l3 = 1.0, e_eps = 0.1;
  double e_lx = 1.0, e_ly = 4.0, e_a = 1.0;
  auto* c_exp = app.add_subcommand(
      "experiment",
      "tightness constructions and integral lemmas: r3-lower | one-dim | "
      "degenerate-band | h-integral | holder");
  c_exp->add_option("name", exp_name, "experiment name")->required();
  c_exp->add_option("--l1", e_l1, "first eigenvalue (r3-lower)");
  c_exp->add_option("--l2", e_l2, "second eigenvalue (r3-lower)");
  c_exp->add_option("--l3", e_l3, "third eigenvalue (r3-lower)");
  c_exp->add_option("--eps", e_eps, "perturbation / band width");
  c_exp->add_option("--lx", e_lx, "variance of the first 1-d law");
  c_exp->add_option("--ly", e_ly, "variance of the second 1-d law");
  c_exp->add_option("--a", e_a, "exponent of the tail-decay integral H(a)");
  c_exp->add_option("--spectrum", spectrum_json, "spectrum for holder");
  c_exp->add_option("--out", out_path, "write results to this path");
  c_exp->add_option("--tol", tol, "inversion absolute tolerance");

  // sweep ----------------------------------------------------------------
  std::size_t n_instances = 1000;
  bool band_sweep = false;
  auto* c_sweep = app.add_subcommand(
      "sweep",
      "seeded random-corpus validation sweep; CSV with distance, bound and "
      "ratio per instance (--band sweeps sup-band/(kappa*eps) instead)");
  c_sweep->add_option("--n", n_instances, "number of corpus instances");
  c_sweep->add_option("--seed", seed, "corpus seed");
  c_sweep->add_flag("--band", band_sweep, "anti-concentration sweep");
  c_sweep->add_option("--eps", eps, "band width for --band");
  c_sweep->add_option("--out", out_path, "write CSV to this path");
  c_sweep->add_option("--tol", tol, "inversion absolute tolerance");

  // bayes -----------------------------------------------------------------
  std::string scenario_path;
  auto* c_bayes = app.add_subcommand(
      "bayes",
      "linear-Gaussian credible-set demos: prior-impact and frequentist "
      "coverage deviations against their constant-free envelopes");
  c_bayes->add_option("--scenario", scenario_path,
                      "scenario JSON {\"n\":..,\"p\":..,\"sigma2\":..,"
                      "\"design_seed\":..,\"G_spec\":..,\"G1_spec\":..,"
                      "\"alpha\":..}")
      ->required();
  c_bayes->add_option("--out", out_path, "write results to this path");
  c_bayes->add_option("--tol", tol, "inversion absolute tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  }

  Output out{out_path.empty() ? std::nullopt
                              : std::optional<std::string>(out_path)};
  const InversionConfig cfg = cfg_of(tol, max_freq);

  if (*c_kappa) {
    const Instance inst = instance_from(spectrum_json, shift_json, law_file);
    JsonWriter w;
    const TailNorms tn = tail_norms(inst.spectrum);
    w.begin()
        .field("kappa", kappa(inst.spectrum))
        .field("regime", std::string(regime_name(regime(inst.spectrum))))
        .field("lambda1", tn.lambda1())
        .field("lambda2", tn.lambda2())
        .field("trace", inst.spectrum.trace())
        .end();
    out.emit(w.str());
    return 0;
  }

  if (*c_cdf || *c_density || *c_quantile) {
    const Instance inst = instance_from(spectrum_json, shift_json, law_file);
    const QuadFormLaw law = from_gaussian(inst.spectrum, inst.shift);
    const Inverter inv(law, cfg);
    if (!grid_spec.empty() && !*c_quantile) {
      double lo = 0.0, hi = 0.0;
      int n = 0;
      if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 ||
          n < 2 || hi <= lo) {
        throw DomainError("--grid expects lo:hi:n with n >= 2 and hi > lo");
      }
      std::string lines;
      for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const auto e = *c_cdf ? inv.cdf_eval(x) : inv.density_eval(x);
        JsonWriter w;
        w.begin()
            .field("x", x)
            .field(*c_cdf ? "cdf" : "density",
                   *c_cdf ? e.value : std::max(0.0, e.value))
            .field("err_est", e.err_est)
            .end();
        lines += w.str();
        lines += "\n";
      }
      out.emit(lines);
      return 0;
    }
    JsonWriter w;
    w.begin();
    if (*c_cdf) {
      const auto e = inv.cdf_eval(at_x);
      if (e.err_est > inv.abs_tol()) {
        throw NumericalError("cdf: requested accuracy not reached", e.err_est);
      }
      w.field("x", at_x).field("cdf", e.value).field("err_est", e.err_est);
    } else if (*c_density) {
      const auto e = inv.density_eval(at_x);
      if (e.err_est > inv.abs_tol()) {
        throw NumericalError("density: requested accuracy not reached",
                             e.err_est);
      }
      w.field("x", at_x)
          .field("density", std::max(0.0, e.value))
          .field("err_est", e.err_est);
    } else {
      const double q = inv.quantile(at_p);
      w.field("p", at_p).field("quantile", q);
    }
    w.end();
    out.emit(w.str());
    return 0;
  }

  if (*c_bound) {
    const Instance ix = instance_from(spectrum_json, shift_json, law_file);
    double q = shift_norm_sq_opt;
    if (q < 0.0) {
      q = 0.0;
      for (double a : ix.shift) q += a * a;
    }
    if (lf_opt->count() > 0) lambda_free = lambda_free_in;

    BoundReport rep;
    if (formula == "anticoncentration") {
      rep = anticoncentration_bound(ix.spectrum, eps);
    } else if (formula == "density-uniform") {
      rep = density_uniform_bound(ix.spectrum);
    } else if (formula == "density-nonuniform") {
      const QuadFormLaw law = from_gaussian(ix.spectrum, ix.shift);
      rep.formula_id = "density_nonuniform";
      rep.value = density_nonuniform_bound(law, at_x, lambda_free);
      rep.ingredients = {{"x", at_x},
                         {"lambda", lambda_free.value_or(
                                        law.weights().trace())}};
    } else {
      const Instance iy = instance_from(spectrum_y_json, "", law_file_y);
      if (formula == "comparison") {
        rep = comparison_bound(ix.spectrum, iy.spectrum, q);
      } else if (formula == "comparison-same-shift") {
        rep = comparison_bound(ix.spectrum, iy.spectrum, q, true);
      } else if (formula == "lambda12") {
        rep = comparison_bound_lambda12(ix.spectrum, iy.spectrum, q);
      } else if (formula == "frobenius") {
        rep = comparison_bound_frobenius(ix.spectrum, iy.spectrum, q);
      } else if (formula == "operator") {
        if (!ix.matrix || !iy.matrix) {
          throw DomainError(
              "bound --formula operator needs matrix instances");
        }
        rep = comparison_bound_operator(*ix.matrix, *iy.matrix, q);
      } else if (formula == "pinsker") {
        if (!ix.matrix || !iy.matrix || !ix.raw_shift) {
          throw DomainError("bound --formula pinsker needs matrix instances");
        }
        rep.formula_id = "pinsker";
        rep.value = pinsker_baseline(*ix.matrix, *iy.matrix, *ix.raw_shift);
      } else {
        throw DomainError("unknown bound formula: " + formula);
      }
    }
    out.emit(to_json(rep));
    return 0;
  }

  if (*c_compare) {
    const Instance ix = instance_from(spectrum_json, shift_json, law_file);
    const Instance iy = instance_from(spectrum_y_json, "", law_file_y);
    const ComparisonResult r = compare(ix.spectrum, iy.spectrum, ix.shift, cfg);
    out.emit(to_json(r));
    return 0;
  }

  if (*c_band) {
    const Instance inst = instance_from(spectrum_json, shift_json, law_file);
    const QuadFormLaw law = from_gaussian(inst.spectrum, inst.shift);
    JsonWriter w;
    w.begin();
    if (band_sup) {
      const auto [v, x] = sup_band(law, eps, cfg);
      w.field("sup_band", v).field("argmax_x", x).field("eps", eps);
    } else {
      w.field("band", band_probability(law, at_x, eps, cfg))
          .field("x", at_x)
          .field("eps", eps);
    }
    w.end();
    out.emit(w.str());
    return 0;
  }

  if (*c_exp) {
    if (exp_name == "r3-lower") {
      out.emit(to_json(r3_lower_bound(e_l1, e_l2, e_l3, e_eps, cfg)));
    } else if (exp_name == "one-dim") {
      out.emit(to_json(one_dim_bounds(e_lx, e_ly, cfg)));
    } else if (exp_name == "degenerate-band") {
      out.emit(to_json(degenerate_band(e_eps)));
    } else if (exp_name == "h-integral") {
      JsonWriter w;
      w.begin().field("a", e_a).field("H", h_integral(e_a)).end();
      out.emit(w.str());
    } else if (exp_name == "holder") {
      const Instance inst = instance_from(spectrum_json, "", "");
      const HolderResult h = holder_product_integral(inst.spectrum);
      JsonWriter w;
      w.begin()
          .field("integral", h.integral)
          .field("tau", h.tau)
          .field("integral_times_lambda1",
                 h.integral * tail_norms(inst.spectrum).lambda1())
          .end();
      out.emit(w.str());
    } else {
      throw DomainError("unknown experiment: " + exp_name);
    }
    return 0;
  }

  if (*c_sweep) {
    if (band_sweep) {
      const auto corpus = make_corpus(seed, n_instances);
      std::string csv = "instance_id,regime,kappa,eps,sup_band,ratio\n";
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const QuadFormLaw law = from_gaussian(corpus[i].sx, corpus[i].shift);
        const double k = kappa(corpus[i].sx);
        const auto [v, x] = sup_band(law, eps, cfg);
        const double ratio = std::isfinite(k) ? v / (k * eps) : 0.0;
        csv += std::to_string(i);
        csv += ",";
        csv += regime_name(corpus[i].regime_x);
        csv += "," + fmt17(k) + "," + fmt17(eps) + "," + fmt17(v) + "," +
               fmt17(ratio) + "\n";
      }
      out.emit(csv);
    } else {
      out.emit(sweep_csv(ratio_sweep(seed, n_instances, cfg)));
    }
    return 0;
  }

  if (*c_bayes) {
    std::ifstream f(scenario_path);
    if (!f) throw DomainError("cannot open scenario file: " + scenario_path);
    nlohmann::json sc;
    try {
      sc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw DomainError(std::string("scenario: invalid JSON: ") + e.what());
    }
    const auto geti = [&](const char* k, Eigen::Index dflt) {
      return sc.contains(k) ? sc.at(k).get<Eigen::Index>() : dflt;
    };
    const Eigen::Index n = geti("n", 20);
    const Eigen::Index p = geti("p", 5);
    const double sigma2 = sc.contains("sigma2") ? sc.at("sigma2").get<double>() : 1.0;
    const std::uint64_t design_seed =
        sc.contains("design_seed") ? sc.at("design_seed").get<std::uint64_t>()
                                   : seed;
    const double alpha = sc.contains("alpha") ? sc.at("alpha").get<double>() : 0.05;
    const auto parse_g = [&](const char* key) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
      if (!sc.contains(key)) return g;
      const auto& spec = sc.at(key);
      if (spec.is_number()) {
        g = spec.get<double>() * Eigen::MatrixXd::Identity(p, p);
      } else if (spec.is_array()) {
        if (static_cast<Eigen::Index>(spec.size()) != p) {
          throw DomainError(std::string(key) + ": need p diagonal entries");
        }
        for (Eigen::Index i = 0; i < p; ++i) {
          g(i, i) = spec[static_cast<std::size_t>(i)].get<double>();
        }
      } else {
        throw DomainError(std::string(key) +
                          ": expected a number or an array (diagonal of G^2)");
      }
      return g;
    };
    const Eigen::MatrixXd g_sq = parse_g("G_spec");
    const Eigen::MatrixXd g1_sq = parse_g("G1_spec");
    const LinearGaussianModel model = synthesize_model(n, p, sigma2, design_seed);
    const Eigen::MatrixXd w_map = Eigen::MatrixXd::Identity(p, p);
    const Eigen::MatrixXd a_map = Eigen::MatrixXd::Identity(n, n);
    std::string lines = to_json(prior_impact(model, g_sq, g1_sq, w_map, alpha, cfg));
    lines += "\n";
    lines += to_json(np_bayes_coverage(model, g_sq, a_map, alpha, cfg));
    out.emit(lines);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NumericalError& e) {
    ballprob::JsonWriter w;
    w.begin()
        .field("error", std::string("numerical"))
        .field("message", std::string(e.what()))
        .field("achieved_error", e.achieved_error())
        .end();
    std::cerr << w.str() << "\n";
    return 3;
  } catch (const std::exception& e) {
    // DomainError / ConditionError and anything parse-shaped.
    ballprob::JsonWriter w;
    w.begin()
        .field("error", std::string("domain"))
        .field("message", std::string(e.what()))
        .end();
    std::cerr << w.str() << "\n";
    return 2;
  }
}
