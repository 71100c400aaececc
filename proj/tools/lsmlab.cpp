// Command-line surface for the log-supermodularity laboratory: inequality
// checkers, convolution experiments, transport and entropy-power runs, and
// the seeded property suites. Reports are JSON on stdout (or --out).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsmlab/convolve.hpp"
#include "lsmlab/entropy_epi.hpp"
#include "lsmlab/fourfn.hpp"
#include "lsmlab/io.hpp"
#include "lsmlab/lsm_check.hpp"
#include "lsmlab/suites.hpp"
#include "lsmlab/transport1d.hpp"
#include "lsmlab/version.hpp"

namespace {

using nlohmann::json;
using namespace lsmlab;

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(j, out_path);
}

json check_lsm_on(const LoadedFunction& f, const std::string& method, double tol) {
  json out;
  auto run = [&](const auto& fn) {
    if (method == "brute" || method == "both") out["brute"] = to_json(is_log_supermodular(fn, tol));
    if (method == "topkis" || method == "both")
      out["topkis"] = to_json(topkis_local_check(fn, tol));
    if (method == "both")
      out["criteria_agree"] = out["brute"]["passed"] == out["topkis"]["passed"];
  };
  std::visit(run, f);
  return out;
}

Density1D density_from_path(const std::string& path) { return load_density_1d(path); }

void write_curves_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  std::size_t rows = columns.empty() ? 0 : columns.front().size();
  out.precision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << (c ? "," : "") << columns[c][r];
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lsmlab: numerical laboratory for log-supermodularity, four-function "
               "inequalities, monotone transport, and entropy power"};
  app.set_version_flag("--version", lsmlab::kVersion);
  app.require_subcommand(1);

  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string emit_curves;
  app.add_option("--tol", tol, "tolerance (relative where applicable)")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--out", out_path, "write the JSON report to a file instead of stdout");
  app.add_option("--emit-curves", emit_curves, "write curve samples to a CSV file");

  // check-lsm
  auto* cmd_lsm = app.add_subcommand("check-lsm", "decide log-supermodularity of a file");
  std::string lsm_file, lsm_method = "brute";
  cmd_lsm->add_option("file", lsm_file, "grid/lattice JSON or 1D CSV")->required();
  cmd_lsm->add_option("--method", lsm_method, "brute|topkis|both")
      ->check(CLI::IsMember({"brute", "topkis", "both"}))
      ->capture_default_str();

  // convolve
  auto* cmd_conv = app.add_subcommand("convolve", "convolve two functions of the same kind");
  std::string conv_f, conv_g, conv_out;
  cmd_conv->add_option("f", conv_f)->required();
  cmd_conv->add_option("g", conv_g)->required();
  cmd_conv->add_option("-o,--output", conv_out, "output file")->required();

  // verify-preservation
  auto* cmd_pres = app.add_subcommand("verify-preservation",
                                      "check that f*g stays log-supermodular");
  std::string pres_f, pres_kernel = "gaussian";
  double pres_eps = 0.1;
  double pres_tol = 1e-7;
  cmd_pres->add_option("--f", pres_f, "LSM function file")->required();
  cmd_pres->add_option("--kernel", pres_kernel, "gaussian|binomial|<file>")->capture_default_str();
  cmd_pres->add_option("--eps", pres_eps, "grid spacing for the gaussian kernel")
      ->capture_default_str();
  cmd_pres->add_option("--tol", pres_tol, "relative tolerance")->capture_default_str();

  // counterexample-search
  auto* cmd_cex = app.add_subcommand("counterexample-search",
                                     "random search for LSM pairs whose convolution fails");
  std::uint64_t cex_trials = 20000;
  int cex_extent = 3;
  cmd_cex->add_option("--trials", cex_trials)->capture_default_str();
  cmd_cex->add_option("--extent", cex_extent, "support extent per axis")->capture_default_str();

  // fourfn
  auto* cmd_ff = app.add_subcommand("fourfn", "four-function hypothesis/conclusion checkers");
  std::string ff_variant, ff_spec;
  std::uint64_t ff_samples = 100000;
  cmd_ff->add_option("variant", ff_variant, "ad|cem|unified|general")
      ->check(CLI::IsMember({"ad", "cem", "unified", "general"}))
      ->required();
  cmd_ff->add_option("--spec", ff_spec, "instance JSON file")->required();
  cmd_ff->add_option("--samples", ff_samples)->capture_default_str();

  // transport
  auto* cmd_tr = app.add_subcommand("transport", "1D monotone transport toolbox");
  std::string tr_mode, tr_nu1, tr_nu2;
  double tr_alpha = 1.0, tr_s = 0.5, tr_r = 0.5, tr_t = 0.5;
  cmd_tr->add_option("mode", tr_mode, "map|pushforward|displacement|duality|audit")
      ->check(CLI::IsMember({"map", "pushforward", "displacement", "duality", "audit"}))
      ->required();
  cmd_tr->add_option("--nu1", tr_nu1)->required();
  cmd_tr->add_option("--nu2", tr_nu2);
  cmd_tr->add_option("--alpha", tr_alpha)->capture_default_str();
  cmd_tr->add_option("--s", tr_s)->capture_default_str();
  cmd_tr->add_option("--r", tr_r)->capture_default_str();
  cmd_tr->add_option("--t", tr_t)->capture_default_str();

  // epi-experiment
  auto* cmd_epi = app.add_subcommand("epi-experiment", "conditional entropy power experiment");
  std::string epi_p = "gaussian:0.5";
  double epi_lambda = 0.5, epi_smax = 8.0;
  int epi_nodes = 64;
  std::string epi_sweep;
  cmd_epi->add_option("--p", epi_p, "density file or gaussian:<rho>")->capture_default_str();
  cmd_epi->add_option("--lambda", epi_lambda)->capture_default_str();
  cmd_epi->add_option("--smax", epi_smax)->capture_default_str();
  cmd_epi->add_option("--nodes", epi_nodes)->capture_default_str();
  cmd_epi->add_option("--sweep-lambda", epi_sweep, "lo:hi:count sweep of lambda");

  // run-suite
  auto* cmd_suite = app.add_subcommand("run-suite", "seeded property suites");
  std::string suite_name;
  int suite_instances = 200;
  int suite_d = 2;
  std::uint64_t suite_trials = 20000;
  std::string suite_rhos;
  cmd_suite
      ->add_option("name", suite_name,
                   "preservation|fourfn-ad|fourfn-general|transport|epi|counterexample")
      ->required();
  cmd_suite->add_option("--instances", suite_instances)->capture_default_str();
  cmd_suite->add_option("--d", suite_d)->capture_default_str();
  cmd_suite->add_option("--trials", suite_trials)->capture_default_str();
  cmd_suite->add_option("--gaussian-rhos", suite_rhos, "comma-separated correlations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_lsm->parsed()) {
      emit(check_lsm_on(load_function(lsm_file), lsm_method, tol), out_path);
      return 0;
    }

    if (cmd_conv->parsed()) {
      LoadedFunction f = load_function(conv_f);
      LoadedFunction g = load_function(conv_g);
      if (f.index() != g.index())
        throw std::runtime_error("convolve needs two functions of the same kind");
      if (const auto* lf = std::get_if<LatticeFunction>(&f)) {
        save_json(to_json(convolve_lattice(*lf, std::get<LatticeFunction>(g))), conv_out);
      } else {
        save_json(to_json(convolve_grid(std::get<GridFunction>(f), std::get<GridFunction>(g))),
                  conv_out);
      }
      emit(json{{"written", conv_out}}, out_path);
      return 0;
    }

    if (cmd_pres->parsed()) {
      LoadedFunction f = load_function(pres_f);
      json report = report_envelope("verify-preservation", seed, pres_tol);
      if (const auto* lf = std::get_if<LatticeFunction>(&f)) {
        LatticeFunction kernel = LatticeFunction::delta(lf->dim());
        if (pres_kernel == "binomial") {
          std::vector<LatticeFunction> factors(
              lf->dim(), LatticeFunction({0}, {4}, {1.0, 4.0, 6.0, 4.0, 1.0}));
          kernel = make_product_kernel(factors).kernel;
        } else if (pres_kernel == "gaussian") {
          throw std::runtime_error("gaussian kernel applies to grid inputs; use binomial");
        } else {
          kernel = load_lattice(pres_kernel);
        }
        report["result"] = to_json(preservation_check(*lf, kernel, pres_tol));
      } else {
        const auto& gf = std::get<GridFunction>(f);
        GridFunction kernel = [&] {
          if (pres_kernel == "gaussian") {
            DiscretizedKernel k = discretize_gaussian_kernel(gf.dim(), gf.spacing());
            report["kernel_truncated_mass"] = k.truncated_mass;
            return k.grid;
          }
          return load_grid(pres_kernel);
        }();
        report["result"] = to_json(preservation_check(gf, kernel, pres_tol));
      }
      (void)pres_eps;
      emit(report, out_path);
      return report["result"]["passed"].get<bool>() ? 0 : 1;
    }

    if (cmd_cex->parsed()) {
      auto found = counterexample_search(seed, cex_trials, cex_extent);
      json report = report_envelope("counterexample-search", seed, tol);
      report["trials"] = cex_trials;
      report["found"] = found.has_value();
      if (found) {
        report["trial_index"] = found->trial_index;
        report["f"] = to_json(found->f);
        report["g"] = to_json(found->g);
        report["conv_report"] = to_json(found->conv_report);
      }
      emit(report, out_path);
      return 0;
    }

    if (cmd_ff->parsed()) {
      json spec_json = json::parse(read_file(ff_spec));
      json report = report_envelope("fourfn-" + ff_variant, seed, tol);
      if (ff_variant == "ad") {
        LatticeQuad q{load_lattice(spec_json.at("f1").get<std::string>()),
                      load_lattice(spec_json.at("f2").get<std::string>()),
                      load_lattice(spec_json.at("f3").get<std::string>()),
                      load_lattice(spec_json.at("f4").get<std::string>())};
        report["result"] = to_json(check_ad_discrete(q, tol));
      } else {
        ModelQuad q{model_from_json(spec_json.at("f1")), model_from_json(spec_json.at("f2")),
                    model_from_json(spec_json.at("f3")), model_from_json(spec_json.at("f4"))};
        SampleSpec spec;
        spec.count = ff_samples;
        spec.seed = seed;
        spec.box = RealBox{spec_json.at("box").at("lower").get<std::vector<double>>(),
                           spec_json.at("box").at("upper").get<std::vector<double>>()};
        spec.quad_eps = spec_json.value("quad_eps", 0.01);
        if (ff_variant == "cem") {
          report["result"] = to_json(check_cem(q, spec_json.value("lambda", 0.5), spec, tol));
        } else if (ff_variant == "unified") {
          double t = spec_json.value("t", 0.5);
          MeanSpec m3{spec_json.value("alpha", 1.0), t};
          MeanSpec m4{spec_json.value("beta", 1.0), 1.0 - t};
          report["result"] = to_json(check_unified(q, m3, m4, spec, tol));
        } else {
          FourFnInstance inst;
          inst.functions = q;
          inst.r = spec_json.value("r", 0.5);
          inst.mean3 = MeanSpec{spec_json.value("alpha", 1.0), spec_json.value("s", 0.5)};
          inst.mean4 = MeanSpec{spec_json.value("beta", 1.0), spec_json.value("t", 0.5)};
          inst.m = spec_json.contains("m")
                       ? spec_json["m"].get<double>()
                       : inst.mean3.lambda * inst.r + (1.0 - inst.r) * inst.mean4.lambda;
          report["result"] = to_json(check_general_pl(inst, spec, tol));
        }
      }
      emit(report, out_path);
      return report["result"]["hypothesis"]["passed"].get<bool>() &&
                     !report["result"]["conclusion"]["passed"].get<bool>()
                 ? 1
                 : 0;
    }

    if (cmd_tr->parsed()) {
      Density1D nu1 = density_from_path(tr_nu1);
      json report = report_envelope("transport-" + tr_mode, seed, tol);
      if (tr_mode == "duality") {
        // Potential: log of nu1's density, the Gibbs measure of which is nu1.
        std::vector<Density1D> candidates;
        if (!tr_nu2.empty()) candidates.push_back(density_from_path(tr_nu2));
        DualityReport dual = log_laplace_duality_check(
            [&nu1](double x) { return std::log(std::max(nu1.density(x), 1e-300)); }, nu1.lo(),
            nu1.hi(), nu1.eps(), candidates, std::max(tol, 1e-8));
        report["log_integral"] = dual.log_integral;
        report["gibbs_gap"] = dual.gibbs_gap;
        report["passed"] = dual.passed;
        json cand = json::array();
        for (const auto& c : dual.candidates)
          cand.push_back({{"functional", c.functional}, {"gap", c.gap}});
        report["candidates"] = cand;
        emit(report, out_path);
        return dual.passed ? 0 : 1;
      }

      if (tr_nu2.empty()) throw std::runtime_error("--nu2 is required for this mode");
      Density1D nu2_raw = density_from_path(tr_nu2);
      auto [a, b] = to_common_grid(nu1, nu2_raw);
      if (tr_mode == "map") {
        TransportMap1D map = monotone_map(a, b);
        report["points"] = map.x.size();
        report["pushforward_identity"] = "T#nu1 = nu2";
        if (!emit_curves.empty())
          write_curves_csv(emit_curves, {"x", "T", "T_prime"}, {map.x, map.t, map.t_prime});
        json head = json::array();
        for (std::size_t i = 0; i < map.x.size(); i += std::max<std::size_t>(1, map.x.size() / 16))
          head.push_back({{"x", map.x[i]}, {"T", map.t[i]}, {"T_prime", map.t_prime[i]}});
        report["samples"] = head;
      } else if (tr_mode == "pushforward") {
        auto [minus, plus] = minmax_pushforward(a, b);
        MeanPushforward mean = mean_pushforward(a, b, MeanSpec{tr_alpha, tr_s});
        report["minus_raw_mass"] = minus.raw_mass();
        report["plus_raw_mass"] = plus.raw_mass();
        report["mean_raw_mass"] = mean.density.raw_mass();
        if (!emit_curves.empty()) {
          std::vector<double> xs, nm, np;
          for (std::size_t k = 0; k < a.cells(); ++k) {
            xs.push_back(a.center(k));
            nm.push_back(minus.density(a.center(k)));
            np.push_back(plus.density(a.center(k)));
          }
          write_curves_csv(emit_curves, {"x", "n_minus", "n_plus"}, {xs, nm, np});
        }
      } else if (tr_mode == "displacement") {
        DisplacementDetail det = displacement_convexity_detail(a, b, std::max(tol, 1e-6));
        report["result"] = to_json(det.report);
        report["entropies"] = {{"minus", det.entropy_minus},
                               {"plus", det.entropy_plus},
                               {"nu1", det.entropy_1},
                               {"nu2", det.entropy_2}};
        report["mass_identity"] = det.mass_identity;
        emit(report, out_path);
        return det.report.passed ? 0 : 1;
      } else {  // audit
        auto density_fn = [](const Density1D& nu) {
          return [&nu](double x) { return nu.density(x); };
        };
        TransportChainReport chain = transport_fourfn_audit(
            {density_fn(a), density_fn(b), density_fn(a), density_fn(b)}, a, b,
            MeanSpec{tr_alpha, tr_s}, MeanSpec{tr_alpha, tr_t}, tr_r,
            /*minmax_mode=*/tr_alpha == 1.0 ? false : true, std::max(tol, 1e-6));
        report["coupling_slack"] = chain.coupling_slack;
        report["entropy_slack"] = chain.entropy_slack;
        report["duality_gaps"] = chain.duality_gaps;
        report["conclusion_slack"] = chain.conclusion_slack;
        report["m"] = chain.m;
        report["passed"] = chain.passed;
        emit(report, out_path);
        return chain.passed ? 0 : 1;
      }
      emit(report, out_path);
      return 0;
    }

    if (cmd_epi->parsed()) {
      FlowParams params;
      params.lambda = epi_lambda;
      params.s_max = epi_smax;
      params.nodes = epi_nodes;
      JointDensity2D p = [&] {
        if (epi_p.rfind("gaussian:", 0) == 0)
          return JointDensity2D::gaussian(std::stod(epi_p.substr(9)), 8.0, 0.1);
        return JointDensity2D::from_grid(load_grid(epi_p));
      }();
      json report = report_envelope("epi-experiment", seed, tol);
      report["lambda"] = params.lambda;

      if (!epi_sweep.empty()) {
        double lo, hi;
        int count;
        if (std::sscanf(epi_sweep.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
          throw std::runtime_error("--sweep-lambda needs lo:hi:count");
        json rows = json::array();
        for (int i = 0; i < count; ++i) {
          params.lambda = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
          SCurve s = compute_S(p, params);
          rows.push_back({{"lambda", params.lambda}, {"S", s.S}});
        }
        report["sweep"] = rows;
        emit(report, out_path);
        return 0;
      }

      EpiReport epi = conditional_epi_check(p, params, std::max(tol, 5e-3), true);
      SCurve s = compute_S(p, params);
      report["S"] = s.S;
      report["tail_estimate"] = s.tail_estimate;
      report["N_sum"] = epi.n_sum;
      report["N_x_given_y"] = epi.n_x_given_y;
      report["N_y_given_x"] = epi.n_y_given_x;
      report["corollary_mode"] = epi.corollary_mode;
      report["corollary_holds"] = epi.corollary_holds;
      report["theorem_holds"] = epi.theorem_holds;
      if (!epi.note.empty()) report["note"] = epi.note;
      if (!emit_curves.empty())
        write_curves_csv(emit_curves, {"s", "integrand"}, {s.nodes, s.integrand});
      emit(report, out_path);
      return (epi.corollary_mode ? epi.corollary_holds : epi.theorem_holds) ? 0 : 1;
    }

    if (cmd_suite->parsed()) {
      SuiteConfig cfg;
      cfg.name = suite_name;
      cfg.seed = seed;
      cfg.instances = suite_instances;
      cfg.d = suite_d;
      cfg.trials = suite_trials;
      if (!suite_rhos.empty()) {
        cfg.gaussian_rhos.clear();
        std::istringstream ss(suite_rhos);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.gaussian_rhos.push_back(std::stod(tok));
      }
      SuiteReport rep = run_suite(cfg);
      emit(to_json(rep), out_path);
      return rep.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
