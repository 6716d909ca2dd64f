#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "welrci/simlab.hpp"

namespace {

int resolve_k(const std::string& spec, welrci::Scheme scheme) {
  if (spec == "auto") return welrci::select_order(scheme);
  if (spec.size() == 1 && spec[0] >= '0' && spec[0] <= '4') return spec[0] - '0';
  throw CLI::ValidationError("--k", "expected auto or 0..4");
}

int run_fit(const std::string& scheme_name, const std::string& input, double q, double alpha,
            const std::string& k_spec, bool no_smooth, int boot_reps, int grid_step,
            std::uint64_t seed, const std::string& format) {
  welrci::Scheme scheme = welrci::parse_scheme(scheme_name);
  welrci::CensoredSample sample = welrci::load_csv(input, scheme);
  bool smoothed = !no_smooth;
  int k = resolve_k(k_spec, scheme);

  welrci::CalibrationResult cal =
      welrci::convergence_rate(scheme).exponent == 0.5
          ? welrci::calibrate_n_of_n(sample, q, alpha, k, boot_reps, seed, smoothed)
          : welrci::calibrate_m_of_n(sample, q, alpha, k, boot_reps, grid_step, seed, smoothed);

  auto [dist, em] = welrci::fit_npmle(sample);
  welrci::ConfidenceInterval ci = welrci::welrci(dist, q, cal.c_n, smoothed);

  if (format == "json") {
    nlohmann::json j;
    j["q"] = q;
    j["alpha"] = alpha;
    j["k"] = k;
    j["c_n"] = cal.c_n;
    j["rho_hat"] = cal.rho_hat;
    j["theta_hat"] = ci.theta_hat;
    j["x_l"] = ci.x_l;
    j["x_u"] = ci.x_u;
    if (cal.n_b >= 0)
      j["n_b"] = cal.n_b;
    else
      j["n_b"] = nullptr;
    j["feasible_range"] = {ci.feasible_lo, ci.feasible_hi};
    j["diagnostics"] = {{"scheme", welrci::scheme_name(scheme)},
                        {"n", sample.n()},
                        {"support_size", dist.m()},
                        {"smoothed", smoothed},
                        {"degenerate_replicates", cal.degenerate},
                        {"clamped_lo", ci.clamped_lo},
                        {"clamped_hi", ci.clamped_hi},
                        {"bisect_iterations", ci.iterations},
                        {"em_iterations", em.iterations}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "q,alpha,k,c_n,rho_hat,theta_hat,x_l,x_u,n_b,feasible_lo,feasible_hi,"
          "clamped_lo,clamped_hi,degenerate_replicates\n";
    os << q << ',' << alpha << ',' << k << ',' << cal.c_n << ',' << cal.rho_hat << ','
       << ci.theta_hat << ',' << ci.x_l << ',' << ci.x_u << ',';
    if (cal.n_b >= 0) os << cal.n_b;
    os << ',' << ci.feasible_lo << ',' << ci.feasible_hi << ',' << ci.clamped_lo << ','
       << ci.clamped_hi << ',' << cal.degenerate << '\n';
    std::cout << os.str();
  }
  return 0;
}

int run_npmle(const std::string& scheme_name, const std::string& input) {
  welrci::Scheme scheme = welrci::parse_scheme(scheme_name);
  welrci::CensoredSample sample = welrci::load_csv(input, scheme);
  auto [dist, em] = welrci::fit_npmle(sample);
  std::cout << std::setprecision(12) << "w,p\n";
  for (int j = 0; j < dist.m(); ++j) std::cout << dist.w[j] << ',' << dist.p[j] << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted empirical likelihood ratio confidence intervals for quantiles"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "confidence interval for one quantile of one sample");
  std::string fit_scheme, fit_input, fit_k = "auto", fit_format = "json";
  double fit_q = 0.5, fit_alpha = 0.10;
  bool fit_no_smooth = false;
  int fit_B = 400, fit_d = 5;
  std::uint64_t fit_seed = 1;
  fit->add_option("--scheme", fit_scheme,
                  "right|doubly|interval1|interval2|partly1|partlyGeneral|none")
      ->required();
  fit->add_option("--input", fit_input, "observation CSV")->required();
  fit->add_option("--q", fit_q, "quantile level in (0,1)")->required();
  fit->add_option("--alpha", fit_alpha, "nominal miss probability");
  fit->add_option("--k", fit_k, "expansion order: auto or 0..4");
  fit->add_flag("--no-smooth", fit_no_smooth, "step-function flavor (WELRCI0)");
  fit->add_option("--boot-reps", fit_B, "bootstrap replicates");
  fit->add_option("--grid-step", fit_d, "resample-size grid step (cube-root schemes)");
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--format", fit_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
  std::string sim_preset, sim_out, sim_methods;
  int sim_n = 0, sim_reps = 0, sim_B = 0, sim_d = 0;
  std::uint64_t sim_seed = 0;
  double sim_alpha = 0.0;
  std::string sim_q;
  unsigned sim_threads = 0;
  sim->add_option("--preset", sim_preset, "table1..table5 or a config file path")->required();
  auto* opt_n = sim->add_option("--n", sim_n, "sample size");
  auto* opt_reps = sim->add_option("--reps", sim_reps, "Monte Carlo trials");
  auto* opt_B = sim->add_option("--boot-reps", sim_B, "bootstrap replicates per trial");
  auto* opt_seed = sim->add_option("--seed", sim_seed, "RNG seed");
  auto* opt_methods = sim->add_option("--methods", sim_methods, "comma list, e.g. 2-WELRCI,QBPCI");
  auto* opt_q = sim->add_option("--q", sim_q, "comma list of quantile levels");
  auto* opt_alpha = sim->add_option("--alpha", sim_alpha, "nominal miss probability");
  auto* opt_d = sim->add_option("--d", sim_d, "resample-size grid step");
  auto* opt_threads = sim->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
  sim->add_option("--out", sim_out, "CSV report path (JSON written alongside)");

  auto* npm = app.add_subcommand("npmle", "distribution estimate only, as w,p CSV");
  std::string npm_scheme, npm_input;
  npm->add_option("--scheme", npm_scheme,
                  "right|doubly|interval1|interval2|partly1|partlyGeneral|none")
      ->required();
  npm->add_option("--input", npm_input, "observation CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed())
      return run_fit(fit_scheme, fit_input, fit_q, fit_alpha, fit_k, fit_no_smooth, fit_B, fit_d,
                     fit_seed, fit_format);
    if (npm->parsed()) return run_npmle(npm_scheme, npm_input);

    welrci::StudyConfig cfg;
    if (welrci::is_preset(sim_preset)) {
      cfg.gen = welrci::preset_params(sim_preset);
      cfg.preset = sim_preset;
    } else {
      cfg = welrci::parse_config(sim_preset);
    }
    if (opt_n->count()) cfg.n = sim_n;
    if (opt_reps->count()) cfg.reps = sim_reps;
    if (opt_B->count()) cfg.B = sim_B;
    if (opt_seed->count()) cfg.seed = sim_seed;
    if (opt_alpha->count()) cfg.alpha = sim_alpha;
    if (opt_d->count()) cfg.d = sim_d;
    if (opt_threads->count()) cfg.threads = sim_threads;
    if (opt_methods->count()) {
      cfg.methods.clear();
      std::stringstream ss(sim_methods);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.methods.push_back(welrci::parse_method(tok));
    }
    if (opt_q->count()) {
      cfg.qs.clear();
      std::stringstream ss(sim_q);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.qs.push_back(std::stod(tok));
    }

    welrci::StudyReport rep = welrci::run_study(cfg);
    std::string csv = welrci::report_csv(cfg, rep);
    if (sim_out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(sim_out);
      if (!out) throw std::runtime_error("cannot write " + sim_out);
      out << csv;
      std::ofstream jout(sim_out + ".json");
      jout << welrci::report_json(cfg, rep) << '\n';
      std::cout << csv;
    }
    std::cerr << std::setprecision(3) << "done in " << rep.wall_seconds << " s\n";
    return rep.flagged ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
