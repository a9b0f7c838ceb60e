#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "kpartite/experiments.hpp"
#include "kpartite/oracle.hpp"

using namespace kpartite;

namespace {

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

ModelKind model_from_name(const std::string& name) {
  if (name == "vector") return ModelKind::VectorT;
  if (name == "partition") return ModelKind::PartitionR;
  if (name == "gue") return ModelKind::GueU;
  if (name == "goe-conj") return ModelKind::ConjugatedGoeV;
  throw CLI::ValidationError("--model must be vector|partition|gue|goe-conj");
}

SpaceKind space_from_name(const std::string& name) {
  if (name == "fixed") return SpaceKind::OmegaFixedCounts;
  if (name == "free") return SpaceKind::Omega;
  if (name == "min-fraction") return SpaceKind::OmegaMinFraction;
  if (name == "theta") return SpaceKind::ThetaA;
  throw CLI::ValidationError("--space must be fixed|free|min-fraction|theta");
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* out = std::getenv("KPARTITE_OUT")) cfg.output_path = out;
  if (const char* threads = std::getenv("KPARTITE_THREADS")) cfg.threads = std::atoi(threads);
}

std::string param_json_for(const ThresholdReport& rep, const std::vector<double>& colors,
                           const std::vector<int>& sizes) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  auto emit_key = [&](const std::string& key) {
    if (!first) os << ",";
    first = false;
    os << "\"" << key << "\":";
  };
  if (rep.formula == ThresholdFormula::Thm1 && !colors.empty()) {
    emit_key("colors");
    os << "[";
    for (std::size_t i = 0; i < colors.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", colors[i]);
      os << (i ? "," : "") << buf;
    }
    os << "]";
  }
  if (rep.formula == ThresholdFormula::Thm2 && !sizes.empty()) {
    emit_key("group_sizes");
    os << "[";
    for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
    os << "]";
  }
  os << "}";
  return os.str();
}

int run_thresholds(int n, int k, const std::vector<double>& colors,
                   std::vector<int> sizes, const std::string& csv_path) {
  if (sizes.empty()) {
    sizes.assign(k, n / k);
    for (int i = 0; i < n % k; ++i) ++sizes[i];
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<int>());

  std::vector<ThresholdReport> reports;
  if (!colors.empty())
    reports.push_back(threshold(ThresholdFormula::Thm1, n, Palette::reals(colors), std::nullopt));
  reports.push_back(threshold(ThresholdFormula::Thm2, n, std::nullopt, sizes));
  reports.push_back(threshold(ThresholdFormula::Thm3, n, Palette::roots(k), std::nullopt));
  reports.push_back(threshold(ThresholdFormula::Thm5Bound, n, Palette::roots(k), std::nullopt));

  std::string csv = "formula_id,n,k,param_json,sigma_sq_critical\n";
  for (const ThresholdReport& rep : reports) {
    std::printf("%-10s n=%-6d k=%-4d sigma^2_c = %.6f  (sigma_c = %.6f)\n", formula_id(rep.formula),
                rep.n, rep.k, rep.sigma_sq_critical, std::sqrt(rep.sigma_sq_critical));
    csv += threshold_csv_row(rep, param_json_for(rep, colors, sizes));
  }
  if (!csv_path.empty()) {
    write_file(csv_path, csv);
    std::printf("wrote %s\n", csv_path.c_str());
  }
  return 0;
}

int run_simulate(ExperimentConfig cfg, double sigma, double sigma_mult, std::uint64_t trial) {
  apply_env_overrides(cfg);
  cfg.trials = 1;
  cfg.validate();
  if (sigma_mult >= 0) sigma = std::sqrt(sigma_mult * cfg.threshold_sigma_sq());
  const TrialRecord rec = run_trial(cfg, sigma, trial);

  RngStream truth_rng = RngStream::keyed(cfg.base_seed, trial, 0);
  const Assignment y = sample_truth(cfg.truth_space(), cfg.palette(), truth_rng);
  std::printf("palette=%s\n", cfg.palette().to_line().c_str());
  std::printf("truth=%s\n",
              y.to_line(cfg.space == SpaceKind::ThetaA ? "theta" : "omega").c_str());
  std::printf("sigma=%.17g\n", sigma);
  std::printf("seed=%llu\n", static_cast<unsigned long long>(rec.seed));
  std::printf("recovered=%s\n", rec.recovered ? "true" : "false");
  std::printf("margin=%.17g\n", rec.margin);
  std::printf("wall_ms=%.3f\n", rec.wall_ms);
  return 0;
}

int run_sweep(ExperimentConfig cfg, bool fit_crossing) {
  apply_env_overrides(cfg);
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult res = sweep(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string trials_path = cfg.output_path + ".trials.csv";
  const std::string summary_path = cfg.output_path + ".summary.csv";
  write_file(trials_path, trials_csv(res, cfg.include_wall_ms));
  write_file(summary_path, summary_csv(res));

  std::printf("sigma     rate    mean_margin\n");
  for (const SweepRow& row : res.summary)
    std::printf("%-9.4f %-7.3f %.4g\n", row.sigma, row.rate, row.mean_margin);
  if (fit_crossing) {
    const double crossing = logistic_crossing_sigma_sq(res);
    if (crossing > 0) {
      std::printf("empirical 50%% crossing: sigma^2 = %.6f\n", crossing);
      if (cfg.estimator == EstimatorKind::Mle || cfg.model == ModelKind::ConjugatedGoeV)
        std::printf("predicted threshold:     sigma^2 = %.6f\n", cfg.threshold_sigma_sq());
    } else {
      std::printf("empirical 50%% crossing: fit degenerate\n");
    }
  }
  std::printf("wrote %s and %s in %.1fs\n", trials_path.c_str(), summary_path.c_str(), elapsed);
  return 0;
}

int run_certify(int n, int k, double sigma, double sigma_mult, std::uint64_t seed,
                const SdpParams& params, const std::string& dump_prefix) {
  const SampleSpace space = SampleSpace::theta(n, k);
  const Palette pal = Palette::roots(k);
  if (sigma_mult >= 0)
    sigma = sigma_mult * std::sqrt(static_cast<double>(n) / (2.0 * std::log(n)));

  RngStream truth_rng = RngStream::keyed(seed, 0, 0);
  RngStream noise_rng = RngStream::keyed(seed, 0, 1);
  const Assignment y = sample_truth(space, pal, truth_rng);
  const Observation obs = observe(y, ModelKind::ConjugatedGoeV, sigma, noise_rng);

  const SdpSolution sol = solve_sdp(obs.herm_mat, params);
  const CertificateReport cert = dual_certificate(obs.herm_mat, y);
  const HermitianMatrix truth_mat = build_P(y);
  const double dist = (sol.X - truth_mat).norm();

  std::printf("n=%d k=%d sigma=%.6f seed=%llu\n", n, k, sigma,
              static_cast<unsigned long long>(seed));
  std::printf("certified=%s lambda2=%.6g lambda_min=%.3g null_residual=%.3g\n",
              cert.certified ? "true" : "false", cert.lambda_second, cert.lambda_min,
              cert.null_vector_residual);
  std::printf("solver: converged=%s iters=%d primal_residual=%.3g constraint_residual=%.3g\n",
              sol.converged ? "true" : "false", sol.iterations, sol.primal_residual,
              sol.constraint_residual);
  std::printf("||X - y ybar^t||_F = %.6g  (1e-4*n = %.4g)\n", dist, 1e-4 * n);

  if (!dump_prefix.empty()) {
    std::ofstream vf(dump_prefix + ".V.txt");
    dump_matrix(vf, obs.herm_mat);
    std::ofstream xf(dump_prefix + ".X.txt");
    dump_matrix(xf, sol.X);
    std::ofstream sf(dump_prefix + ".S.txt");
    dump_matrix(sf, cert.S);
    std::printf("dumped %s.{V,X,S}.txt\n", dump_prefix.c_str());
  }
  return sol.converged ? 0 : 2;
}

int run_oracle() {
  bool all_pass = true;
  for (const OracleCheck& check : run_oracle_checks()) {
    std::printf("[%s] %s (%s)\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                check.detail.c_str());
    all_pass = all_pass && check.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy k-partite community recovery: thresholds, MLE, complex SDP"};
  app.require_subcommand(1);

  // thresholds
  auto* cmd_thresholds = app.add_subcommand("thresholds", "print critical sigma^2 values");
  int th_n = 100, th_k = 2;
  std::string th_colors, th_sizes, th_csv;
  cmd_thresholds->add_option("--n", th_n, "number of vertices")->required();
  cmd_thresholds->add_option("--k", th_k, "number of colors")->required();
  cmd_thresholds->add_option("--colors", th_colors, "comma list of real colors");
  cmd_thresholds->add_option("--group-sizes", th_sizes, "comma list of group sizes");
  cmd_thresholds->add_option("--csv", th_csv, "write a CSV table to this path");

  // shared experiment flags
  auto add_experiment_flags = [](CLI::App* cmd, std::string& model, std::string& space,
                                 std::string& estimator, ExperimentConfig& cfg,
                                 std::string& colors, std::string& sizes) {
    cmd->add_option("--model", model, "vector|partition|gue|goe-conj");
    cmd->add_option("--space", space, "fixed|free|min-fraction|theta");
    cmd->add_option("--estimator", estimator, "mle|sdp");
    cmd->add_option("--n", cfg.n, "number of vertices");
    cmd->add_option("--k", cfg.k, "number of colors");
    cmd->add_option("--colors", colors, "comma list of real colors");
    cmd->add_option("--group-sizes", sizes, "comma list of fixed group sizes");
    cmd->add_option("--min-fraction", cfg.min_fraction, "minimum group fraction c");
    cmd->add_option("--seed", cfg.base_seed, "base seed");
    cmd->add_option("--threads", cfg.threads, "worker thread cap (0 = hardware)");
    cmd->add_option("--solver-max-iters", cfg.solver.max_iters, "SDP iteration cap");
    cmd->add_option("--solver-rho", cfg.solver.rho, "SDP step (0 = n)");
  };

  // simulate
  auto* cmd_simulate = app.add_subcommand("simulate", "run one verbose trial");
  ExperimentConfig sim_cfg;
  std::string sim_model = "vector", sim_space = "fixed", sim_estimator = "mle";
  std::string sim_colors, sim_sizes;
  double sim_sigma = 0.0, sim_sigma_mult = -1.0;
  std::uint64_t sim_trial = 0;
  add_experiment_flags(cmd_simulate, sim_model, sim_space, sim_estimator, sim_cfg, sim_colors,
                       sim_sizes);
  cmd_simulate->add_option("--sigma", sim_sigma, "noise intensity");
  cmd_simulate->add_option("--sigma-mult", sim_sigma_mult,
                           "sigma^2 as a multiple of the predicted threshold");
  cmd_simulate->add_option("--trial", sim_trial, "trial index");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "Monte Carlo sigma sweep from a config");
  ExperimentConfig sweep_cfg;
  std::string sweep_config_path;
  std::string sweep_model, sweep_space, sweep_estimator, sweep_colors, sweep_sizes, sweep_sigmas;
  bool sweep_fit = false, sweep_timing = false;
  int sweep_trials = -1;
  double sweep_lo = -1.0, sweep_hi = -1.0;
  int sweep_steps = -1;
  std::string sweep_out;
  cmd_sweep->add_option("--config", sweep_config_path, "key=value config file");
  add_experiment_flags(cmd_sweep, sweep_model, sweep_space, sweep_estimator, sweep_cfg,
                       sweep_colors, sweep_sizes);
  cmd_sweep->add_option("--trials", sweep_trials, "trials per sigma");
  cmd_sweep->add_option("--lo", sweep_lo, "grid low multiple of threshold sigma^2");
  cmd_sweep->add_option("--hi", sweep_hi, "grid high multiple of threshold sigma^2");
  cmd_sweep->add_option("--steps", sweep_steps, "grid point count");
  cmd_sweep->add_option("--sigmas", sweep_sigmas, "explicit comma list of sigma values");
  cmd_sweep->add_option("--out", sweep_out, "output path prefix");
  cmd_sweep->add_flag("--fit-crossing", sweep_fit, "fit a logistic curve, report 50% crossing");
  cmd_sweep->add_flag("--timing", sweep_timing, "include wall_ms column in the trials CSV");

  // certify
  auto* cmd_certify = app.add_subcommand("certify", "solve the SDP and check the dual certificate");
  int cert_n = 64, cert_k = 4;
  double cert_sigma = 0.0, cert_sigma_mult = -1.0;
  std::uint64_t cert_seed = 1;
  SdpParams cert_params;
  std::string cert_dump;
  cmd_certify->add_option("--n", cert_n, "number of vertices")->required();
  cmd_certify->add_option("--k", cert_k, "number of colors")->required();
  cmd_certify->add_option("--sigma", cert_sigma, "noise intensity");
  cmd_certify->add_option("--sigma-mult", cert_sigma_mult,
                          "sigma as a multiple of sqrt(n)/sqrt(2 log n)");
  cmd_certify->add_option("--seed", cert_seed, "seed");
  cmd_certify->add_option("--solver-max-iters", cert_params.max_iters, "iteration cap");
  cmd_certify->add_option("--solver-rho", cert_params.rho, "step (0 = n)");
  cmd_certify->add_option("--dump-prefix", cert_dump, "dump V, X, S in the debug format");

  // oracle
  app.add_subcommand("oracle", "exhaustive small-instance identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_thresholds->parsed()) {
      return run_thresholds(th_n, th_k,
                            th_colors.empty() ? std::vector<double>{} : parse_doubles(th_colors),
                            th_sizes.empty() ? std::vector<int>{} : parse_ints(th_sizes), th_csv);
    }
    if (cmd_simulate->parsed()) {
      sim_cfg.model = model_from_name(sim_model);
      sim_cfg.space = space_from_name(sim_space);
      sim_cfg.estimator = sim_estimator == "sdp" ? EstimatorKind::Sdp : EstimatorKind::Mle;
      if (!sim_colors.empty()) sim_cfg.colors = parse_doubles(sim_colors);
      else if (sim_cfg.model == ModelKind::VectorT || sim_cfg.model == ModelKind::PartitionR)
        for (int i = 0; i < sim_cfg.k; ++i) sim_cfg.colors.push_back(i);
      if (!sim_sizes.empty()) sim_cfg.group_sizes = parse_ints(sim_sizes);
      return run_simulate(sim_cfg, sim_sigma, sim_sigma_mult, sim_trial);
    }
    if (cmd_sweep->parsed()) {
      ExperimentConfig cfg = sweep_config_path.empty()
                                 ? ExperimentConfig{}
                                 : ExperimentConfig::from_file(sweep_config_path);
      // flags win over the config file
      if (!sweep_model.empty()) cfg.model = model_from_name(sweep_model);
      if (!sweep_space.empty()) cfg.space = space_from_name(sweep_space);
      if (!sweep_estimator.empty())
        cfg.estimator = sweep_estimator == "sdp" ? EstimatorKind::Sdp : EstimatorKind::Mle;
      if (cmd_sweep->count("--n")) cfg.n = sweep_cfg.n;
      if (cmd_sweep->count("--k")) cfg.k = sweep_cfg.k;
      if (!sweep_colors.empty()) cfg.colors = parse_doubles(sweep_colors);
      else if (cfg.colors.empty() &&
               (cfg.model == ModelKind::VectorT || cfg.model == ModelKind::PartitionR))
        for (int i = 0; i < cfg.k; ++i) cfg.colors.push_back(i);
      if (!sweep_sizes.empty()) cfg.group_sizes = parse_ints(sweep_sizes);
      if (cmd_sweep->count("--min-fraction")) cfg.min_fraction = sweep_cfg.min_fraction;
      if (cmd_sweep->count("--seed")) cfg.base_seed = sweep_cfg.base_seed;
      if (cmd_sweep->count("--threads")) cfg.threads = sweep_cfg.threads;
      if (cmd_sweep->count("--solver-max-iters")) cfg.solver.max_iters = sweep_cfg.solver.max_iters;
      if (cmd_sweep->count("--solver-rho")) cfg.solver.rho = sweep_cfg.solver.rho;
      if (sweep_trials > 0) cfg.trials = sweep_trials;
      if (sweep_lo > 0) cfg.grid.lo = sweep_lo;
      if (sweep_hi > 0) cfg.grid.hi = sweep_hi;
      if (sweep_steps > 0) cfg.grid.steps = sweep_steps;
      if (!sweep_sigmas.empty()) cfg.grid.explicit_sigmas = parse_doubles(sweep_sigmas);
      if (!sweep_out.empty()) cfg.output_path = sweep_out;
      if (sweep_timing) cfg.include_wall_ms = true;
      return run_sweep(cfg, sweep_fit);
    }
    if (cmd_certify->parsed()) {
      return run_certify(cert_n, cert_k, cert_sigma, cert_sigma_mult, cert_seed, cert_params,
                         cert_dump);
    }
    return run_oracle();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
