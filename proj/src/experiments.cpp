#include "kpartite/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace kpartite {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

ModelKind parse_model(const std::string& v) {
  if (v == "vector") return ModelKind::VectorT;
  if (v == "partition") return ModelKind::PartitionR;
  if (v == "gue") return ModelKind::GueU;
  if (v == "goe-conj") return ModelKind::ConjugatedGoeV;
  throw std::invalid_argument("unknown model: " + v);
}

SpaceKind parse_space(const std::string& v) {
  if (v == "fixed") return SpaceKind::OmegaFixedCounts;
  if (v == "free") return SpaceKind::Omega;
  if (v == "min-fraction") return SpaceKind::OmegaMinFraction;
  if (v == "theta") return SpaceKind::ThetaA;
  throw std::invalid_argument("unknown space: " + v);
}

std::vector<int> balanced_sizes(int n, int k) {
  std::vector<int> sizes(k, n / k);
  for (int i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Palette ExperimentConfig::palette() const {
  if (colors.empty()) return Palette::roots(k);
  if (static_cast<int>(colors.size()) != k)
    throw std::invalid_argument("config: colors list must have k entries");
  return Palette::reals(colors);
}

SampleSpace ExperimentConfig::sample_space() const {
  switch (space) {
    case SpaceKind::Omega:
      return SampleSpace::omega(n, k);
    case SpaceKind::OmegaFixedCounts:
      return SampleSpace::fixed_counts(group_sizes.empty() ? balanced_sizes(n, k)
                                                           : group_sizes);
    case SpaceKind::OmegaMinFraction:
      return SampleSpace::min_fraction_space(n, k, min_fraction);
    case SpaceKind::ThetaA:
      return SampleSpace::theta(n, k);
  }
  throw std::logic_error("bad space");
}

SampleSpace ExperimentConfig::truth_space() const {
  // The truth always carries fixed group counts (the estimator's search space
  // may be larger); unit-modulus models draw truth from the balanced space.
  if (space == SpaceKind::ThetaA || model == ModelKind::GueU ||
      model == ModelKind::ConjugatedGoeV)
    return SampleSpace::theta(n, k);
  return SampleSpace::fixed_counts(group_sizes.empty() ? balanced_sizes(n, k) : group_sizes);
}

ThresholdFormula ExperimentConfig::threshold_formula() const {
  switch (model) {
    case ModelKind::VectorT: return ThresholdFormula::Thm1;
    case ModelKind::PartitionR: return ThresholdFormula::Thm2;
    case ModelKind::GueU: return ThresholdFormula::Thm3;
    case ModelKind::ConjugatedGoeV: return ThresholdFormula::Thm5Bound;
  }
  throw std::logic_error("bad model");
}

double ExperimentConfig::threshold_sigma_sq() const {
  const ThresholdFormula f = threshold_formula();
  std::optional<Palette> pal;
  if (!colors.empty() || f == ThresholdFormula::Thm3) pal = palette();
  std::optional<std::vector<int>> sizes;
  if (f == ThresholdFormula::Thm2)
    sizes = group_sizes.empty() ? balanced_sizes(n, k) : group_sizes;
  if (f == ThresholdFormula::Thm3 && !pal) pal = Palette::roots(k);
  return threshold(f, n, pal, sizes).sigma_sq_critical;
}

std::vector<double> ExperimentConfig::sigma_values() const {
  std::vector<double> out;
  if (!grid.explicit_sigmas.empty()) {
    out = grid.explicit_sigmas;
  } else if (grid.relative) {
    const double base = threshold_sigma_sq();
    if (grid.steps < 1) throw std::invalid_argument("config: grid steps >= 1 required");
    for (int i = 0; i < grid.steps; ++i) {
      const double mult =
          grid.steps == 1
              ? grid.lo
              : grid.lo * std::pow(grid.hi / grid.lo, static_cast<double>(i) / (grid.steps - 1));
      out.push_back(std::sqrt(mult * base));
    }
  } else {
    for (int i = 0; i < grid.steps; ++i) {
      const double s = grid.steps == 1
                           ? grid.lo
                           : grid.lo + (grid.hi - grid.lo) * i / (grid.steps - 1);
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  for (double s : out)
    if (s < 0) throw std::invalid_argument("config: sigma values must be >= 0");
  if (out.empty()) throw std::invalid_argument("config: empty sigma grid");
  return out;
}

RecoveryMode ExperimentConfig::recovery_mode() const {
  return natural_recovery_mode(model, space);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials >= 1 required");
  if (n < 2 || k < 2) throw std::invalid_argument("config: n >= 2 and k >= 2 required");
  if (estimator == EstimatorKind::Sdp && model != ModelKind::ConjugatedGoeV)
    throw std::invalid_argument("config: the SDP estimator pairs with the goe-conj model");
  if (estimator == EstimatorKind::Mle && model == ModelKind::ConjugatedGoeV)
    throw std::invalid_argument("config: the goe-conj model is estimated by the SDP");
  if (estimator == EstimatorKind::Sdp && space != SpaceKind::ThetaA)
    throw std::invalid_argument("config: the SDP estimator uses the theta space");
  if ((model == ModelKind::GueU || model == ModelKind::ConjugatedGoeV) && !colors.empty())
    throw std::invalid_argument("config: unitary models use roots of unity, not real colors");
  if (model == ModelKind::VectorT && colors.empty())
    throw std::invalid_argument("config: vector model needs real colors");
  sample_space();
  (void)sigma_values();
}

Assignment sample_truth(const SampleSpace& space, const Palette& palette, RngStream& rng) {
  const int n = space.n;
  const int k = space.k;
  switch (space.kind) {
    case SpaceKind::Omega: {
      std::vector<int> colors(n);
      for (int i = 0; i < n; ++i) colors[i] = static_cast<int>(rng.below(k));
      return Assignment{palette, std::move(colors)};
    }
    case SpaceKind::OmegaFixedCounts:
    case SpaceKind::ThetaA: {
      std::vector<int> colors;
      colors.reserve(n);
      for (int c = 0; c < k; ++c)
        colors.insert(colors.end(), space.counts[c], c);
      for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(colors[i], colors[j]);
      }
      return Assignment{palette, std::move(colors)};
    }
    case SpaceKind::OmegaMinFraction: {
      for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<int> colors(n);
        for (int i = 0; i < n; ++i) colors[i] = static_cast<int>(rng.below(k));
        Assignment a{palette, std::move(colors)};
        if (space.contains(a)) return a;
      }
      throw std::runtime_error("sample_truth: min-fraction rejection sampling stalled");
    }
  }
  throw std::logic_error("bad space");
}

TrialRecord run_trial(const ExperimentConfig& cfg, double sigma, std::uint64_t trial_index) {
  const Palette pal = cfg.palette();
  const SampleSpace space = cfg.sample_space();

  RngStream truth_rng = RngStream::keyed(cfg.base_seed, trial_index, 0);
  RngStream noise_rng = RngStream::keyed(cfg.base_seed, trial_index, 1);

  const Assignment y = sample_truth(cfg.truth_space(), pal, truth_rng);
  const Observation obs = observe(y, cfg.model, sigma, noise_rng);

  TrialRecord rec;
  rec.trial = trial_index;
  rec.seed = RngStream::derive_seed(cfg.base_seed, trial_index, 0);
  rec.sigma = sigma;

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.estimator == EstimatorKind::Mle) {
    MleOptions opts;
    opts.cap = cfg.enumeration_cap;
    const MleResult res = mle(obs, space, opts);
    rec.recovered = recovery_check(res.argbest, y, cfg.recovery_mode());
    const Scorer scorer(obs, space.kind);
    const double truth_score = scorer(y);
    rec.margin = res.orientation == Orientation::Maximize ? res.best_score - truth_score
                                                          : truth_score - res.best_score;
  } else {
    const SdpSolution sol = solve_sdp(obs.herm_mat, cfg.solver);
    const Assignment est = round_solution(sol.X, cfg.k);
    rec.recovered = recovery_check(est, y, RecoveryMode::Phase);
    rec.margin = dual_certificate(obs.herm_mat, y).lambda_second;
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0).count();
  return rec;
}

SweepResult sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.sigmas = cfg.sigma_values();
  const int ns = static_cast<int>(res.sigmas.size());
  res.records.assign(ns, {});
  for (auto& v : res.records) v.resize(cfg.trials);

  struct Job { int sigma_idx; int trial; };
  std::vector<Job> jobs;
  jobs.reserve(static_cast<std::size_t>(ns) * cfg.trials);
  for (int s = 0; s < ns; ++s)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({s, t});

  int nthreads = cfg.threads > 0 ? cfg.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  nthreads = std::min<int>(nthreads, static_cast<int>(jobs.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size() || failed.load()) break;
      const Job job = jobs[idx];
      try {
        res.records[job.sigma_idx][job.trial] =
            run_trial(cfg, res.sigmas[job.sigma_idx], static_cast<std::uint64_t>(job.trial));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
        break;
      }
    }
  };

  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("sweep trial failed: " + error_message);

  for (int s = 0; s < ns; ++s) {
    SweepRow row;
    row.sigma = res.sigmas[s];
    row.trials = cfg.trials;
    double sum_margin = 0.0;
    int recovered = 0;
    for (const TrialRecord& r : res.records[s]) {
      recovered += r.recovered ? 1 : 0;
      sum_margin += r.margin;
    }
    row.rate = static_cast<double>(recovered) / cfg.trials;
    row.mean_margin = sum_margin / cfg.trials;
    res.summary.push_back(row);
  }
  return res;
}

std::string trials_csv(const SweepResult& res, bool include_wall_ms) {
  std::ostringstream os;
  os << "sigma,trial,seed,recovered,margin";
  if (include_wall_ms) os << ",wall_ms";
  os << '\n';
  for (std::size_t s = 0; s < res.sigmas.size(); ++s) {
    for (const TrialRecord& r : res.records[s]) {
      os << fmt_double(r.sigma) << ',' << r.trial << ',' << r.seed << ','
         << (r.recovered ? 1 : 0) << ',' << fmt_double(r.margin);
      if (include_wall_ms) os << ',' << fmt_double(r.wall_ms);
      os << '\n';
    }
  }
  return os.str();
}

std::string summary_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "sigma,rate,trials,mean_margin\n";
  for (const SweepRow& row : res.summary)
    os << fmt_double(row.sigma) << ',' << fmt_double(row.rate) << ',' << row.trials << ','
       << fmt_double(row.mean_margin) << '\n';
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << contents;
}

double logistic_crossing_sigma_sq(const SweepResult& res) {
  // IRLS on rate ~ logistic(a + b * log sigma^2), weighted by trial counts.
  std::vector<double> t, p, w;
  for (const SweepRow& row : res.summary) {
    if (row.sigma <= 0) continue;
    t.push_back(2.0 * std::log(row.sigma));
    p.push_back(std::min(0.999, std::max(0.001, row.rate)));
    w.push_back(row.trials);
  }
  if (t.size() < 2) return -1.0;
  double a = 0.0, b = -1.0;
  for (int iter = 0; iter < 200; ++iter) {
    double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double eta = a + b * t[i];
      const double mu = 1.0 / (1.0 + std::exp(-eta));
      const double v = std::max(mu * (1.0 - mu), 1e-9);
      g0 += w[i] * (p[i] - mu);
      g1 += w[i] * (p[i] - mu) * t[i];
      h00 += w[i] * v;
      h01 += w[i] * v * t[i];
      h11 += w[i] * v * t[i] * t[i];
    }
    const double det = h00 * h11 - h01 * h01;
    if (std::fabs(det) < 1e-12) break;
    const double da = (h11 * g0 - h01 * g1) / det;
    const double db = (-h01 * g0 + h00 * g1) / det;
    a += da;
    b += db;
    if (std::fabs(da) + std::fabs(db) < 1e-12) break;
  }
  if (b >= 0) return -1.0;  // not a decreasing transition
  return std::exp(-a / b);
}

std::string threshold_csv_row(const ThresholdReport& rep, const std::string& param_json) {
  std::string quoted = "\"";
  for (char c : param_json) {
    quoted += c;
    if (c == '"') quoted += '"';
  }
  quoted += '"';
  std::ostringstream os;
  os << formula_id(rep.formula) << ',' << rep.n << ',' << rep.k << ',' << quoted << ','
     << fmt_double(rep.sigma_sq_critical) << '\n';
  return os.str();
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "experiment.model") cfg.model = parse_model(value);
    else if (key == "experiment.estimator") {
      if (value == "mle") cfg.estimator = EstimatorKind::Mle;
      else if (value == "sdp") cfg.estimator = EstimatorKind::Sdp;
      else throw std::invalid_argument("unknown estimator: " + value);
    }
    else if (key == "experiment.space") cfg.space = parse_space(value);
    else if (key == "experiment.n") cfg.n = std::stoi(value);
    else if (key == "experiment.k") cfg.k = std::stoi(value);
    else if (key == "experiment.colors") {
      cfg.colors.clear();
      for (const std::string& item : split(value, ',')) cfg.colors.push_back(std::stod(item));
    }
    else if (key == "experiment.group_sizes") {
      cfg.group_sizes.clear();
      for (const std::string& item : split(value, ',')) cfg.group_sizes.push_back(std::stoi(item));
    }
    else if (key == "experiment.min_fraction") cfg.min_fraction = std::stod(value);
    else if (key == "experiment.trials") cfg.trials = std::stoi(value);
    else if (key == "experiment.seed") cfg.base_seed = std::stoull(value);
    else if (key == "experiment.threads") cfg.threads = std::stoi(value);
    else if (key == "experiment.enumeration_cap") cfg.enumeration_cap = std::stoull(value);
    else if (key == "grid.relative") cfg.grid.relative = (value == "true" || value == "1");
    else if (key == "grid.lo") cfg.grid.lo = std::stod(value);
    else if (key == "grid.hi") cfg.grid.hi = std::stod(value);
    else if (key == "grid.steps") cfg.grid.steps = std::stoi(value);
    else if (key == "grid.sigmas") {
      cfg.grid.explicit_sigmas.clear();
      for (const std::string& item : split(value, ','))
        cfg.grid.explicit_sigmas.push_back(std::stod(item));
    }
    else if (key == "solver.max_iters") cfg.solver.max_iters = std::stoi(value);
    else if (key == "solver.rho") cfg.solver.rho = std::stod(value);
    else if (key == "solver.over_relax") cfg.solver.over_relax = std::stod(value);
    else if (key == "solver.tol_primal") cfg.solver.tol_primal = std::stod(value);
    else if (key == "solver.tol_constraint") cfg.solver.tol_constraint = std::stod(value);
    else if (key == "solver.tol_dual") cfg.solver.tol_dual = std::stod(value);
    else if (key == "output.path") cfg.output_path = value;
    else if (key == "output.timing") cfg.include_wall_ms = (value == "true" || value == "1");
    else throw std::invalid_argument("config line " + std::to_string(lineno) +
                                     ": unknown key " + key);
  }
  return cfg;
}

}  // namespace kpartite
