#pragma once

#include <string>
#include <vector>

#include "kpartite/mle.hpp"
#include "kpartite/sdp.hpp"
#include "kpartite/statistics.hpp"

namespace kpartite {

enum class EstimatorKind { Mle, Sdp };

struct SigmaGrid {
  bool relative = true;  // multiples of the predicted threshold sigma^2
  double lo = 0.25;
  double hi = 4.0;
  int steps = 7;
  std::vector<double> explicit_sigmas;  // absolute sigma values; overrides the band
};

struct ExperimentConfig {
  ModelKind model = ModelKind::VectorT;
  EstimatorKind estimator = EstimatorKind::Mle;
  SpaceKind space = SpaceKind::OmegaFixedCounts;
  int n = 12;
  int k = 2;
  std::vector<double> colors;     // real palette values; empty selects roots of unity
  std::vector<int> group_sizes;   // fixed-counts truth; empty selects balanced
  double min_fraction = 0.0;      // OmegaMinFraction space
  int trials = 100;
  std::uint64_t base_seed = 1;
  int threads = 0;                // 0: hardware concurrency
  SigmaGrid grid;
  SdpParams solver;
  std::string output_path = "sweep";
  bool include_wall_ms = false;   // timing column breaks byte-identical reruns
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  Palette palette() const;
  SampleSpace sample_space() const;
  SampleSpace truth_space() const;
  ThresholdFormula threshold_formula() const;
  double threshold_sigma_sq() const;
  std::vector<double> sigma_values() const;
  RecoveryMode recovery_mode() const;

  static ExperimentConfig from_file(const std::string& path);
  void validate() const;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  bool recovered = false;
  double margin = 0.0;   // MLE: best score minus truth score (oriented);
                         // SDP: second eigenvalue of the dual certificate
  double wall_ms = 0.0;
};

struct SweepRow {
  double sigma = 0.0;
  double rate = 0.0;
  int trials = 0;
  double mean_margin = 0.0;
};

struct SweepResult {
  std::vector<double> sigmas;
  std::vector<std::vector<TrialRecord>> records;  // per sigma, ordered by trial
  std::vector<SweepRow> summary;
};

TrialRecord run_trial(const ExperimentConfig& cfg, double sigma, std::uint64_t trial_index);
SweepResult sweep(const ExperimentConfig& cfg);

std::string trials_csv(const SweepResult& res, bool include_wall_ms);
std::string summary_csv(const SweepResult& res);
void write_file(const std::string& path, const std::string& contents);

// Logistic fit of rate against log sigma^2; returns the sigma^2 of the
// fitted 50% crossing, or a negative value when the fit is degenerate.
double logistic_crossing_sigma_sq(const SweepResult& res);

std::string threshold_csv_row(const ThresholdReport& rep, const std::string& param_json);

Assignment sample_truth(const SampleSpace& space, const Palette& palette, RngStream& rng);

}  // namespace kpartite
