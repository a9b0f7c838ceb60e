#pragma once

#include <optional>
#include <vector>

#include "kpartite/matrices.hpp"
#include "kpartite/model.hpp"

namespace kpartite {

enum class SeparationKind { M, Q, L, U, J };
enum class Orientation { Maximize, Minimize };

struct Separation {
  double mean_gap = 0.0;
  double variance_coeff = 0.0;  // Var[score(x)-score(y)] = coeff * sigma^2 * mean_gap
  SeparationKind kind = SeparationKind::M;
};

struct ScoreValue {
  double value = 0.0;
  Orientation orientation = Orientation::Maximize;
};

// Evaluates the estimator objective matching (obs.model, space):
//   vector-T    + fixed counts -> alignment with the difference matrix (max)
//   vector-T    + free space   -> squared-residual form (min)
//   partition-R + free space   -> block objective with group-size term (max)
//   partition-R + fixed counts -> plain alignment with the block matrix (max)
//   gue-U       + theta-A      -> real part of the unitary alignment (max)
ScoreValue score(const Assignment& x, const Observation& obs, SpaceKind space);

// Precomputes per-observation data so exhaustive scans stay cheap.
class Scorer {
 public:
  Scorer(const Observation& obs, SpaceKind space);
  Orientation orientation() const { return orientation_; }
  double operator()(const Assignment& x) const;

 private:
  const Observation& obs_;
  SpaceKind space_;
  Orientation orientation_;
  Eigen::VectorXd row_minus_col_;  // vector-T fast path
};

Separation separation(const Assignment& x, const Assignment& y, SeparationKind kind);
double variance_gap(const Assignment& x, const Assignment& y, SeparationKind kind,
                    double sigma);

enum class ThresholdFormula { Thm1, Thm2, Thm3, Thm5Bound };

struct ThresholdReport {
  ThresholdFormula formula;
  int n = 0;
  int k = 0;
  double sigma_sq_critical = 0.0;
};

// Critical sigma^2 at the delta = 0 boundary. Thm1 needs the real palette,
// Thm2 the group sizes (descending), Thm3/Thm5 only n and k.
ThresholdReport threshold(ThresholdFormula formula, int n,
                          const std::optional<Palette>& palette,
                          const std::optional<std::vector<int>>& group_sizes);

const char* formula_id(ThresholdFormula f);

struct GaussianMaxBounds {
  double level_hi = 0.0;   // (1+eps) sqrt(2 log N)
  double upper_prob = 0.0; // N^{-eps}
  double level_lo = 0.0;   // (1-eps) sqrt(2 log N)
  double lower_prob = 0.0; // exp(-N^eps), valid under the independence condition
  bool indep_condition_holds = false;
};

GaussianMaxBounds gaussian_max_bounds(double N, double eps);

struct GaussianTailBounds {
  double lower = 0.0;
  double upper = 0.0;
};

GaussianTailBounds gaussian_tail_bounds(double x);

}  // namespace kpartite
