#pragma once

#include "kpartite/statistics.hpp"

namespace kpartite {

struct MleOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  double tie_rel_tol = 1e-9;
};

struct MleResult {
  Assignment argbest;
  double best_score = 0.0;
  Orientation orientation = Orientation::Maximize;
  int tie_count = 1;  // distinct equivalence classes attaining the best score
  SampleSpace space;
  std::uint64_t states_visited = 0;
};

enum class RecoveryMode { Exact, Partition, Phase };

// Exhaustive scan of the sample space for the best-scoring assignment.
// Equal scores merge under the space's natural equivalence (strict equality
// for vector-T, color permutations for partition-R, global phase for theta-A);
// ties break toward the smallest canonical representative in enumeration
// order.
MleResult mle(const Observation& obs, const SampleSpace& space, const MleOptions& opts = {});

bool recovery_check(const Assignment& estimate, const Assignment& truth, RecoveryMode mode);

// The equivalence a (model, space) estimator can recover up to.
RecoveryMode natural_recovery_mode(ModelKind model, SpaceKind space);

}  // namespace kpartite
