#include "kpartite/mle.hpp"

#include <cmath>
#include <set>

namespace kpartite {

namespace {

// colex order: compare from the last position down
bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace

RecoveryMode natural_recovery_mode(ModelKind model, SpaceKind space) {
  (void)space;
  switch (model) {
    case ModelKind::VectorT:
      return RecoveryMode::Exact;
    case ModelKind::PartitionR:
      return RecoveryMode::Partition;
    case ModelKind::GueU:
    case ModelKind::ConjugatedGoeV:
      return RecoveryMode::Phase;
  }
  return RecoveryMode::Exact;
}

bool recovery_check(const Assignment& estimate, const Assignment& truth, RecoveryMode mode) {
  if (estimate.n() != truth.n())
    throw std::invalid_argument("recovery_check: dimension mismatch");
  switch (mode) {
    case RecoveryMode::Exact:
      return estimate.colors == truth.colors;
    case RecoveryMode::Partition:
      return is_equivalent(estimate, truth, Equivalence::Partition);
    case RecoveryMode::Phase:
      return is_equivalent(estimate, truth, Equivalence::Phase);
  }
  return false;
}

MleResult mle(const Observation& obs, const SampleSpace& space, const MleOptions& opts) {
  const Scorer scorer(obs, space.kind);
  Palette palette = [&]() -> Palette {
    if (obs.truth) return obs.truth->palette;
    if (space.kind == SpaceKind::ThetaA) return Palette::roots(space.k);
    throw std::invalid_argument("mle: no palette available for this observation");
  }();
  const RecoveryMode merge_mode = natural_recovery_mode(obs.model, space.kind);
  const bool maximize = scorer.orientation() == Orientation::Maximize;

  auto canonical_key = [&](const Assignment& a) -> std::vector<int> {
    switch (merge_mode) {
      case RecoveryMode::Partition:
        return canonical_representative(a, Equivalence::Partition).colors;
      case RecoveryMode::Phase:
        return canonical_representative(a, Equivalence::Phase).colors;
      case RecoveryMode::Exact:
        break;
    }
    return a.colors;
  };

  bool have_best = false;
  double best = 0.0;
  Assignment argbest{palette, {}};
  std::vector<int> argbest_key;
  std::set<std::vector<int>> tied_keys;
  std::uint64_t visited = 0;

  enumerate(space, palette, [&](const Assignment& x) {
    ++visited;
    const double s = scorer(x);
    const double oriented = maximize ? s : -s;
    const double scale = std::max({have_best ? std::fabs(best) : 0.0, std::fabs(oriented), 1.0});
    if (!have_best || oriented > best + opts.tie_rel_tol * scale) {
      have_best = true;
      best = oriented;
      argbest = x;
      argbest_key = canonical_key(x);
      tied_keys.clear();
      tied_keys.insert(argbest_key);
    } else if (oriented >= best - opts.tie_rel_tol * scale) {
      std::vector<int> key = canonical_key(x);
      if (tied_keys.insert(key).second && colex_less(key, argbest_key)) {
        argbest = x;
        argbest_key = std::move(key);
      }
    }
    return true;
  }, opts.cap);

  if (!have_best) throw std::invalid_argument("mle: empty sample space");

  return MleResult{argbest,
                   maximize ? best : -best,
                   scorer.orientation(),
                   static_cast<int>(tied_keys.size()),
                   space,
                   visited};
}

}  // namespace kpartite
