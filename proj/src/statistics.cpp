#include "kpartite/statistics.hpp"

#include <cmath>

namespace kpartite {

namespace {

void require_pair(const Assignment& x, const Assignment& y) {
  if (x.n() != y.n() || x.k() != y.k())
    throw std::invalid_argument("assignments must share n and k");
}

double color_sum(const Assignment& a) {
  double s = 0.0;
  for (int c : a.colors) s += a.palette.value(c);
  return s;
}

// Shared evaluation of sum_u counts[u] * (1 - cos(2 pi u / k)) so both
// residue-count routes produce bitwise-identical values.
double phase_residue_sum(const std::vector<std::int64_t>& counts, int k) {
  double total = 0.0;
  for (int u = 1; u < k; ++u)
    total += static_cast<double>(counts[u]) * (1.0 - std::cos(2.0 * M_PI * u / k));
  return total;
}

// Counts of ordered vertex pairs per phase residue, from the contingency
// table: residue of a pair of table cells (i,j),(p,q) is (p+j-q-i) mod k.
std::vector<std::int64_t> residue_counts_contingency(const ContingencyTable& ct) {
  const int k = ct.k;
  std::vector<std::int64_t> diag_class(k, 0);  // mass per (i-j) mod k
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      diag_class[((i - j) % k + k) % k] += ct(i, j);
  std::vector<std::int64_t> counts(k, 0);
  for (int d = 0; d < k; ++d)
    for (int e = 0; e < k; ++e)
      counts[((d - e) % k + k) % k] += diag_class[d] * diag_class[e];
  return counts;
}

std::vector<std::int64_t> residue_counts_pairwise(const Assignment& x, const Assignment& y) {
  const int k = x.k();
  const int n = x.n();
  std::vector<std::int64_t> unordered(k, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int u = (((x(j) - x(i) + y(i) - y(j)) % k) + k) % k;
      ++unordered[u];
    }
  std::vector<std::int64_t> counts(k, 0);
  counts[0] = 2 * unordered[0] + n;  // the n diagonal pairs land in residue 0
  for (int u = 1; u < k; ++u) counts[u] = unordered[u] + unordered[k - u];
  return counts;
}

}  // namespace

Scorer::Scorer(const Observation& obs, SpaceKind space)
    : obs_(obs), space_(space), orientation_(Orientation::Maximize) {
  switch (obs.model) {
    case ModelKind::VectorT:
      if (space == SpaceKind::ThetaA)
        throw std::invalid_argument("vector-T model has no theta-A estimator");
      orientation_ =
          (space == SpaceKind::OmegaFixedCounts) ? Orientation::Maximize : Orientation::Minimize;
      row_minus_col_ = obs.real_mat.rowwise().sum() - obs.real_mat.colwise().sum().transpose();
      break;
    case ModelKind::PartitionR:
      if (space == SpaceKind::ThetaA)
        throw std::invalid_argument("partition-R model has no theta-A estimator");
      orientation_ = Orientation::Maximize;
      break;
    case ModelKind::GueU:
      if (space != SpaceKind::ThetaA)
        throw std::invalid_argument("gue-U model pairs with the theta-A space only");
      orientation_ = Orientation::Maximize;
      break;
    case ModelKind::ConjugatedGoeV:
      throw std::invalid_argument("conjugated-goe-V is estimated by the SDP, not a score");
  }
}

double Scorer::operator()(const Assignment& x) const {
  const int n = x.n();
  if (n != obs_.n()) throw std::invalid_argument("score: dimension mismatch");
  switch (obs_.model) {
    case ModelKind::VectorT: {
      // <G(x),T> = sum_i c_{x(i)} (rowsum_i - colsum_i)
      double f = 0.0;
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = x.palette.value(x(i));
        f += v * row_minus_col_(i);
        sum += v;
        sumsq += v * v;
      }
      if (space_ == SpaceKind::OmegaFixedCounts) return f;
      const double g_norm_sq = 2.0 * n * sumsq - 2.0 * sum * sum;
      return g_norm_sq - 2.0 * f;
    }
    case ModelKind::PartitionR: {
      double align = 0.0;  // <K(x),R>
      const RealMatrix& r = obs_.real_mat;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (x(i) != x(j)) align += r(i, j);
      if (space_ == SpaceKind::OmegaFixedCounts) return align;
      std::vector<int> sizes = x.group_sizes();
      double sq = 0.0;
      for (int s : sizes) sq += static_cast<double>(s) * s;
      return sq + 2.0 * align;
    }
    case ModelKind::GueU: {
      const ComplexVector v = unit_vector(x);
      return v.dot(obs_.herm_mat * v).real();
    }
    case ModelKind::ConjugatedGoeV:
      break;
  }
  throw std::logic_error("unreachable score path");
}

ScoreValue score(const Assignment& x, const Observation& obs, SpaceKind space) {
  Scorer scorer(obs, space);
  return {scorer(x), scorer.orientation()};
}

Separation separation(const Assignment& x, const Assignment& y, SeparationKind kind) {
  require_pair(x, y);
  const int n = x.n();
  const int k = x.k();
  Separation out;
  out.kind = kind;
  switch (kind) {
    case SeparationKind::M: {
      if (x.palette.is_roots() || y.palette.is_roots())
        throw std::domain_error("M requires real colors");
      if (x.group_sizes() != y.group_sizes())
        throw std::invalid_argument("M requires equal group-size vectors");
      const ContingencyTable ct = contingency(x, y);
      double diag_term = 0.0;
      const std::vector<int> sizes = y.group_sizes();
      for (int i = 0; i < k; ++i)
        diag_term += sizes[i] * x.palette.value(i) * x.palette.value(i);
      double cross = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          cross += static_cast<double>(ct(i, j)) * x.palette.value(i) * x.palette.value(j);
      out.mean_gap = 2.0 * n * diag_term - 2.0 * n * cross;
      out.variance_coeff = 2.0;
      break;
    }
    case SeparationKind::Q: {
      if (x.palette.is_roots() || y.palette.is_roots())
        throw std::domain_error("Q requires real colors");
      const ContingencyTable ct = contingency(x, y);
      double spread = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double d = x.palette.value(i) - x.palette.value(j);
          spread += static_cast<double>(ct(i, j)) * d * d;
        }
      const double drift = color_sum(x) - color_sum(y);
      out.mean_gap = 2.0 * n * spread - 2.0 * drift * drift;
      out.variance_coeff = 4.0;
      break;
    }
    case SeparationKind::L: {
      const ContingencyTable ct = contingency(x, y);
      double sq = 0.0;
      for (std::int64_t v : ct.t) sq += static_cast<double>(v) * v;
      double gx = 0.0, gy = 0.0;
      for (int s : x.group_sizes()) gx += static_cast<double>(s) * s;
      for (int s : y.group_sizes()) gy += static_cast<double>(s) * s;
      out.mean_gap = gx + gy - 2.0 * sq;
      out.variance_coeff = 4.0;
      break;
    }
    case SeparationKind::U: {
      if (x.group_sizes() != y.group_sizes())
        throw std::invalid_argument("U requires equal group-size vectors");
      const ContingencyTable ct = contingency(x, y);
      double sq = 0.0;
      for (std::int64_t v : ct.t) sq += static_cast<double>(v) * v;
      double g = 0.0;
      for (int s : y.group_sizes()) g += static_cast<double>(s) * s;
      out.mean_gap = g - sq;
      out.variance_coeff = 2.0;
      break;
    }
    case SeparationKind::J: {
      if (!x.palette.is_roots() || !y.palette.is_roots())
        throw std::domain_error("J requires roots-of-unity palettes");
      const double nd = n;
      std::vector<std::int64_t> counts;
      if (static_cast<double>(k) * k * k * k < nd * nd)
        counts = residue_counts_contingency(contingency(x, y));
      else
        counts = residue_counts_pairwise(x, y);
      out.mean_gap = phase_residue_sum(counts, k);
      out.variance_coeff = 2.0;
      break;
    }
  }
  return out;
}

double variance_gap(const Assignment& x, const Assignment& y, SeparationKind kind,
                    double sigma) {
  const Separation sep = separation(x, y, kind);
  return sep.variance_coeff * sigma * sigma * sep.mean_gap;
}

const char* formula_id(ThresholdFormula f) {
  switch (f) {
    case ThresholdFormula::Thm1: return "thm1";
    case ThresholdFormula::Thm2: return "thm2";
    case ThresholdFormula::Thm3: return "thm3";
    case ThresholdFormula::Thm5Bound: return "thm5-bound";
  }
  return "?";
}

ThresholdReport threshold(ThresholdFormula formula, int n,
                          const std::optional<Palette>& palette,
                          const std::optional<std::vector<int>>& group_sizes) {
  if (n < 2) throw std::invalid_argument("threshold: n >= 2 required");
  const double logn = std::log(static_cast<double>(n));
  ThresholdReport rep;
  rep.formula = formula;
  rep.n = n;
  switch (formula) {
    case ThresholdFormula::Thm1: {
      if (!palette || palette->is_roots())
        throw std::invalid_argument("thm1 threshold needs a real-colors palette");
      const int k = palette->size();
      if (k < 2) throw std::invalid_argument("threshold: k >= 2 required");
      double c0 = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
          const double d = palette->value(i) - palette->value(j);
          c0 = std::min(c0, d * d);
        }
      rep.k = k;
      rep.sigma_sq_critical = n * c0 / (4.0 * logn);
      break;
    }
    case ThresholdFormula::Thm2: {
      if (!group_sizes || group_sizes->size() < 2)
        throw std::invalid_argument("thm2 threshold needs group sizes");
      std::vector<int> sizes = *group_sizes;
      std::sort(sizes.begin(), sizes.end(), std::greater<int>());
      rep.k = static_cast<int>(sizes.size());
      rep.sigma_sq_critical =
          (sizes[sizes.size() - 1] + sizes[sizes.size() - 2]) / (4.0 * logn);
      break;
    }
    case ThresholdFormula::Thm3: {
      const int k = palette ? palette->size()
                            : (group_sizes ? static_cast<int>(group_sizes->size()) : 0);
      if (k < 2) throw std::invalid_argument("thm3 threshold needs k >= 2");
      rep.k = k;
      rep.sigma_sq_critical = n * (1.0 - std::cos(2.0 * M_PI / k)) / (2.0 * logn);
      break;
    }
    case ThresholdFormula::Thm5Bound: {
      rep.k = palette ? palette->size() : 0;
      rep.sigma_sq_critical = n / (2.0 * logn);
      break;
    }
  }
  if (!(rep.sigma_sq_critical > 0))
    throw std::logic_error("threshold must be positive for n >= 2");
  return rep;
}

GaussianMaxBounds gaussian_max_bounds(double N, double eps) {
  if (N < 2) throw std::invalid_argument("gaussian_max_bounds: N >= 2 required");
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("gaussian_max_bounds: eps in (0,1) required");
  const double logN = std::log(N);
  GaussianMaxBounds b;
  b.level_hi = (1.0 + eps) * std::sqrt(2.0 * logN);
  b.upper_prob = std::pow(N, -eps);
  b.level_lo = (1.0 - eps) * std::sqrt(2.0 * logN);
  b.lower_prob = std::exp(-std::pow(N, eps));
  const double lhs = std::pow(N, eps - eps * eps) * (1.0 - eps) * std::sqrt(2.0 * logN) /
                     (std::sqrt(2.0 * M_PI) * (1.0 + 2.0 * (1.0 - eps) * (1.0 - eps) * logN));
  b.indep_condition_holds = lhs > 1.0;
  return b;
}

GaussianTailBounds gaussian_tail_bounds(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gaussian_tail_bounds: x > 0 required");
  const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return {x * density / (1.0 + x * x), density / x};
}

}  // namespace kpartite
