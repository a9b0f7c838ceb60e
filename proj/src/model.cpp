#include "kpartite/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace kpartite {

Palette Palette::reals(std::vector<double> values) {
  if (values.size() < 2) throw std::invalid_argument("palette needs k >= 2 colors");
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j])
        throw std::invalid_argument("palette colors must be pairwise distinct");
  int k = static_cast<int>(values.size());
  return Palette(PaletteKind::RealColors, k, std::move(values));
}

Palette Palette::roots(int k) {
  if (k < 2) throw std::invalid_argument("palette needs k >= 2 colors");
  return Palette(PaletteKind::RootsOfUnity, k, {});
}

double Palette::value(int i) const {
  if (kind_ != PaletteKind::RealColors)
    throw std::domain_error("value() requires a real-colors palette");
  return values_.at(i);
}

std::complex<double> Palette::unit(int i) const {
  if (kind_ != PaletteKind::RootsOfUnity)
    throw std::domain_error("unit() requires a roots-of-unity palette");
  if (i < 0 || i >= k_) throw std::out_of_range("color index");
  const double angle = 2.0 * M_PI * i / k_;
  return {std::cos(angle), std::sin(angle)};
}

std::string Palette::to_line() const {
  std::ostringstream os;
  if (kind_ == PaletteKind::RootsOfUnity) {
    os << "roots " << k_;
  } else {
    os << k_;
    char buf[40];
    for (double v : values_) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      os << buf;
    }
  }
  return os.str();
}

Palette Palette::from_line(const std::string& line) {
  std::istringstream is(line);
  std::string first;
  if (!(is >> first)) throw std::invalid_argument("empty palette line");
  if (first == "roots") {
    int k = 0;
    if (!(is >> k)) throw std::invalid_argument("bad roots palette line");
    return roots(k);
  }
  int k = std::stoi(first);
  std::vector<double> vals(k);
  for (int i = 0; i < k; ++i)
    if (!(is >> vals[i])) throw std::invalid_argument("bad palette line");
  return reals(std::move(vals));
}

bool Palette::operator==(const Palette& o) const {
  return kind_ == o.kind_ && k_ == o.k_ && values_ == o.values_;
}

std::vector<int> Assignment::group_sizes() const {
  std::vector<int> sizes(k(), 0);
  for (int c : colors) {
    if (c < 0 || c >= k()) throw std::invalid_argument("color index out of palette range");
    ++sizes[c];
  }
  return sizes;
}

std::string Assignment::to_line(const std::string& mode) const {
  std::ostringstream os;
  os << n() << ' ' << k() << ' ' << mode;
  for (int c : colors) os << ' ' << c;
  return os.str();
}

Assignment Assignment::from_line(const std::string& line, const Palette& palette) {
  std::istringstream is(line);
  int n = 0, k = 0;
  std::string mode;
  if (!(is >> n >> k >> mode)) throw std::invalid_argument("bad assignment line");
  if (k != palette.size()) throw std::invalid_argument("assignment k does not match palette");
  std::vector<int> colors(n);
  for (int i = 0; i < n; ++i) {
    if (!(is >> colors[i])) throw std::invalid_argument("bad assignment line");
    if (colors[i] < 0 || colors[i] >= k) throw std::invalid_argument("color index out of range");
  }
  return Assignment{palette, std::move(colors)};
}

SampleSpace SampleSpace::omega(int n, int k) {
  if (n < 1 || k < 2) throw std::invalid_argument("omega needs n >= 1, k >= 2");
  return SampleSpace{SpaceKind::Omega, n, k, {}, 0.0};
}

SampleSpace SampleSpace::fixed_counts(std::vector<int> counts) {
  if (counts.size() < 2) throw std::invalid_argument("fixed-counts needs k >= 2");
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i - 1] < counts[i])
      throw std::invalid_argument("fixed counts must satisfy n_1 >= ... >= n_k");
  if (counts.back() < 1) throw std::invalid_argument("fixed counts must be >= 1");
  int n = std::accumulate(counts.begin(), counts.end(), 0);
  int k = static_cast<int>(counts.size());
  return SampleSpace{SpaceKind::OmegaFixedCounts, n, k, std::move(counts), 0.0};
}

SampleSpace SampleSpace::min_fraction_space(int n, int k, double c) {
  if (c <= 0.0 || c > 1.0) throw std::invalid_argument("min fraction must be in (0,1]");
  SampleSpace s = omega(n, k);
  s.kind = SpaceKind::OmegaMinFraction;
  s.min_fraction = c;
  return s;
}

SampleSpace SampleSpace::theta(int n, int k) {
  if (k < 2 || n < k || n % k != 0)
    throw std::invalid_argument("theta-A requires k | n");
  return SampleSpace{SpaceKind::ThetaA, n, k, std::vector<int>(k, n / k), 0.0};
}

bool SampleSpace::contains(const Assignment& x) const {
  if (x.n() != n || x.k() != k) return false;
  switch (kind) {
    case SpaceKind::Omega:
      return true;
    case SpaceKind::OmegaFixedCounts: {
      std::vector<int> g = x.group_sizes();
      return g == counts;
    }
    case SpaceKind::OmegaMinFraction: {
      const int need = static_cast<int>(std::ceil(min_fraction * n));
      std::vector<int> g = x.group_sizes();
      return *std::min_element(g.begin(), g.end()) >= need;
    }
    case SpaceKind::ThetaA: {
      if (!x.palette.is_roots()) return false;
      std::vector<int> g = x.group_sizes();
      return std::all_of(g.begin(), g.end(), [&](int v) { return v == n / k; });
    }
  }
  return false;
}

double SampleSpace::count_estimate() const {
  switch (kind) {
    case SpaceKind::Omega:
    case SpaceKind::OmegaMinFraction:
      return std::pow(static_cast<double>(k), n);
    case SpaceKind::OmegaFixedCounts:
    case SpaceKind::ThetaA: {
      double lg = std::lgamma(n + 1.0);
      for (int c : counts) lg -= std::lgamma(c + 1.0);
      return std::exp(lg);
    }
  }
  return 0.0;
}

std::int64_t ContingencyTable::trace() const {
  std::int64_t s = 0;
  for (int i = 0; i < k; ++i) s += t[i * k + i];
  return s;
}

std::int64_t ContingencyTable::total() const {
  return std::accumulate(t.begin(), t.end(), std::int64_t{0});
}

ContingencyTable contingency(const Assignment& x, const Assignment& y) {
  if (x.n() != y.n() || x.k() != y.k())
    throw std::invalid_argument("contingency: assignments must share n and k");
  const int k = x.k();
  ContingencyTable ct;
  ct.k = k;
  ct.t.assign(static_cast<std::size_t>(k) * k, 0);
  ct.row_marginals.assign(k, 0);
  ct.col_marginals.assign(k, 0);
  for (int l = 0; l < x.n(); ++l) {
    ++ct.at(x(l), y(l));
    ++ct.row_marginals[x(l)];
    ++ct.col_marginals[y(l)];
  }
  return ct;
}

int distance_omega(const Assignment& x, const Assignment& y) {
  if (x.n() != y.n() || x.k() != y.k())
    throw std::invalid_argument("distance: assignments must share n and k");
  int same = 0;
  for (int l = 0; l < x.n(); ++l) same += (x(l) == y(l));
  return x.n() - same;
}

int distance_theta(const Assignment& x, const Assignment& y) {
  if (!x.palette.is_roots() || !y.palette.is_roots())
    throw std::domain_error("distance_theta requires roots-of-unity palettes");
  return distance_omega(x, y);
}

bool is_equivalent(const Assignment& x, const Assignment& y, Equivalence mode) {
  if (x.n() != y.n() || x.k() != y.k())
    throw std::invalid_argument("is_equivalent: assignments must share n and k");
  const int n = x.n();
  if (mode == Equivalence::Partition) {
    // x in C(y): x(i) == x(j) iff y(i) == y(j). Check via mutual relabeling.
    const int k = x.k();
    std::vector<int> xy(k, -1), yx(k, -1);
    for (int i = 0; i < n; ++i) {
      int a = x(i), b = y(i);
      if (xy[a] == -1) xy[a] = b;
      else if (xy[a] != b) return false;
      if (yx[b] == -1) yx[b] = a;
      else if (yx[b] != a) return false;
    }
    return true;
  }
  if (!x.palette.is_roots() || !y.palette.is_roots())
    throw std::domain_error("phase equivalence requires roots-of-unity palettes");
  const int k = x.k();
  if (n == 0) return true;
  const int shift = ((x(0) - y(0)) % k + k) % k;
  for (int i = 0; i < n; ++i)
    if (((y(i) + shift) % k) != x(i)) return false;
  return true;
}

Assignment canonical_representative(const Assignment& x, Equivalence mode) {
  const int n = x.n();
  const int k = x.k();
  Assignment out = x;
  if (mode == Equivalence::Partition) {
    std::vector<int> relabel(k, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
      if (relabel[x(i)] == -1) relabel[x(i)] = next++;
      out.colors[i] = relabel[x(i)];
    }
    return out;
  }
  if (!x.palette.is_roots())
    throw std::domain_error("phase canonical form requires a roots-of-unity palette");
  if (n == 0) return out;
  const int shift = x(0);
  for (int i = 0; i < n; ++i) out.colors[i] = ((x(i) - shift) % k + k) % k;
  return out;
}

namespace {

// Depth-first assignment of positions n-1 .. 0, trying colors in ascending
// order. Visits the space in colexicographic order (vertex 0 fastest).
bool enumerate_rec(int pos, Assignment& work, std::vector<int>& remaining,
                   bool constrained, const SampleSpace& space,
                   const std::function<bool(const Assignment&)>& visit) {
  if (pos < 0) {
    if (space.kind == SpaceKind::OmegaMinFraction && !space.contains(work)) return true;
    return visit(work);
  }
  for (int c = 0; c < space.k; ++c) {
    if (constrained) {
      if (remaining[c] == 0) continue;
      --remaining[c];
    }
    work.colors[pos] = c;
    const bool keep_going = enumerate_rec(pos - 1, work, remaining, constrained, space, visit);
    if (constrained) ++remaining[c];
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

void enumerate(const SampleSpace& space, const Palette& palette,
               const std::function<bool(const Assignment&)>& visit,
               std::uint64_t cap) {
  if (palette.size() != space.k)
    throw std::invalid_argument("enumerate: palette size does not match space");
  if (space.kind == SpaceKind::ThetaA && !palette.is_roots())
    throw std::domain_error("theta-A space requires a roots-of-unity palette");
  const double est = space.count_estimate();
  if (est > static_cast<double>(cap)) throw EnumerationCapError(est, cap);

  Assignment work{palette, std::vector<int>(space.n, 0)};
  const bool constrained =
      space.kind == SpaceKind::OmegaFixedCounts || space.kind == SpaceKind::ThetaA;
  std::vector<int> remaining = constrained ? space.counts : std::vector<int>{};
  enumerate_rec(space.n - 1, work, remaining, constrained, space, visit);
}

Cycle find_cycle(const Assignment& x, const Assignment& y) {
  if (x.n() != y.n() || x.k() != y.k())
    throw std::invalid_argument("find_cycle: assignments must share n and k");
  if (x.group_sizes() != y.group_sizes())
    throw std::invalid_argument("find_cycle: assignments must share group sizes");
  if (x.colors == y.colors) throw std::invalid_argument("find_cycle: x == y has no cycle");

  const int k = x.k();
  const ContingencyTable ct = contingency(x, y);
  const std::vector<int> sizes = x.group_sizes();

  // Start from the smallest color whose diagonal entry is deficient, extend
  // along positive t-entries (smallest next color), close at the first
  // revisit, preferring the maximal closing color.
  int start = -1;
  for (int i = 0; i < k; ++i)
    if (ct(i, i) < sizes[i]) { start = i; break; }
  if (start < 0) throw std::logic_error("find_cycle: no deficient color for x != y");

  std::vector<int> path{start};
  std::vector<char> on_path(k, 0);
  on_path[start] = 1;

  auto close = [&](std::size_t from, int extra) {
    Cycle cyc;
    cyc.colors.assign(path.begin() + static_cast<std::ptrdiff_t>(from), path.end());
    if (extra >= 0) cyc.colors.push_back(extra);
    const int l = cyc.length();
    cyc.representatives.resize(l);
    for (int s = 0; s < l; ++s) {
      const int a = cyc.colors[s];
      const int b = cyc.colors[(s + 1) % l];
      int rep = -1;
      for (int v = 0; v < x.n(); ++v)
        if (x(v) == a && y(v) == b) { rep = v; break; }
      if (rep < 0) throw std::logic_error("find_cycle: empty representative set");
      cyc.representatives[s] = rep;
    }
    return cyc;
  };

  while (true) {
    const int last = path.back();
    int next = -1;
    for (int j = 0; j < k; ++j) {
      if (j == last || j == path.front()) continue;
      if (ct(last, j) > 0) { next = j; break; }
    }
    if (next < 0) throw std::logic_error("find_cycle: walk cannot extend");
    if (on_path[next]) {
      // interior revisit: close the loop at the earlier occurrence
      const std::size_t r =
          static_cast<std::size_t>(std::find(path.begin(), path.end(), next) - path.begin());
      return close(r, -1);
    }
    int g_max = -1;
    for (std::size_t g = 0; g < path.size(); ++g)
      if (ct(next, path[g]) > 0) g_max = static_cast<int>(g);
    if (g_max >= 0) return close(static_cast<std::size_t>(g_max), next);
    path.push_back(next);
    on_path[next] = 1;
    if (path.size() > static_cast<std::size_t>(k))
      throw std::logic_error("find_cycle: walk exceeded k colors");
  }
}

Assignment apply_cycle(const Assignment& y, const Cycle& cyc) {
  const int l = cyc.length();
  if (l < 2) throw std::invalid_argument("apply_cycle: cycle length must be >= 2");
  if (static_cast<int>(cyc.representatives.size()) != l)
    throw std::invalid_argument("apply_cycle: one representative per cycle edge required");
  Assignment out = y;
  for (int s = 0; s < l; ++s) {
    const int u = cyc.representatives[s];
    const int from = cyc.colors[(s + 1) % l];
    const int to = cyc.colors[s];
    if (u < 0 || u >= y.n()) throw std::invalid_argument("apply_cycle: vertex out of range");
    if (y(u) != from)
      throw std::invalid_argument("apply_cycle: representative not in claimed color block");
    out.colors[u] = to;
  }
  return out;
}

}  // namespace kpartite
