#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpartite {

// Thrown when an enumeration request would exceed the configured state cap.
class EnumerationCapError : public std::runtime_error {
 public:
  EnumerationCapError(double estimate, std::uint64_t cap)
      : std::runtime_error("enumeration refused: ~" + std::to_string(estimate) +
                           " states exceed cap " + std::to_string(cap)),
        estimate_(estimate), cap_(cap) {}
  double estimate() const { return estimate_; }
  std::uint64_t cap() const { return cap_; }

 private:
  double estimate_;
  std::uint64_t cap_;
};

enum class PaletteKind { RealColors, RootsOfUnity };

// Color set: either k distinct reals, or the k-th roots of unity.
// Roots are kept as integer phase indices so products and conjugates are
// exact modulo k.
class Palette {
 public:
  static Palette reals(std::vector<double> values);
  static Palette roots(int k);

  PaletteKind kind() const { return kind_; }
  int size() const { return k_; }
  bool is_roots() const { return kind_ == PaletteKind::RootsOfUnity; }

  // Real color value c_i (RealColors only).
  double value(int i) const;
  // Unit-modulus color e^{2*pi*i*phase/k}; phase index of color i is i.
  std::complex<double> unit(int i) const;

  std::string to_line() const;
  static Palette from_line(const std::string& line);

  bool operator==(const Palette& o) const;

 private:
  Palette(PaletteKind kind, int k, std::vector<double> values)
      : kind_(kind), k_(k), values_(std::move(values)) {}
  PaletteKind kind_;
  int k_;
  std::vector<double> values_;  // empty in roots mode
};

// x: [n] -> colors, stored as 0-based indices into the palette.
struct Assignment {
  Palette palette;
  std::vector<int> colors;

  int n() const { return static_cast<int>(colors.size()); }
  int k() const { return palette.size(); }
  int operator()(int vertex) const { return colors[vertex]; }

  std::vector<int> group_sizes() const;

  std::string to_line(const std::string& mode) const;
  static Assignment from_line(const std::string& line, const Palette& palette);

  bool operator==(const Assignment& o) const {
    return palette == o.palette && colors == o.colors;
  }
};

enum class SpaceKind { Omega, OmegaFixedCounts, OmegaMinFraction, ThetaA };

struct SampleSpace {
  SpaceKind kind;
  int n = 0;
  int k = 0;
  std::vector<int> counts;    // OmegaFixedCounts: n_1 >= ... >= n_k >= 1
  double min_fraction = 0.0;  // OmegaMinFraction

  static SampleSpace omega(int n, int k);
  static SampleSpace fixed_counts(std::vector<int> counts);
  static SampleSpace min_fraction_space(int n, int k, double c);
  static SampleSpace theta(int n, int k);

  bool contains(const Assignment& x) const;
  // Number of member assignments (upper bound k^n for min-fraction spaces),
  // as a double so that huge spaces do not overflow.
  double count_estimate() const;
};

struct ContingencyTable {
  int k = 0;
  std::vector<std::int64_t> t;  // row-major k*k
  std::vector<std::int64_t> row_marginals;
  std::vector<std::int64_t> col_marginals;

  std::int64_t operator()(int i, int j) const { return t[i * k + j]; }
  std::int64_t& at(int i, int j) { return t[i * k + j]; }
  std::int64_t trace() const;
  std::int64_t total() const;
};

// l distinct colors (i_1..i_l) with representatives u_2..u_{l+1},
// u_s drawn from S_{i_{s-1}, i_s}(x, y); indices are 0-based.
struct Cycle {
  std::vector<int> colors;
  std::vector<int> representatives;
  int length() const { return static_cast<int>(colors.size()); }
};

enum class Equivalence { Partition, Phase };

ContingencyTable contingency(const Assignment& x, const Assignment& y);

int distance_omega(const Assignment& x, const Assignment& y);
int distance_theta(const Assignment& x, const Assignment& y);

bool is_equivalent(const Assignment& x, const Assignment& y, Equivalence mode);
Assignment canonical_representative(const Assignment& x, Equivalence mode);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Visits every member of the space exactly once, in colexicographic order
// (vertex 0 varies fastest). The visitor returns false to stop early.
void enumerate(const SampleSpace& space, const Palette& palette,
               const std::function<bool(const Assignment&)>& visit,
               std::uint64_t cap = kDefaultEnumerationCap);

Cycle find_cycle(const Assignment& x, const Assignment& y);
Assignment apply_cycle(const Assignment& y, const Cycle& cyc);

}  // namespace kpartite
