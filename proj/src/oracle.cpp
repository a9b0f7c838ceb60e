#include "kpartite/oracle.hpp"

#include <cmath>
#include <sstream>

#include "kpartite/matrices.hpp"
#include "kpartite/statistics.hpp"

namespace kpartite {

namespace {

std::vector<Assignment> members(const SampleSpace& space, const Palette& palette) {
  std::vector<Assignment> out;
  enumerate(space, palette, [&](const Assignment& a) {
    out.push_back(a);
    return true;
  });
  return out;
}

double inner(const RealMatrix& a, const RealMatrix& b) { return (a.array() * b.array()).sum(); }

// 2 sum_{i<j} [1 - Re(conj(x_i) x_j y_i conj(y_j))], straight from the
// pairwise definition with complex arithmetic.
double j_pairwise_direct(const Assignment& x, const Assignment& y) {
  const ComplexVector vx = unit_vector(x);
  const ComplexVector vy = unit_vector(y);
  double total = 0.0;
  for (int i = 0; i < x.n(); ++i)
    for (int j = i + 1; j < x.n(); ++j)
      total += 1.0 - (std::conj(vx(i)) * vx(j) * vy(i) * std::conj(vy(j))).real();
  return 2.0 * total;
}

struct Tally {
  long checked = 0;
  long failed = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok && failed++ == 0) first_failure = what;
  }
  OracleCheck report(const std::string& name) const {
    std::ostringstream os;
    os << checked << " comparisons";
    if (failed > 0) os << ", " << failed << " failed; first: " << first_failure;
    return {name, failed == 0, os.str()};
  }
};

std::string pair_label(const Assignment& x, const Assignment& y) {
  std::string s = "x=";
  for (int c : x.colors) s += std::to_string(c);
  s += " y=";
  for (int c : y.colors) s += std::to_string(c);
  return s;
}

void check_real_space(const std::vector<Assignment>& xs, bool fixed_counts, Tally& m_tally,
                      Tally& q_tally, Tally& l_tally, Tally& u_tally, Tally& ip_tally,
                      Tally& sign_tally) {
  std::vector<RealMatrix> g_cache, k_cache;
  g_cache.reserve(xs.size());
  k_cache.reserve(xs.size());
  for (const Assignment& a : xs) {
    g_cache.push_back(build_G(a));
    k_cache.push_back(build_K(a));
  }
  const int n = xs.front().n();
  for (std::size_t ix = 0; ix < xs.size(); ++ix) {
    const Assignment& x = xs[ix];
    for (std::size_t iy = 0; iy < xs.size(); ++iy) {
      const Assignment& y = xs[iy];
      const std::string label = pair_label(x, y);

      const double q_closed = separation(x, y, SeparationKind::Q).mean_gap;
      const double q_matrix = (g_cache[ix] - g_cache[iy]).squaredNorm();
      q_tally.expect(q_closed == q_matrix, "Q " + label);
      sign_tally.expect(q_closed >= 0.0, "Q>=0 " + label);

      const double l_closed = separation(x, y, SeparationKind::L).mean_gap;
      const double l_matrix = (k_cache[ix] - k_cache[iy]).squaredNorm();
      l_tally.expect(l_closed == l_matrix, "L " + label);
      sign_tally.expect((l_closed == 0.0) == is_equivalent(x, y, Equivalence::Partition),
                        "L=0 iff partition-equivalent " + label);

      // inner-product identity for <G(x),G(y)>
      double cross = 0.0;
      const ContingencyTable ct = contingency(x, y);
      for (int i = 0; i < x.k(); ++i)
        for (int j = 0; j < x.k(); ++j)
          cross += static_cast<double>(ct(i, j)) * x.palette.value(i) * x.palette.value(j);
      double sum_x = 0.0, sum_y = 0.0;
      for (int c : x.colors) sum_x += x.palette.value(c);
      for (int c : y.colors) sum_y += y.palette.value(c);
      const double ip_closed = 2.0 * n * cross - 2.0 * sum_x * sum_y;
      ip_tally.expect(ip_closed == inner(g_cache[ix], g_cache[iy]), "pgxy " + label);

      if (fixed_counts) {
        const double m_closed = separation(x, y, SeparationKind::M).mean_gap;
        const double m_matrix = -inner(g_cache[iy], g_cache[ix] - g_cache[iy]);
        m_tally.expect(m_closed == m_matrix, "M " + label);
        sign_tally.expect(m_closed >= 0.0 && (m_closed == 0.0) == (x.colors == y.colors),
                          "M=0 iff x=y " + label);

        const double u_closed = separation(x, y, SeparationKind::U).mean_gap;
        const double u_matrix = inner(k_cache[iy], k_cache[iy] - k_cache[ix]);
        u_tally.expect(u_closed == u_matrix, "U " + label);
        const double l_here = separation(x, y, SeparationKind::L).mean_gap;
        u_tally.expect(2.0 * u_closed == l_here, "ulr " + label);
        sign_tally.expect((u_closed == 0.0) == is_equivalent(x, y, Equivalence::Partition),
                          "U=0 iff partition-equivalent " + label);
      }
    }
  }
}

void check_theta_space(const std::vector<Assignment>& xs, Tally& j_tally, Tally& sign_tally) {
  for (const Assignment& x : xs) {
    for (const Assignment& y : xs) {
      const std::string label = pair_label(x, y);
      const double j_closed = separation(x, y, SeparationKind::J).mean_gap;
      const double j_direct = j_pairwise_direct(x, y);
      const double scale = std::max({1.0, std::fabs(j_closed), std::fabs(j_direct)});
      j_tally.expect(std::fabs(j_closed - j_direct) <= 1e-12 * scale, "J " + label);
      sign_tally.expect(j_closed >= -1e-12 * scale, "J>=0 " + label);
      const bool zero = std::fabs(j_closed) <= 1e-9;
      sign_tally.expect(zero == is_equivalent(x, y, Equivalence::Phase),
                        "J=0 iff phase-equivalent " + label);
    }
  }
}

}  // namespace

std::vector<OracleCheck> run_oracle_checks() {
  Tally m_tally, q_tally, l_tally, u_tally, j_tally, ip_tally, sign_tally;

  {
    const Palette pal = Palette::reals({0.0, 2.0});
    check_real_space(members(SampleSpace::omega(8, 2), pal), false, m_tally, q_tally, l_tally,
                     u_tally, ip_tally, sign_tally);
    check_real_space(members(SampleSpace::fixed_counts({4, 4}), pal), true, m_tally, q_tally,
                     l_tally, u_tally, ip_tally, sign_tally);
  }
  {
    const Palette pal = Palette::reals({0.0, 1.0, 3.0});
    check_real_space(members(SampleSpace::omega(6, 3), pal), false, m_tally, q_tally, l_tally,
                     u_tally, ip_tally, sign_tally);
    check_real_space(members(SampleSpace::fixed_counts({2, 2, 2}), pal), true, m_tally, q_tally,
                     l_tally, u_tally, ip_tally, sign_tally);
    check_real_space(members(SampleSpace::fixed_counts({4, 2, 2}), pal), true, m_tally, q_tally,
                     l_tally, u_tally, ip_tally, sign_tally);
  }
  {
    check_theta_space(members(SampleSpace::theta(8, 2), Palette::roots(2)), j_tally, sign_tally);
    check_theta_space(members(SampleSpace::theta(6, 3), Palette::roots(3)), j_tally, sign_tally);
  }

  return {
      m_tally.report("M closed form vs matrix definition (exact)"),
      q_tally.report("Q closed form vs squared Frobenius distance (exact)"),
      l_tally.report("L closed form vs block-matrix distance (exact)"),
      u_tally.report("U closed form vs alignment definition and half-L (exact)"),
      j_tally.report("J contingency form vs pairwise definition"),
      ip_tally.report("difference-matrix inner-product identity (exact)"),
      sign_tally.report("positivity and equality cases"),
  };
}

}  // namespace kpartite
