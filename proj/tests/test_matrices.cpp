#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kpartite/matrices.hpp"

using namespace kpartite;

namespace {
Assignment make(const Palette& pal, std::vector<int> colors) {
  return Assignment{pal, std::move(colors)};
}
}  // namespace

TEST_CASE("build_G matches the entrywise definition") {
  const Palette pal = Palette::reals({2.0, 5.0});
  const RealMatrix g = build_G(make(pal, {0, 1, 0}));
  RealMatrix want(3, 3);
  want << 0, -3, 0, 3, 0, 3, 0, -3, 0;
  CHECK((g - want).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g + g.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_G(make(Palette::roots(2), {0, 1})), std::domain_error);
}

TEST_CASE("Frobenius identities for G and K") {
  const Palette pal = Palette::reals({0.0, 1.0, 3.0});
  const Assignment x = make(pal, {0, 0, 1, 2, 2, 1, 0});
  const auto sizes = x.group_sizes();
  double g_expect = 0.0, k_expect = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double d = pal.value(i) - pal.value(j);
      g_expect += 2.0 * sizes[i] * sizes[j] * d * d;
      k_expect += 2.0 * sizes[i] * sizes[j];
    }
  CHECK(build_G(x).squaredNorm() == g_expect);
  CHECK(build_K(x).squaredNorm() == k_expect);
}

TEST_CASE("build_K depends only on the partition") {
  const Palette pal = Palette::reals({0.0, 1.0});
  const RealMatrix k = build_K(make(pal, {0, 0, 1}));
  RealMatrix want(3, 3);
  want << 0, 0, 1, 0, 0, 1, 1, 1, 0;
  CHECK((k - want).cwiseAbs().maxCoeff() == 0.0);
  // color permutation leaves K unchanged
  CHECK((build_K(make(pal, {1, 1, 0})) - k).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_P is the rank-one phase outer product") {
  const Palette pal = Palette::roots(2);
  const HermitianMatrix p = build_P(make(pal, {0, 1}));
  CHECK(p(0, 0).real() == doctest::Approx(1.0));
  CHECK(p(0, 1).real() == doctest::Approx(-1.0));
  CHECK(p(1, 0).real() == doctest::Approx(-1.0));
  CHECK(p(1, 1).real() == doctest::Approx(1.0));
  CHECK(p.imag().cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  const Palette r5 = Palette::roots(5);
  const Assignment x = make(r5, {0, 2, 4, 1, 3, 3});
  CHECK(build_P(x).squaredNorm() == doctest::Approx(36.0));
  // global phase shift cancels in P
  Assignment shifted = x;
  for (int& c : shifted.colors) c = (c + 2) % 5;
  CHECK((build_P(shifted) - build_P(x)).norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(build_P(make(Palette::reals({0.0, 1.0}), {0, 1})), std::domain_error);
}

TEST_CASE("samplers are pure functions of the key") {
  RngStream a = RngStream::keyed(42, 3, 1);
  RngStream b = RngStream::keyed(42, 3, 1);
  RngStream c = RngStream::keyed(42, 4, 1);
  const RealMatrix wa = sample_iid_gaussian(8, a);
  const RealMatrix wb = sample_iid_gaussian(8, b);
  const RealMatrix wc = sample_iid_gaussian(8, c);
  CHECK((wa - wb).cwiseAbs().maxCoeff() == 0.0);
  CHECK((wa - wc).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("iid gaussian moments at n=100") {
  RngStream rng = RngStream::keyed(7, 0, 0);
  const RealMatrix w = sample_iid_gaussian(100, rng);
  const double mean = w.mean();
  const double var = (w.array() - mean).square().mean();
  CHECK(std::fabs(mean) < 4.0 / 100.0);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("GOE sampler is exactly symmetric with matching moments") {
  RngStream rng = RngStream::keyed(11, 0, 0);
  const RealMatrix w = sample_goe(60, rng);
  CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
  double var = 0.0;
  int count = 0;
  for (int i = 0; i < 60; ++i)
    for (int j = i; j < 60; ++j) {
      var += w(i, j) * w(i, j);
      ++count;
    }
  CHECK(var / count == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("GOE spectral edge sits at twice the square root of n") {
  // all entries have variance 1, so the semicircle radius is 2 sqrt(n)
  const int n = 300;
  double mean_top = 0.0;
  for (int t = 0; t < 20; ++t) {
    RngStream rng = RngStream::keyed(55, t, 0);
    const RealMatrix w = sample_goe(n, rng);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(w, Eigen::EigenvaluesOnly);
    mean_top += es.eigenvalues()(n - 1);
  }
  mean_top /= 20.0;
  const double edge = 2.0 * std::sqrt(static_cast<double>(n));
  CHECK(mean_top == doctest::Approx(edge).epsilon(0.05));
}

TEST_CASE("GUE sampler is Hermitian with unit off-diagonal second moment") {
  RngStream rng = RngStream::keyed(13, 0, 0);
  const int n = 120;
  const HermitianMatrix w = sample_gue(n, rng);
  CHECK((w - w.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < n; ++i) CHECK(w(i, i).imag() == 0.0);
  double second = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      second += std::norm(w(i, j));
      ++count;
    }
  CHECK(second / count == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("observe with sigma=0 returns the clean model matrix") {
  const Palette pal = Palette::reals({0.0, 1.0});
  const Assignment y = make(pal, {0, 1, 1, 0});
  RngStream rng = RngStream::keyed(1, 0, 1);
  const Observation t = observe(y, ModelKind::VectorT, 0.0, rng);
  CHECK((t.real_mat - build_G(y)).cwiseAbs().maxCoeff() == 0.0);

  const Palette r3 = Palette::roots(3);
  const Assignment z = make(r3, {0, 1, 2, 0, 1, 2});
  RngStream rng2 = RngStream::keyed(1, 0, 1);
  const Observation v = observe(z, ModelKind::ConjugatedGoeV, 0.0, rng2);
  CHECK((v.herm_mat - build_P(z)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(observe(z, ModelKind::VectorT, 0.0, rng2), std::domain_error);
  CHECK_THROWS_AS(observe(y, ModelKind::GueU, 0.0, rng2), std::domain_error);
}

TEST_CASE("conjugated GOE observation unwinds to ones plus noise") {
  const Palette r4 = Palette::roots(4);
  const Assignment y = make(r4, {0, 1, 2, 3, 1, 0, 3, 2});
  const double sigma = 0.7;
  RngStream rng = RngStream::keyed(99, 5, 1);
  const Observation v = observe(y, ModelKind::ConjugatedGoeV, sigma, rng);
  RngStream rng_same = RngStream::keyed(99, 5, 1);
  const RealMatrix ws = sample_goe(8, rng_same);

  const ComplexVector u = unit_vector(y);
  HermitianMatrix unwound(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      unwound(i, j) = std::conj(u(i)) * v.herm_mat(i, j) * u(j);
  HermitianMatrix want = HermitianMatrix::Ones(8, 8) + sigma * ws.cast<std::complex<double>>();
  CHECK((unwound - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("laplacian kills the ones vector") {
  const HermitianMatrix ones = HermitianMatrix::Ones(5, 5);
  const HermitianMatrix lap = laplacian(ones);
  HermitianMatrix want = 5.0 * HermitianMatrix::Identity(5, 5) - ones;
  CHECK((lap - want).cwiseAbs().maxCoeff() == 0.0);

  RngStream rng = RngStream::keyed(3, 0, 0);
  const HermitianMatrix w = sample_gue(7, rng);
  CHECK((laplacian(w) * ComplexVector::Ones(7)).cwiseAbs().maxCoeff() < 1e-12);
  const HermitianMatrix zero = HermitianMatrix::Zero(4, 4);
  CHECK(laplacian(zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix dump format") {
  RealMatrix m(2, 2);
  m << 1.0, 0.5, -2.0, 3.0;
  std::ostringstream os;
  dump_matrix(os, m);
  CHECK(os.str() == "1 0.5\n-2 3\n");

  HermitianMatrix h(1, 1);
  h(0, 0) = {2.0, 0.0};
  std::ostringstream os2;
  dump_matrix(os2, h);
  CHECK(os2.str() == "2\n0\n");
}
