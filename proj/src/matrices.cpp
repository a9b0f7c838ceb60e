#include "kpartite/matrices.hpp"

#include <cstdio>
#include <ostream>

namespace kpartite {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngStream::derive_seed(std::uint64_t base_seed, std::uint64_t trial,
                                     std::uint64_t role) {
  std::uint64_t s = base_seed;
  std::uint64_t h = splitmix64(s);
  s ^= trial * 0xd1342543de82ef95ULL;
  h ^= splitmix64(s);
  s ^= role * 0xaf251af3b0f025b5ULL;
  h ^= splitmix64(s);
  return h;
}

RngStream RngStream::keyed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t role) {
  return RngStream(derive_seed(base_seed, trial, role));
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  // rejection sampling keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do { v = engine_(); } while (v >= limit);
  return v % bound;
}

RealMatrix build_G(const Assignment& x) {
  if (x.palette.is_roots())
    throw std::domain_error("build_G requires a real-colors palette");
  const int n = x.n();
  Eigen::VectorXd vals(n);
  for (int i = 0; i < n; ++i) vals(i) = x.palette.value(x(i));
  RealMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = vals(i) - vals(j);
  return g;
}

RealMatrix build_K(const Assignment& x) {
  const int n = x.n();
  RealMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = (x(i) != x(j)) ? 1.0 : 0.0;
  return m;
}

ComplexVector unit_vector(const Assignment& x) {
  if (!x.palette.is_roots())
    throw std::domain_error("unit_vector requires a roots-of-unity palette");
  const int n = x.n();
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = x.palette.unit(x(i));
  return v;
}

HermitianMatrix build_P(const Assignment& x) {
  const ComplexVector v = unit_vector(x);
  return v * v.adjoint();
}

RealMatrix sample_iid_gaussian(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_iid_gaussian: n >= 1 required");
  RealMatrix w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = rng.normal();
  return w;
}

RealMatrix sample_goe(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_goe: n >= 1 required");
  RealMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) = rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const double g = rng.normal();
      w(i, j) = g;
      w(j, i) = g;
    }
  }
  return w;
}

HermitianMatrix sample_gue(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_gue: n >= 1 required");
  HermitianMatrix w(n, n);
  const double s = 1.0 / std::sqrt(2.0);  // N(0,1)_C: variance 1/2 per component
  for (int i = 0; i < n; ++i) {
    w(i, i) = std::complex<double>(rng.normal(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> z(s * rng.normal(), s * rng.normal());
      w(i, j) = z;
      w(j, i) = std::conj(z);
    }
  }
  return w;
}

Observation observe(const Assignment& y, ModelKind model, double sigma, RngStream& rng) {
  if (sigma < 0) throw std::invalid_argument("observe: sigma must be >= 0");
  Observation obs;
  obs.model = model;
  obs.sigma = sigma;
  obs.truth = y;
  const int n = y.n();
  switch (model) {
    case ModelKind::VectorT: {
      if (y.palette.is_roots())
        throw std::domain_error("vector-T model requires real colors");
      obs.real_mat = build_G(y);
      if (sigma > 0) obs.real_mat += sigma * sample_iid_gaussian(n, rng);
      break;
    }
    case ModelKind::PartitionR: {
      obs.real_mat = build_K(y);
      if (sigma > 0) obs.real_mat += sigma * sample_iid_gaussian(n, rng);
      break;
    }
    case ModelKind::GueU: {
      obs.herm_mat = build_P(y);
      if (sigma > 0) obs.herm_mat += sigma * sample_gue(n, rng);
      break;
    }
    case ModelKind::ConjugatedGoeV: {
      const ComplexVector v = unit_vector(y);
      obs.herm_mat = v * v.adjoint();
      if (sigma > 0) {
        const RealMatrix w = sample_goe(n, rng);
        // diag(y) W diag(conj(y)): entry (i,j) = y_i W_ij conj(y_j); Hermitian
        // because W is symmetric.
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i)
            obs.herm_mat(i, j) += sigma * v(i) * w(i, j) * std::conj(v(j));
      }
      break;
    }
  }
  return obs;
}

HermitianMatrix laplacian(const HermitianMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("laplacian: square input required");
  const ComplexVector row_sums = m.rowwise().sum();
  HermitianMatrix out = -m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) += row_sums(i);
  return out;
}

RealMatrix laplacian(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("laplacian: square input required");
  const Eigen::VectorXd row_sums = m.rowwise().sum();
  RealMatrix out = -m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) += row_sums(i);
  return out;
}

namespace {
void dump_block(std::ostream& os, const RealMatrix& m) {
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      os << buf << (j + 1 < m.cols() ? " " : "");
    }
    os << '\n';
  }
}
}  // namespace

void dump_matrix(std::ostream& os, const RealMatrix& m) { dump_block(os, m); }

void dump_matrix(std::ostream& os, const HermitianMatrix& m) {
  dump_block(os, m.real());
  dump_block(os, m.imag());
}

}  // namespace kpartite
