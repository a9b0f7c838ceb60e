#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>

#include "kpartite/model.hpp"

namespace kpartite {

using RealMatrix = Eigen::MatrixXd;
using HermitianMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Stream of Gaussians keyed by (seed, trial, role) so that parallel trials
// draw identical values regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  static RngStream keyed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t role);
  static std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial,
                                   std::uint64_t role);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }
  // uniform integer in [0, bound)
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

enum class ModelKind { VectorT, PartitionR, GueU, ConjugatedGoeV };

struct Observation {
  ModelKind model;
  double sigma = 0.0;
  RealMatrix real_mat;       // VectorT / PartitionR
  HermitianMatrix herm_mat;  // GueU / ConjugatedGoeV
  std::optional<Assignment> truth;  // synthetic mode only

  bool is_real() const {
    return model == ModelKind::VectorT || model == ModelKind::PartitionR;
  }
  int n() const {
    return is_real() ? static_cast<int>(real_mat.rows())
                     : static_cast<int>(herm_mat.rows());
  }
};

// G_{ij}(x) = x(i) - x(j), real colors only.
RealMatrix build_G(const Assignment& x);
// K_{ij}(x) = 1 if x(i) != x(j) else 0.
RealMatrix build_K(const Assignment& x);
// P(x) = x xbar^t for unit-modulus colors; rank one, unit diagonal.
HermitianMatrix build_P(const Assignment& x);
ComplexVector unit_vector(const Assignment& x);

RealMatrix sample_iid_gaussian(int n, RngStream& rng);
RealMatrix sample_goe(int n, RngStream& rng);
HermitianMatrix sample_gue(int n, RngStream& rng);

Observation observe(const Assignment& y, ModelKind model, double sigma, RngStream& rng);

// Laplacian of a Hermitian matrix: diag(M 1) - M; annihilates the ones vector.
HermitianMatrix laplacian(const HermitianMatrix& m);
RealMatrix laplacian(const RealMatrix& m);

// Debug dump: row-major, %.17g. Hermitian matrices emit a real block then an
// imaginary block.
void dump_matrix(std::ostream& os, const RealMatrix& m);
void dump_matrix(std::ostream& os, const HermitianMatrix& m);

}  // namespace kpartite
