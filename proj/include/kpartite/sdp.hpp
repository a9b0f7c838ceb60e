#pragma once

#include "kpartite/matrices.hpp"
#include "kpartite/model.hpp"

namespace kpartite {

struct SdpParams {
  int max_iters = 5000;
  double rho = 0.0;            // augmented-Lagrangian step; 0 selects n
  double over_relax = 1.5;
  double tol_primal = 1e-7;    // scaled by n
  double tol_constraint = 1e-9;  // scaled by n
  double tol_dual = 1e-6;      // scaled by n
};

struct SdpSolution {
  HermitianMatrix X;
  int iterations = 0;
  double primal_residual = 0.0;
  double constraint_residual = 0.0;
  bool converged = false;
};

struct CertificateReport {
  HermitianMatrix S;
  double lambda_min = 0.0;
  double lambda_second = 0.0;
  double null_vector_residual = 0.0;
  bool certified = false;
};

struct ConditionC1 {
  double lhs = 0.0;      // sigma * ||Laplacian(W_s)||
  bool holds = false;    // lhs <= n
  double majorant = 0.0; // max |row sum| + spectral norm
};

// Real embedding of a Hermitian matrix: [[M1, -M2], [M2, M1]] with
// M = M1 + i M2. It is symmetric, doubles eigenvalue multiplicities, and
// satisfies <embed(A), embed(B)> = 2 Re<A, B>.
RealMatrix real_embed(const HermitianMatrix& v);
HermitianMatrix real_extract(const RealMatrix& t);

// max Re<V, X> over Hermitian X with unit diagonal and X PSD, via an
// operator-splitting loop on the real embedding: PSD-cone projection by
// eigenvalue clipping alternating with projection onto the affine constraints
// (unit diagonal plus the embedding block ties), with an over-relaxed
// multiplier correction. Warm-started from the spectral estimate and its
// analytic dual candidate, so instances whose rank-one optimum is certified
// terminate in a couple of iterations.
SdpSolution solve_sdp(const HermitianMatrix& v, const SdpParams& params = {});

// Top eigenvector of X, entries normalized to unit modulus, phase-anchored at
// entry 0 and quantized to the nearest k-th roots of unity.
Assignment round_solution(const HermitianMatrix& x, int k);

// S = 2 diag(y) [Laplacian(diag(conj(y)) V diag(y))] diag(conj(y)).
// certified iff S is PSD within tolerance with a strictly positive second
// eigenvalue and y in its kernel; then y ybar^t is the unique optimum.
CertificateReport dual_certificate(const HermitianMatrix& v, const Assignment& y);

double spectral_norm(const RealMatrix& m);
double spectral_norm(const HermitianMatrix& m);

ConditionC1 certify_condition_c1(const RealMatrix& ws, double sigma, int n);

}  // namespace kpartite
