#include "kpartite/sdp.hpp"

#include <cmath>

namespace kpartite {

namespace {

void require_hermitian(const HermitianMatrix& v, const char* who) {
  if (v.rows() != v.cols()) throw std::invalid_argument(std::string(who) + ": square input required");
  const double asym = (v - v.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(who) + ": input is not Hermitian");
}

ComplexVector unit_phases(const ComplexVector& w, const ComplexVector& fallback) {
  ComplexVector z(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double m = std::abs(w(i));
    z(i) = (m > 1e-300) ? w(i) / m : fallback(i);
  }
  return z;
}

// analytic dual candidate anchored at a unit-modulus vector
HermitianMatrix certificate_matrix(const HermitianMatrix& v, const ComplexVector& z) {
  const Eigen::Index n = v.rows();
  HermitianMatrix b(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      b(i, j) = std::conj(z(i)) * v(i, j) * z(j);
  HermitianMatrix lap = laplacian(b);
  HermitianMatrix s(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      s(i, j) = 2.0 * z(i) * lap(i, j) * std::conj(z(j));
  return s;
}

// generalized power steps toward a locally aligned unit-modulus vector
ComplexVector power_polish(const HermitianMatrix& v, ComplexVector z, int max_steps) {
  for (int step = 0; step < max_steps; ++step) {
    ComplexVector next = unit_phases(v * z, z);
    const double delta = (next - z).cwiseAbs().maxCoeff();
    z = std::move(next);
    if (delta < 1e-13) break;
  }
  return z;
}

ComplexVector spectral_estimate(const HermitianMatrix& v) {
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(v);
  const ComplexVector top = es.eigenvectors().col(v.rows() - 1);
  ComplexVector ones = ComplexVector::Ones(v.rows());
  return unit_phases(top, ones);
}

}  // namespace

RealMatrix real_embed(const HermitianMatrix& v) {
  require_hermitian(v, "real_embed");
  const Eigen::Index n = v.rows();
  RealMatrix t(2 * n, 2 * n);
  t.topLeftCorner(n, n) = v.real();
  t.bottomRightCorner(n, n) = v.real();
  t.topRightCorner(n, n) = -v.imag();
  t.bottomLeftCorner(n, n) = v.imag();
  return t;
}

HermitianMatrix real_extract(const RealMatrix& t) {
  if (t.rows() != t.cols() || t.rows() % 2 != 0)
    throw std::invalid_argument("real_extract: 2n x 2n input required");
  const Eigen::Index n = t.rows() / 2;
  HermitianMatrix v(n, n);
  v.real() = 0.5 * (t.topLeftCorner(n, n) + t.bottomRightCorner(n, n));
  v.imag() = 0.5 * (t.bottomLeftCorner(n, n) - t.topRightCorner(n, n));
  return v;
}

SdpSolution solve_sdp(const HermitianMatrix& v, const SdpParams& params) {
  require_hermitian(v, "solve_sdp");
  const Eigen::Index n = v.rows();
  const double nd = static_cast<double>(n);
  const double rho = params.rho > 0 ? params.rho : nd;
  const double alpha = params.over_relax;

  // Warm start: generalized-power polish of the leading eigenvector gives the
  // primal guess; the analytic certificate at that point gives the dual guess
  // whenever it is a valid normal-cone element (PSD up to roundoff).
  const ComplexVector z0 = power_polish(v, spectral_estimate(v), 300);
  HermitianMatrix x_guess = z0 * z0.adjoint();
  RealMatrix z_it = real_embed(x_guess);
  RealMatrix u_it = RealMatrix::Zero(2 * n, 2 * n);
  {
    const HermitianMatrix s_guess = certificate_matrix(v, z0);
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(s_guess, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) >= -1e-9 * std::max(1.0, s_guess.norm()))
      u_it = real_embed(s_guess) / (2.0 * rho);
  }

  const RealMatrix c_embed = real_embed(v);
  RealMatrix x_it = z_it;

  SdpSolution sol;
  sol.X = x_guess;
  double diag_dev = 0.0;
  int it = 0;
  for (it = 1; it <= params.max_iters; ++it) {
    // (a) PSD-cone projection: clip negative eigenvalues of the embedded iterate
    RealMatrix a = z_it - u_it;
    a = 0.5 * (a + a.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
    const Eigen::VectorXd& ev = es.eigenvalues();
    Eigen::Index first_pos = 0;
    while (first_pos < ev.size() && ev(first_pos) <= 0.0) ++first_pos;
    const Eigen::Index rank = ev.size() - first_pos;
    if (rank == 0) {
      x_it.setZero();
    } else {
      const auto q = es.eigenvectors().rightCols(rank);
      x_it.noalias() = q * ev.tail(rank).asDiagonal() * q.transpose();
    }

    // (b) affine projection: block ties via extract/embed and unit diagonal
    const RealMatrix relaxed = alpha * x_it + (1.0 - alpha) * z_it;
    HermitianMatrix m = real_extract(relaxed + u_it + c_embed / rho);
    m = 0.5 * (m + m.adjoint()).eval();
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1.0;
    const RealMatrix z_next = real_embed(m);

    u_it += relaxed - z_next;

    const HermitianMatrix x_c = real_extract(x_it);
    const double r = (x_c - m).norm();
    const double s = rho * (m - real_extract(z_it)).norm();
    z_it = z_next;

    diag_dev = (x_c.diagonal().real().array() - 1.0).abs().maxCoeff() +
               x_c.diagonal().imag().array().abs().maxCoeff();
    sol.X = x_c;
    sol.primal_residual = r;
    sol.constraint_residual = diag_dev;
    if (r <= params.tol_primal * nd && s <= params.tol_dual * nd &&
        diag_dev <= params.tol_constraint * nd) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = std::min(it, params.max_iters);
  return sol;
}

Assignment round_solution(const HermitianMatrix& x, int k) {
  if (k < 2) throw std::invalid_argument("round_solution: k >= 2 required");
  require_hermitian(x, "round_solution");
  const Eigen::Index n = x.rows();
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(x);
  ComplexVector top = es.eigenvectors().col(n - 1);
  ComplexVector ones = ComplexVector::Ones(n);
  ComplexVector z = unit_phases(top, ones);
  const std::complex<double> anchor = std::conj(z(0));
  std::vector<int> colors(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double angle = std::arg(z(i) * anchor);
    const long idx = std::lround(angle * k / (2.0 * M_PI));
    colors[i] = static_cast<int>(((idx % k) + k) % k);
  }
  return Assignment{Palette::roots(k), std::move(colors)};
}

CertificateReport dual_certificate(const HermitianMatrix& v, const Assignment& y) {
  require_hermitian(v, "dual_certificate");
  if (v.rows() != y.n()) throw std::invalid_argument("dual_certificate: dimension mismatch");
  const ComplexVector z = unit_vector(y);
  CertificateReport rep;
  rep.S = certificate_matrix(v, z);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(rep.S, Eigen::EigenvaluesOnly);
  rep.lambda_min = es.eigenvalues()(0);
  rep.lambda_second = es.eigenvalues()(1);
  rep.null_vector_residual = (rep.S * z).norm();
  const double s_norm = rep.S.norm();
  const double n = static_cast<double>(y.n());
  const double tol_psd = 1e-8 * s_norm;
  const double tol_gap = 1e-6 * n;
  const double tol_null = 1e-8 * s_norm * std::sqrt(n);
  rep.certified = rep.lambda_min >= -tol_psd && rep.lambda_second > tol_gap &&
                  rep.null_vector_residual <= tol_null;
  return rep;
}

double spectral_norm(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_norm: square input required");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("spectral_norm: symmetric input required");
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const HermitianMatrix& m) {
  require_hermitian(m, "spectral_norm");
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ConditionC1 certify_condition_c1(const RealMatrix& ws, double sigma, int n) {
  if (ws.rows() != ws.cols() || ws.rows() != n)
    throw std::invalid_argument("certify_condition_c1: n x n symmetric input required");
  if ((ws - ws.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, ws.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("certify_condition_c1: symmetric input required");
  ConditionC1 out;
  const RealMatrix lap = laplacian(ws);
  const double lap_norm = spectral_norm(lap);
  out.lhs = sigma * lap_norm;
  out.holds = out.lhs <= static_cast<double>(n);
  const double max_row = ws.rowwise().sum().cwiseAbs().maxCoeff();
  out.majorant = max_row + spectral_norm(ws);
  return out;
}

}  // namespace kpartite
