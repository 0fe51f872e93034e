#include "lmg/spin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lmg/error.hpp"

namespace lmg {

namespace {

constexpr double kHermitianTolerance = 1e-10;

}  // namespace

CMatrix parity_matrix(Eigen::Index dim) {
  CMatrix parity = CMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) parity(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return parity;
}

CollectiveSpinOps build_ops(int n_particles) {
  if (n_particles < 1)
    throw InvalidParameter("build_ops: particle number must be >= 1, got " +
                           std::to_string(n_particles));

  CollectiveSpinOps ops;
  ops.n_particles = n_particles;
  ops.dim = n_particles + 1;
  const double j = ops.spin();
  const Eigen::Index d = ops.dim;

  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
  Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    const double m = static_cast<double>(k) - j;
    raise(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }

  const Eigen::MatrixXd jx_real = 0.5 * (raise + raise.transpose());
  ops.jx = jx_real.cast<Complex>();
  ops.jy = (raise - raise.transpose()).cast<Complex>() / (2.0 * kI);
  ops.jz = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) ops.jz(k, k) = static_cast<double>(k) - j;
  ops.parity = parity_matrix(d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jx_real);
  ops.jx_eigenvalues = solver.eigenvalues();
  ops.jx_eigenvectors = solver.eigenvectors();
  return ops;
}

CVector coherent_state(int n_particles, double theta, double phi) {
  if (n_particles < 1) throw InvalidParameter("coherent_state: particle number must be >= 1");
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw InvalidParameter("coherent_state: theta must lie in [0, pi], got " + std::to_string(theta));

  const int n = n_particles;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double log_n_fact = std::lgamma(n + 1.0);

  CVector psi(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double log_binom = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double magnitude = std::exp(0.5 * log_binom) * std::pow(c, n - k) * std::pow(s, k);
    psi(k) = magnitude * std::exp(-kI * (static_cast<double>(k) * phi));
  }
  // The amplitudes are normalized analytically; this only removes rounding.
  psi /= psi.norm();
  return psi;
}

CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f) {
  if (h.rows() != h.cols()) throw InvalidParameter("hermitian_function: matrix is not square");
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance * std::max(1.0, h.norm()))
    throw InvalidParameter("hermitian_function: input is not Hermitian (defect " +
                           std::to_string(defect) + ")");

  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  const Eigen::VectorXd& d = solver.eigenvalues();
  Eigen::VectorXcd fd(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) fd(i) = f(d(i));
  const CMatrix& v = solver.eigenvectors();
  return v * fd.asDiagonal() * v.adjoint();
}

CMatrix function_of_jx(const CollectiveSpinOps& ops, const std::function<double(double)>& f) {
  Eigen::VectorXd fd(ops.dim);
  for (Eigen::Index i = 0; i < ops.dim; ++i) fd(i) = f(ops.jx_eigenvalues(i));
  const Eigen::MatrixXd& v = ops.jx_eigenvectors;
  const Eigen::MatrixXd result = v * fd.asDiagonal() * v.transpose();
  return result.cast<Complex>();
}

SpinAngles qp_to_angles(double q, double p) {
  const double alpha_sq = q * q + p * p;
  if (alpha_sq > 1.0 + 1e-12)
    throw DomainError("qp_to_angles: point (" + std::to_string(q) + ", " + std::to_string(p) +
                      ") lies outside the unit disk");

  SpinAngles angles;
  const double arg = std::clamp(2.0 * alpha_sq - 1.0, -1.0, 1.0);
  angles.theta = std::numbers::pi - std::acos(arg);
  if (alpha_sq >= 1.0) {
    angles.theta = std::numbers::pi;
    angles.phi = 0.0;
    angles.north_pole = true;
    return angles;
  }
  angles.phi = (q == 0.0 && p == 0.0) ? 0.0 : std::atan2(p, q);
  return angles;
}

PhasePoint angles_to_qp(double theta, double phi) {
  const double r = std::sin(0.5 * theta);
  return {r * std::cos(phi), r * std::sin(phi)};
}

Eigen::Vector3d scaled_spin(double q, double p) {
  const double alpha_sq = q * q + p * p;
  const double s = std::sqrt(std::max(0.0, 1.0 - alpha_sq));
  return {q * s, p * s, alpha_sq - 0.5};
}

BlochPoint bloch_projection(double jx_expect, double jy_expect, double jz_expect, int n_particles) {
  if (n_particles < 1) throw InvalidParameter("bloch_projection: particle number must be >= 1");
  const Eigen::Vector3d v = Eigen::Vector3d(jx_expect, jy_expect, jz_expect) / n_particles;
  const double length = v.norm();
  if (!(length > 0.0)) throw DegenerateDirection("bloch_projection: zero-length spin vector");

  const Eigen::Vector3d x = 0.5 * v / length;
  BlochPoint point;
  point.radial_length = length;
  point.theta = std::acos(std::clamp(-2.0 * x.z(), -1.0, 1.0));
  point.phi = std::atan2(x.y(), x.x());
  const PhasePoint qp = angles_to_qp(point.theta, point.phi);
  point.q = qp.q;
  point.p = qp.p;
  point.alpha_sq = qp.q * qp.q + qp.p * qp.p;
  return point;
}

SpinMoments moments(const CollectiveSpinOps& ops, const CVector& psi) {
  return {expectation(ops.jx, psi), expectation(ops.jy, psi), expectation(ops.jz, psi)};
}

CVector coherent_state_at(int n_particles, double q, double p) {
  const SpinAngles angles = qp_to_angles(q, p);
  return coherent_state(n_particles, angles.theta, angles.phi);
}

}  // namespace lmg
