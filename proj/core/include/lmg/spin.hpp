#pragma once

#include <functional>

#include "lmg/linalg.hpp"

namespace lmg {

/// Collective angular momentum of N spin-1/2 particles restricted to the
/// symmetric (Dicke) subspace j = N/2.
///
/// Basis index k = 0..N holds the J_z eigenvalue m_z = k - j, so jz is
/// diag(-j, ..., j). jx is real and tridiagonal; its eigendecomposition is
/// cached because operator-valued functions of jx appear throughout the
/// rotating-frame algebra.
struct CollectiveSpinOps {
  int n_particles = 0;
  Eigen::Index dim = 0;
  CMatrix jx;
  CMatrix jy;
  CMatrix jz;
  CMatrix parity;  ///< exp(i pi (jz + j)), diagonal with entries (-1)^k
  Eigen::VectorXd jx_eigenvalues;
  Eigen::MatrixXd jx_eigenvectors;

  double spin() const { return 0.5 * n_particles; }
};

CollectiveSpinOps build_ops(int n_particles);

/// Diagonal parity matrix diag((-1)^k) of the given dimension.
CMatrix parity_matrix(Eigen::Index dim);

/// Spin coherent state |theta, phi> in the J_z basis. theta = 0 is |j,-j>.
/// Uses binomial amplitudes sqrt(C(N,k)) cos^{N-k}(theta/2) sin^k(theta/2)
/// e^{-ik phi}, which equal (1+|tau|^2)^{-j} exp(tau J+)|j,-j> with
/// tau = e^{-i phi} tan(theta/2) but stay regular at theta = pi.
CVector coherent_state(int n_particles, double theta, double phi);

/// V f(D) V^dagger for the eigendecomposition h = V D V^dagger.
CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f);

/// f(jx) through the cached eigendecomposition of ops.jx.
CMatrix function_of_jx(const CollectiveSpinOps& ops, const std::function<double(double)>& f);

struct SpinAngles {
  double theta = 0.0;
  double phi = 0.0;
  bool north_pole = false;  ///< |alpha|^2 == 1, where phi carries no information
};

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// (Q,P) on the unit disk to Bloch angles. phi = atan2(P,Q).
SpinAngles qp_to_angles(double q, double p);

/// Inverse map: alpha = Q + iP = sin(theta/2) e^{i phi}.
PhasePoint angles_to_qp(double theta, double phi);

/// Scaled coordinates X = J/N of a disk point: (Q s, P s, |alpha|^2 - 1/2)
/// with s = sqrt(1 - |alpha|^2).
Eigen::Vector3d scaled_spin(double q, double p);

struct BlochPoint {
  double q = 0.0;
  double p = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double alpha_sq = 0.0;
  /// |<J>|/N before rescaling onto the sphere of radius 1/2. Equals 1/2 for
  /// coherent states and shrinks as the state spreads.
  double radial_length = 0.0;
};

/// Projects raw expectation values <J_x>, <J_y>, <J_z> onto the Bloch sphere
/// and then onto the (Q,P) disk.
BlochPoint bloch_projection(double jx_expect, double jy_expect, double jz_expect, int n_particles);

struct SpinMoments {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
};

SpinMoments moments(const CollectiveSpinOps& ops, const CVector& psi);

/// Coherent state centred at a point of the (Q,P) disk.
CVector coherent_state_at(int n_particles, double q, double p);

}  // namespace lmg
