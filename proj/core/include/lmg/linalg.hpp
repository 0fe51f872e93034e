#pragma once

#include <complex>

#include <Eigen/Dense>

namespace lmg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

/// Frobenius norm of a - a^dagger.
inline double hermiticity_defect(const CMatrix& a) { return (a - a.adjoint()).norm(); }

/// Frobenius norm of U^dagger U - I.
inline double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

/// Real part of <psi|op|psi>.
inline double expectation(const CMatrix& op, const CVector& psi) {
  return psi.dot(op * psi).real();
}

}  // namespace lmg
