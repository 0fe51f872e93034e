#pragma once

#include <span>
#include <vector>

#include "lmg/floquet.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"

namespace lmg::detail {

/// Integrates i dY/dt = H(t) Y for a dim x k block Y under the driven LMG
/// Hamiltonian H(t) = A + cos(omega t) B.
class SchrodingerIntegrator {
 public:
  SchrodingerIntegrator(const ModelParams& params, const CollectiveSpinOps& ops,
                        const IntegratorSettings& settings);

  CMatrix advance(const CMatrix& y0, double t0, double t1) const;

  /// Y at each of `times` (non-decreasing, all >= t0).
  std::vector<CMatrix> sample(const CMatrix& y0, double t0, std::span<const double> times) const;

 private:
  CMatrix static_;
  CMatrix drive_;
  int bandwidth_ = 0;
  std::vector<CVector> static_diags_;
  std::vector<CVector> drive_diags_;
  double omega_;
  double max_step_;
  IntegratorSettings settings_;
};

}  // namespace lmg::detail
