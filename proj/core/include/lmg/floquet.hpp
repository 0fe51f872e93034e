#pragma once

#include <string>
#include <vector>

#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/spin.hpp"

namespace lmg {

/// Adaptive Runge-Kutta-Fehlberg 7(8) settings for i dU/dt = H(t) U.
struct IntegratorSettings {
  double rtol = 1e-12;
  double atol = 1e-12;
  double max_step_fraction = 1.0 / 16.0;  ///< largest step as a fraction of T
  std::string method = "rkf78";

  void validate() const;
  IntegratorSettings halved() const;
};

/// Unitarity defect above which propagation is reported as inaccurate.
inline constexpr double kAccuracyGuard = 1e-6;

/// U(t_end, 0). Unitarity is monitored, never restored.
CMatrix propagator(const ModelParams& params, const CollectiveSpinOps& ops, double t_end,
                   const IntegratorSettings& settings = {});

/// U(t_end, t_start).
CMatrix propagator(const ModelParams& params, const CollectiveSpinOps& ops, double t_start,
                   double t_end, const IntegratorSettings& settings);

/// U(T, 0) over one drive period.
CMatrix monodromy(const ModelParams& params, const CollectiveSpinOps& ops,
                  const IntegratorSettings& settings = {});

/// Folds into the first Brillouin zone (-omega/2, omega/2]; values within
/// 1e-12 of -omega/2 map to +omega/2.
double fold_quasienergy(double value, double omega);

/// Distance between two quasienergies on the zone circle.
double zone_distance(double a, double b, double omega);

struct QuasiSpectrum {
  double omega = 0.0;
  std::vector<double> quasienergies;  ///< ascending
  CMatrix modes;                      ///< orthonormal columns, same order
  std::vector<double> parity_expect;
  double unitarity_defect = 0.0;
};

/// Eigen-decomposes a monodromy matrix. Eigenvalues e^{-i eps T} give
/// eps = fold(i log(lambda) / T). When the input commutes with parity, each
/// parity sector is decomposed separately so modes carry a definite parity.
QuasiSpectrum quasienergies(const CMatrix& monodromy, double omega);

struct RwaPair {
  double quasienergy = 0.0;
  double effective_eigenvalue = 0.0;  ///< folded into the same zone
  double deviation = 0.0;             ///< zone distance between the two
  int parity = 1;
};

/// Pairs numerically exact quasienergies with folded eigenvalues of the
/// closed-form m = 0 effective Hamiltonian, sector by parity sector. Sorted by
/// quasienergy.
std::vector<RwaPair> rwa_comparison(const ModelParams& params, const CollectiveSpinOps& ops,
                                    const IntegratorSettings& settings = {});

}  // namespace lmg
