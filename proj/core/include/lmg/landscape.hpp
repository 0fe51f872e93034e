#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lmg/model.hpp"

namespace lmg {

/// Quasienergy landscape E_G(Q,P) of the m = 0 effective Hamiltonian, per
/// particle. Defined on the closed unit disk Q^2 + P^2 <= 1.
double qel(const ModelParams& params, double q, double p);

/// Analytic first and second derivatives; the boundary circle is excluded
/// because sqrt(1 - |alpha|^2) is not differentiable there.
Eigen::Vector2d qel_gradient(const ModelParams& params, double q, double p);
Eigen::Matrix2d qel_hessian(const ModelParams& params, double q, double p);

struct OriginEigenvalues {
  double lambda1 = 0.0;  ///< P-direction curvature, -2(h + gy)
  double lambda2 = 0.0;  ///< Q-direction curvature, -2h - 2 gx0 - (h + gy)(gx1/omega)^2
};

OriginEigenvalues origin_eigenvalues(const ModelParams& params);

enum class StationaryKind { minimum, saddle, maximum, degenerate };

std::string_view to_string(StationaryKind kind);

struct QelPoint {
  double q = 0.0;
  double p = 0.0;
  double energy = 0.0;
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
  Eigen::Vector2d hessian_eigenvalues = Eigen::Vector2d::Zero();  ///< ascending
  StationaryKind kind = StationaryKind::degenerate;
  bool converged = false;
  int iterations = 0;
  /// Degenerate point whose energy rises on a small surrounding circle.
  bool higher_order_minimum = false;
  std::string diagnostic;
};

/// Evaluates energy, derivatives and classification at a point.
QelPoint evaluate_point(const ModelParams& params, double q, double p);

struct SymmetryPartners {
  int q_mirror = -1;  ///< index of the minimum at (-Q, P), -1 if absent
  int p_mirror = -1;  ///< index of the minimum at (Q, -P)
};

struct MinimaReport {
  ModelParams params;
  std::vector<QelPoint> minima;      ///< sorted by energy, then Q, then P
  std::vector<QelPoint> degenerate;  ///< zero-curvature stationary points
  std::vector<QelPoint> failures;    ///< refinements that did not converge
  std::vector<SymmetryPartners> partners;
  double global_minimum_energy = 0.0;
  int count = 0;
  int grid_resolution = 0;
  int boundary_escapes = 0;  ///< candidates that slid into the excluded rim

  bool ok() const { return failures.empty(); }
  /// Minima plus higher-order (degenerate) minima; this is the phase count.
  int phase_count() const;
};

struct MinimaOptions {
  int grid_n = 201;
  double refine_tol = 1e-10;
  double cluster_radius = 1e-3;
  double boundary_margin = 1e-6;
  double curvature_tol = 1e-8;
  int max_iterations = 500;
};

/// Scans a grid_n x grid_n grid on [-1,1]^2 masked to the disk, refines each
/// discrete local minimum by damped Newton, clusters, and classifies.
MinimaReport find_minima(const ModelParams& params, const MinimaOptions& options = {});
MinimaReport find_minima(const ModelParams& params, int grid_n, double refine_tol = 1e-10);

/// Lowest escape point of the basin around `minimum`: a priority flood over
/// the grid stops at the first foreign local minimum (or the excluded rim),
/// and the highest cell on the way is refined to a stationary point.
QelPoint rim_saddle(const ModelParams& params, const QelPoint& minimum, int grid_n = 201);

struct PhaseCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  int count = 0;  ///< -1 when refinement failed
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double global_min_energy = 0.0;
  std::string diagnostic;
  MinimaReport report;
};

struct ContourPoint {
  double axis1 = 0.0;
  double axis2 = 0.0;
};

struct PhaseDiagram {
  SweepAxis axis1;
  SweepAxis axis2;
  std::vector<PhaseCell> cells;  ///< axis1-major: index i1 * axis2.steps + i2
  std::vector<ContourPoint> lambda1_zero;
  std::vector<ContourPoint> lambda2_zero;

  const PhaseCell& at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1 * axis2.steps + i2)]; }
  bool ok() const;
};

/// Minima counts over a 2-D sweep of gamma couplings. Cells are independent
/// and evaluated by `workers` threads; the result does not depend on
/// scheduling.
PhaseDiagram phase_diagram(const ModelParams& params, const SweepAxis& axis1, const SweepAxis& axis2,
                           const MinimaOptions& options = {}, int workers = 1);

}  // namespace lmg
