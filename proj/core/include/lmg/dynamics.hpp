#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lmg/floquet.hpp"
#include "lmg/landscape.hpp"
#include "lmg/linalg.hpp"
#include "lmg/model.hpp"
#include "lmg/spin.hpp"

namespace lmg {

enum class Frame { lab, rotating, stroboscopic, effective };

std::string_view to_string(Frame frame);
Frame parse_frame(std::string_view name);

/// Spin expectation values over time, normalized by j = N/2.
struct Trajectory {
  Frame frame = Frame::lab;
  std::vector<double> times;
  std::vector<double> jx;
  std::vector<double> jy;
  std::vector<double> jz;
  std::vector<BlochPoint> path;  ///< filled by project_trajectory
  std::vector<char> flagged;     ///< samples whose projection had no direction
  std::vector<double> norm_drift;
  std::vector<double> parity_drift;
  /// <h0> per sample where the effective generator is defined (m = 0).
  std::vector<double> generator_expect;

  std::size_t size() const { return times.size(); }
  bool projected() const { return path.size() == times.size(); }
};

struct StateHistory {
  std::vector<double> times;
  std::vector<CVector> states;
};

/// Lab-frame states |Psi, t> at strictly increasing `times` >= 0, starting
/// from psi0 at t = 0. Throws AccuracyError when the norm drifts past 1e-6.
StateHistory evolve_states(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                           const std::vector<double>& times, const IntegratorSettings& settings = {});

Trajectory evolve(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                  const std::vector<double>& times, const IntegratorSettings& settings = {});

/// Rotating-frame expectations of U_m^dagger(t) |Psi, t>.
Trajectory rotating_expectations(const ModelParams& params, const CollectiveSpinOps& ops,
                                 const StateHistory& history);

/// Same quantity via the rotating operators U_m J U_m^dagger in the lab
/// state; kept as an independent route for cross-checks.
Trajectory rotating_expectations_by_operators(const ModelParams& params, const CollectiveSpinOps& ops,
                                              const StateHistory& history);

/// Snapshots at t_r = r T, r = 0..r_max, by repeated application of the
/// one-period propagator.
Trajectory stroboscopic(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                        int r_max, const IntegratorSettings& settings = {});
Trajectory stroboscopic(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                        int r_max, const CMatrix& monodromy);

/// States U^r psi0, r = 0..r_max, for a given one-period propagator U.
StateHistory stroboscopic_states(const CollectiveSpinOps& ops, const CVector& psi0, int r_max,
                                 const CMatrix& monodromy, double period);

/// Rotating-frame states exp(-i h0 t) psi0 under the closed-form m = 0
/// effective Hamiltonian, by exact eigendecomposition.
StateHistory effective_states(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                              const std::vector<double>& times);

/// Trajectory of effective_states (frame = effective, rotating-frame
/// observables), with <h0> recorded per sample.
Trajectory effective_evolution(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                               const std::vector<double>& times);

/// Adds the (Q, P) projection of every sample. Zero-length samples are
/// flagged and carry NaN coordinates.
Trajectory project_trajectory(Trajectory trajectory, int n_particles);

/// Expectations of jx, jy, jz / j, norm and parity drifts for given states.
Trajectory trajectory_from_states(Frame frame, const CollectiveSpinOps& ops, const StateHistory& history);

struct ConfinementStats {
  double max_distance = 0.0;  ///< largest (Q, P) distance from the start point
  double max_energy = 0.0;    ///< largest E_G along the projected path
  double min_energy = 0.0;
  double mean_energy = 0.0;
  double band = 0.0;  ///< max_energy - min_energy
  double rim_saddle_energy = 0.0;
  bool confined = false;  ///< max_energy below the rim saddle
  int samples = 0;
};

/// Basin-confinement metrics of a projected trajectory around (q0, p0).
ConfinementStats confinement(const ModelParams& params, const Trajectory& projected, double q0, double p0,
                             double rim_saddle_energy);

}  // namespace lmg
