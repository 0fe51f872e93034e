#include "lmg/dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "lmg/error.hpp"
#include "schrodinger.hpp"

namespace lmg {

namespace {

constexpr double kNormGuard = 1e-6;

void check_state(const CollectiveSpinOps& ops, const CVector& psi0) {
  if (psi0.size() != ops.dim) throw InvalidParameter("initial state has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw InvalidParameter("initial state is not normalized");
}

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw InvalidParameter("sample times must be non-negative");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidParameter("sample times must be strictly increasing");
  }
}

double h0_expect(const CMatrix& h0, const CVector& psi) { return expectation(h0, psi); }

}  // namespace

std::string_view to_string(Frame frame) {
  switch (frame) {
    case Frame::lab: return "lab";
    case Frame::rotating: return "rotating";
    case Frame::stroboscopic: return "stroboscopic";
    case Frame::effective: return "effective";
  }
  return "unknown";
}

Frame parse_frame(std::string_view name) {
  if (name == "lab") return Frame::lab;
  if (name == "rotating") return Frame::rotating;
  if (name == "stroboscopic") return Frame::stroboscopic;
  if (name == "effective") return Frame::effective;
  throw InvalidParameter("unknown frame '" + std::string(name) + "'");
}

Trajectory trajectory_from_states(Frame frame, const CollectiveSpinOps& ops, const StateHistory& history) {
  Trajectory traj;
  traj.frame = frame;
  traj.times = history.times;
  const double j = ops.spin();
  const double parity0 = history.states.empty() ? 0.0 : expectation(ops.parity, history.states.front());
  for (const CVector& psi : history.states) {
    const SpinMoments mom = moments(ops, psi);
    traj.jx.push_back(mom.jx / j);
    traj.jy.push_back(mom.jy / j);
    traj.jz.push_back(mom.jz / j);
    traj.norm_drift.push_back(std::abs(psi.norm() - 1.0));
    traj.parity_drift.push_back(std::abs(expectation(ops.parity, psi) - parity0));
  }
  return traj;
}

StateHistory evolve_states(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                           const std::vector<double>& times, const IntegratorSettings& settings) {
  check_state(ops, psi0);
  check_times(times);
  const detail::SchrodingerIntegrator integrator(params, ops, settings);
  StateHistory history;
  history.times = times;
  CMatrix y = psi0;
  double t = 0.0;
  for (double target : times) {
    y = integrator.advance(y, t, target);
    t = target;
    const double drift = std::abs(y.col(0).norm() - 1.0);
    if (drift > kNormGuard)
      throw AccuracyError("evolve: norm drift " + std::to_string(drift) + " at t = " + std::to_string(t) +
                          "; tighten rtol/atol");
    history.states.push_back(y.col(0));
  }
  return history;
}

Trajectory evolve(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                  const std::vector<double>& times, const IntegratorSettings& settings) {
  return trajectory_from_states(Frame::lab, ops, evolve_states(params, ops, psi0, times, settings));
}

Trajectory rotating_expectations(const ModelParams& params, const CollectiveSpinOps& ops,
                                 const StateHistory& history) {
  StateHistory rotated;
  rotated.times = history.times;
  for (std::size_t i = 0; i < history.states.size(); ++i)
    rotated.states.push_back(rotating_unitary(params, ops, history.times[i]).adjoint() * history.states[i]);
  return trajectory_from_states(Frame::rotating, ops, rotated);
}

Trajectory rotating_expectations_by_operators(const ModelParams& params, const CollectiveSpinOps& ops,
                                              const StateHistory& history) {
  Trajectory traj = trajectory_from_states(Frame::rotating, ops, history);
  const double j = ops.spin();
  for (std::size_t i = 0; i < history.states.size(); ++i) {
    const CMatrix u = rotating_unitary(params, ops, history.times[i]);
    const CVector& psi = history.states[i];
    traj.jx[i] = expectation(u * ops.jx * u.adjoint(), psi) / j;
    traj.jy[i] = expectation(u * ops.jy * u.adjoint(), psi) / j;
    traj.jz[i] = expectation(u * ops.jz * u.adjoint(), psi) / j;
  }
  return traj;
}

StateHistory stroboscopic_states(const CollectiveSpinOps& ops, const CVector& psi0, int r_max,
                                 const CMatrix& monodromy, double period) {
  check_state(ops, psi0);
  if (r_max < 1) throw InvalidParameter("stroboscopic: r_max must be >= 1");
  if (monodromy.rows() != ops.dim || monodromy.cols() != ops.dim)
    throw InvalidParameter("stroboscopic: monodromy has the wrong dimension");
  StateHistory history;
  CVector psi = psi0;
  history.times.push_back(0.0);
  history.states.push_back(psi);
  for (int r = 1; r <= r_max; ++r) {
    psi = monodromy * psi;
    const double drift = std::abs(psi.norm() - 1.0);
    if (drift > kNormGuard)
      throw AccuracyError("stroboscopic: accumulated unitarity defect " + std::to_string(drift) +
                          " at period r = " + std::to_string(r));
    history.times.push_back(r * period);
    history.states.push_back(psi);
  }
  return history;
}

Trajectory stroboscopic(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0, int r_max,
                        const CMatrix& monodromy) {
  const StateHistory history = stroboscopic_states(ops, psi0, r_max, monodromy, params.period());
  Trajectory traj = trajectory_from_states(Frame::stroboscopic, ops, history);
  if (params.m == 0) {
    const CMatrix h0 = effective_h0_closed_form(params, ops);
    for (const CVector& psi : history.states) traj.generator_expect.push_back(h0_expect(h0, psi));
  }
  return traj;
}

Trajectory stroboscopic(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0, int r_max,
                        const IntegratorSettings& settings) {
  check_state(ops, psi0);
  if (r_max < 1) throw InvalidParameter("stroboscopic: r_max must be >= 1");
  return stroboscopic(params, ops, psi0, r_max, monodromy(params, ops, settings));
}

StateHistory effective_states(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                              const std::vector<double>& times) {
  check_state(ops, psi0);
  check_times(times);
  const CMatrix h0 = effective_h0_closed_form(params, ops);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (h0 + h0.adjoint()));
  const CMatrix& v = solver.eigenvectors();
  const Eigen::VectorXd& d = solver.eigenvalues();
  const CVector coeffs = v.adjoint() * psi0;
  StateHistory history;
  history.times = times;
  for (double t : times) {
    CVector phased(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) phased(k) = std::exp(-kI * (d(k) * t)) * coeffs(k);
    history.states.push_back(v * phased);
  }
  return history;
}

Trajectory effective_evolution(const ModelParams& params, const CollectiveSpinOps& ops, const CVector& psi0,
                               const std::vector<double>& times) {
  const StateHistory history = effective_states(params, ops, psi0, times);
  Trajectory traj = trajectory_from_states(Frame::effective, ops, history);
  const CMatrix h0 = effective_h0_closed_form(params, ops);
  for (const CVector& psi : history.states) traj.generator_expect.push_back(h0_expect(h0, psi));
  return traj;
}

Trajectory project_trajectory(Trajectory trajectory, int n_particles) {
  const double j = 0.5 * n_particles;
  trajectory.path.clear();
  trajectory.flagged.assign(trajectory.size(), 0);
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    try {
      trajectory.path.push_back(
          bloch_projection(trajectory.jx[i] * j, trajectory.jy[i] * j, trajectory.jz[i] * j, n_particles));
    } catch (const DegenerateDirection&) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      trajectory.path.push_back({nan, nan, nan, nan, nan, 0.0});
      trajectory.flagged[i] = 1;
    }
  }
  return trajectory;
}

ConfinementStats confinement(const ModelParams& params, const Trajectory& projected, double q0, double p0,
                             double rim_saddle_energy) {
  if (!projected.projected()) throw InvalidParameter("confinement: trajectory has no (Q, P) projection");
  ConfinementStats stats;
  stats.rim_saddle_energy = rim_saddle_energy;
  stats.max_energy = -std::numeric_limits<double>::infinity();
  stats.min_energy = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (!projected.flagged.empty() && projected.flagged[i]) continue;
    const BlochPoint& b = projected.path[i];
    const double e = qel(params, b.q, b.p);
    stats.max_distance = std::max(stats.max_distance, std::hypot(b.q - q0, b.p - p0));
    stats.max_energy = std::max(stats.max_energy, e);
    stats.min_energy = std::min(stats.min_energy, e);
    sum += e;
    ++stats.samples;
  }
  if (stats.samples == 0) throw InvalidParameter("confinement: no usable samples");
  stats.mean_energy = sum / stats.samples;
  stats.band = stats.max_energy - stats.min_energy;
  stats.confined = stats.max_energy < rim_saddle_energy;
  return stats;
}

}  // namespace lmg
