#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint/integrate/integrate_n_steps.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "lmg/error.hpp"
#include "lmg/model.hpp"

namespace lmg {

double OscillatorParams::epsilon() const {
  return epsilon_sq >= 0.0 ? std::sqrt(epsilon_sq) : std::numeric_limits<double>::quiet_NaN();
}

OscillatorParams symmetric_phase_oscillator(const ModelParams& params) {
  OscillatorParams osc;
  const double h = params.h;
  osc.epsilon_sq = h * h * (1.0 + params.gammay / h) * (1.0 + params.gamma0x / h);
  osc.drive_coeff = h * params.gamma1x * (1.0 + params.gammay / h);
  osc.omega = params.omega;
  osc.ground_shift = 0.5 * params.n_particles * h;
  return osc;
}

StabilityResult oscillator_stability(const OscillatorParams& osc, int steps) {
  if (steps < 1000) throw InvalidParameter("oscillator_stability: need at least 1000 steps");
  if (!(osc.omega > 0.0)) throw InvalidParameter("oscillator_stability: omega must be positive");

  // Two fundamental solutions (q, q') packed side by side.
  using State = std::array<double, 4>;
  auto rhs = [&osc](const State& y, State& dy, double t) {
    const double k = osc.epsilon_sq + osc.drive_coeff * std::cos(osc.omega * t);
    dy[0] = y[1];
    dy[1] = -k * y[0];
    dy[2] = y[3];
    dy[3] = -k * y[2];
  };

  State y{1.0, 0.0, 0.0, 1.0};
  const double period = 2.0 * std::numbers::pi / osc.omega;
  boost::numeric::odeint::runge_kutta4<State> stepper;
  boost::numeric::odeint::integrate_n_steps(stepper, rhs, y, 0.0, period / steps, steps);

  // Monodromy columns are the two solutions at t = T.
  StabilityResult result;
  result.monodromy_trace = y[0] + y[3];
  result.monodromy_determinant = y[0] * y[3] - y[2] * y[1];
  result.stable = std::abs(result.monodromy_trace) <= 2.0 + 1e-9;
  return result;
}

}  // namespace lmg
