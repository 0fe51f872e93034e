#pragma once

#include <string>
#include <string_view>

#include "lmg/linalg.hpp"
#include "lmg/spin.hpp"

namespace lmg {

/// Couplings of the driven LMG Hamiltonian
///   H(t) = -h J_z - (1/N) (gamma^x(t) J_x^2 + gamma^y J_y^2),
///   gamma^x(t) = gamma0x + gamma1x cos(omega t).
/// Energies are raw values; the usual convention is h < 0 and |h| = 1.
struct ModelParams {
  double h = -1.0;
  double gamma0x = 0.0;
  double gamma1x = 0.0;
  double gammay = 0.0;
  double omega = 40.0;
  int m = 0;  ///< resonance index of the rotating frame
  int n_particles = 10;

  double period() const;
  void validate() const;
};

/// Sweepable scalar parameters.
enum class Parameter { h, gamma0x, gamma1x, gammay, omega };

/// Accepts the CLI spellings h, gx0, gx1, gy, omega.
Parameter parse_parameter(std::string_view name);
std::string_view parameter_name(Parameter parameter);
double get_parameter(const ModelParams& params, Parameter parameter);
void set_parameter(ModelParams& params, Parameter parameter, double value);

/// Evenly spaced sweep lo..hi with `steps` points (inclusive ends).
struct SweepAxis {
  Parameter parameter = Parameter::gammay;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  double value(int i) const;
  /// Parses "name:lo:hi:steps".
  static SweepAxis parse(std::string_view spec);
};

double drive_coupling(const ModelParams& params, double t);

/// Lab-frame Hamiltonian H(t).
CMatrix hamiltonian_at(const ModelParams& params, const CollectiveSpinOps& ops, double t);

/// U_m(t) = exp(-i Theta(t) J_x^2) exp(-i theta_m(t) J_z) with
/// Theta(t) = -gamma1x sin(omega t)/(N omega) and theta_m(t) = m omega t / 2.
/// The sign of Theta is the one for which the frame absorbs the drive of
/// H(t) when rotating-frame states are U_m^dagger |Psi, t>.
CMatrix rotating_unitary(const ModelParams& params, const CollectiveSpinOps& ops, double t);

/// Rotating-frame Hamiltonian H_m(t) = U_m^dagger (H - i d/dt) U_m, evaluated
/// by exact conjugation:
///   H_m = U_m^dagger (H(t) - Theta'(t) J_x^2) U_m - (m omega / 2) J_z.
CMatrix rotating_hamiltonian_at(const ModelParams& params, const CollectiveSpinOps& ops, double t);

/// h_n = (1/T) int_0^T H_m(t) e^{-i n omega t} dt by the periodic trapezoid
/// rule with `samples` nodes (>= 64).
CMatrix fourier_component(const ModelParams& params, const CollectiveSpinOps& ops, int n, int samples);

/// Time average h_0 with node doubling from `initial_samples` until the
/// Frobenius change drops below `tolerance`.
CMatrix time_averaged_hamiltonian(const ModelParams& params, const CollectiveSpinOps& ops,
                                  double tolerance = 1e-10, int initial_samples = 256);

/// Closed-form RWA Hamiltonian for m = 0:
///   [ -h/2 (J_z - iJ_y) B1 + gy/(4N) (J_z - iJ_y)^2 B2 + h.c. ]
///     - gy/(2N) (J_z^2 + J_y^2) - gx0/N J_x^2
/// with B1 = J0[(gx1/(N omega)) (2 J_x + 1)], B2 = J0[(4 gx1/(N omega)) (J_x + 1)].
CMatrix effective_h0_closed_form(const ModelParams& params, const CollectiveSpinOps& ops);

/// Symmetric-phase parametric oscillator q'' + (eps^2 + drive cos(omega t)) q = 0.
struct OscillatorParams {
  double epsilon_sq = 0.0;   ///< signed; negative means statically unstable
  double drive_coeff = 0.0;  ///< h gx1 (1 + gy/h)
  double omega = 0.0;
  double ground_shift = 0.0;  ///< N h / 2

  /// sqrt(epsilon_sq), NaN when epsilon_sq < 0.
  double epsilon() const;
};

OscillatorParams symmetric_phase_oscillator(const ModelParams& params);

struct StabilityResult {
  bool stable = false;
  double monodromy_trace = 0.0;
  double monodromy_determinant = 0.0;
};

/// Hill analysis over one drive period with `steps` RK4 steps (>= 1000).
StabilityResult oscillator_stability(const OscillatorParams& osc, int steps = 4000);

struct Detuning {
  double delta = 0.0;      ///< -h - m omega / 2
  double rwa_ratio = 0.0;  ///< max(|delta|, |gx0|, |gy|) / omega
};

Detuning resonance_detuning(const ModelParams& params);

}  // namespace lmg
