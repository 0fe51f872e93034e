#include "lmg/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lmg/bessel.hpp"
#include "lmg/error.hpp"

namespace lmg {

double ModelParams::period() const { return 2.0 * std::numbers::pi / omega; }

void ModelParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw InvalidParameter("drive frequency omega must be positive, got " + std::to_string(omega));
  if (n_particles < 1)
    throw InvalidParameter("particle number must be >= 1, got " + std::to_string(n_particles));
  if (m < 0) throw InvalidParameter("resonance index m must be non-negative");
  for (double v : {h, gamma0x, gamma1x, gammay})
    if (!std::isfinite(v)) throw InvalidParameter("couplings must be finite");
}

Parameter parse_parameter(std::string_view name) {
  if (name == "h") return Parameter::h;
  if (name == "gx0" || name == "gamma0x") return Parameter::gamma0x;
  if (name == "gx1" || name == "gamma1x") return Parameter::gamma1x;
  if (name == "gy" || name == "gammay") return Parameter::gammay;
  if (name == "omega") return Parameter::omega;
  throw InvalidParameter("unknown parameter name '" + std::string(name) + "'");
}

std::string_view parameter_name(Parameter parameter) {
  switch (parameter) {
    case Parameter::h: return "h";
    case Parameter::gamma0x: return "gx0";
    case Parameter::gamma1x: return "gx1";
    case Parameter::gammay: return "gy";
    case Parameter::omega: return "omega";
  }
  return "?";
}

double get_parameter(const ModelParams& params, Parameter parameter) {
  switch (parameter) {
    case Parameter::h: return params.h;
    case Parameter::gamma0x: return params.gamma0x;
    case Parameter::gamma1x: return params.gamma1x;
    case Parameter::gammay: return params.gammay;
    case Parameter::omega: return params.omega;
  }
  return 0.0;
}

void set_parameter(ModelParams& params, Parameter parameter, double value) {
  switch (parameter) {
    case Parameter::h: params.h = value; break;
    case Parameter::gamma0x: params.gamma0x = value; break;
    case Parameter::gamma1x: params.gamma1x = value; break;
    case Parameter::gammay: params.gammay = value; break;
    case Parameter::omega: params.omega = value; break;
  }
}

double SweepAxis::value(int i) const {
  if (steps == 1) return lo;
  // Exact endpoints: lo + i (hi - lo)/(steps - 1) can miss hi by an ulp.
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepAxis SweepAxis::parse(std::string_view spec) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = spec.find(':', start);
    fields.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (fields.size() != 4)
    throw InvalidParameter("sweep must look like name:lo:hi:steps, got '" + std::string(spec) + "'");

  auto to_double = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw InvalidParameter("bad number '" + std::string(s) + "' in sweep '" + std::string(spec) + "'");
    return v;
  };

  SweepAxis axis;
  axis.parameter = parse_parameter(fields[0]);
  axis.lo = to_double(fields[1]);
  axis.hi = to_double(fields[2]);
  int steps = 0;
  const auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), steps);
  if (ec != std::errc() || ptr != fields[3].data() + fields[3].size() || steps < 1)
    throw InvalidParameter("sweep steps must be a positive integer in '" + std::string(spec) + "'");
  axis.steps = steps;
  return axis;
}

double drive_coupling(const ModelParams& params, double t) {
  return params.gamma0x + params.gamma1x * std::cos(params.omega * t);
}

namespace {

void check_dimension(const ModelParams& params, const CollectiveSpinOps& ops) {
  if (ops.n_particles != params.n_particles)
    throw InvalidParameter("operators built for N=" + std::to_string(ops.n_particles) +
                           " but parameters have N=" + std::to_string(params.n_particles));
}

double frame_phase(const ModelParams& params, double t) {
  return -params.gamma1x * std::sin(params.omega * t) / (params.n_particles * params.omega);
}

double frame_phase_rate(const ModelParams& params, double t) {
  return -params.gamma1x * std::cos(params.omega * t) / params.n_particles;
}

}  // namespace

CMatrix hamiltonian_at(const ModelParams& params, const CollectiveSpinOps& ops, double t) {
  check_dimension(params, ops);
  const double n = params.n_particles;
  return -params.h * ops.jz - (drive_coupling(params, t) / n) * (ops.jx * ops.jx) -
         (params.gammay / n) * (ops.jy * ops.jy);
}

CMatrix rotating_unitary(const ModelParams& params, const CollectiveSpinOps& ops, double t) {
  check_dimension(params, ops);
  const double big_theta = frame_phase(params, t);
  const double small_theta = 0.5 * params.m * params.omega * t;

  // exp(-i Theta J_x^2) through the cached eigenbasis of J_x.
  const Eigen::MatrixXd& v = ops.jx_eigenvectors;
  Eigen::VectorXcd phases(ops.dim);
  for (Eigen::Index i = 0; i < ops.dim; ++i) {
    const double lam = ops.jx_eigenvalues(i);
    phases(i) = std::exp(-kI * (big_theta * lam * lam));
  }
  const CMatrix vc = v.cast<Complex>();
  CMatrix u = vc * phases.asDiagonal() * vc.transpose();

  // right-multiply by the diagonal exp(-i theta_m J_z)
  for (Eigen::Index k = 0; k < ops.dim; ++k) {
    const double mz = ops.jz(k, k).real();
    u.col(k) *= std::exp(-kI * (small_theta * mz));
  }
  return u;
}

CMatrix rotating_hamiltonian_at(const ModelParams& params, const CollectiveSpinOps& ops, double t) {
  check_dimension(params, ops);
  const CMatrix u = rotating_unitary(params, ops, t);
  const CMatrix shifted = hamiltonian_at(params, ops, t) - frame_phase_rate(params, t) * (ops.jx * ops.jx);
  return u.adjoint() * shifted * u - (0.5 * params.m * params.omega) * ops.jz;
}

CMatrix fourier_component(const ModelParams& params, const CollectiveSpinOps& ops, int n, int samples) {
  if (samples < 64)
    throw InvalidParameter("fourier_component: need at least 64 samples, got " + std::to_string(samples));
  check_dimension(params, ops);
  const double period = params.period();
  CMatrix acc = CMatrix::Zero(ops.dim, ops.dim);
  for (int k = 0; k < samples; ++k) {
    const double t = period * static_cast<double>(k) / samples;
    const Complex weight = std::exp(-kI * (static_cast<double>(n) * params.omega * t));
    acc += weight * rotating_hamiltonian_at(params, ops, t);
  }
  return acc / static_cast<double>(samples);
}

CMatrix time_averaged_hamiltonian(const ModelParams& params, const CollectiveSpinOps& ops,
                                  double tolerance, int initial_samples) {
  int samples = std::max(64, initial_samples);
  CMatrix current = fourier_component(params, ops, 0, samples);
  for (int round = 0; round < 8; ++round) {
    samples *= 2;
    CMatrix refined = fourier_component(params, ops, 0, samples);
    const double change = (refined - current).norm();
    current = std::move(refined);
    if (change < tolerance) break;
  }
  return current;
}

CMatrix effective_h0_closed_form(const ModelParams& params, const CollectiveSpinOps& ops) {
  if (params.m != 0)
    throw UnsupportedResonance("effective_h0_closed_form: closed form exists only for m = 0, got m = " +
                               std::to_string(params.m));
  check_dimension(params, ops);

  const double n = params.n_particles;
  const double z = params.gamma1x / (n * params.omega);
  const CMatrix b1 = function_of_jx(ops, [z](double x) { return bessel_j0(z * (2.0 * x + 1.0)); });
  const CMatrix b2 = function_of_jx(ops, [z](double x) { return bessel_j0(4.0 * z * (x + 1.0)); });

  const CMatrix lowered = ops.jz - kI * ops.jy;
  const CMatrix x = (-0.5 * params.h) * lowered * b1 + (params.gammay / (4.0 * n)) * lowered * lowered * b2;
  return x + x.adjoint() - (params.gammay / (2.0 * n)) * (ops.jz * ops.jz + ops.jy * ops.jy) -
         (params.gamma0x / n) * (ops.jx * ops.jx);
}

Detuning resonance_detuning(const ModelParams& params) {
  Detuning d;
  d.delta = -params.h - 0.5 * params.m * params.omega;
  d.rwa_ratio = std::max({std::abs(d.delta), std::abs(params.gamma0x), std::abs(params.gammay)}) /
                params.omega;
  return d;
}

}  // namespace lmg
