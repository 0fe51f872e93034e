#include "schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/numeric/odeint/integrate/integrate_adaptive.hpp>
#include <boost/numeric/odeint/integrate/integrate_times.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "lmg/error.hpp"

namespace lmg::detail {

namespace odeint = boost::numeric::odeint;

namespace {

// Complex entries are stored as interleaved (re, im) doubles so that the
// stepper's error control works on plain reals.
using State = std::vector<double>;
using Stepper = odeint::runge_kutta_fehlberg78<State>;

State pack(const CMatrix& y) {
  State x(static_cast<std::size_t>(2 * y.size()));
  Eigen::Map<CMatrix>(reinterpret_cast<Complex*>(x.data()), y.rows(), y.cols()) = y;
  return x;
}

CMatrix unpack(const State& x, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMatrix>(reinterpret_cast<const Complex*>(x.data()), rows, cols);
}

// H(t) = A + cos(omega t) B stored by diagonals; offset d holds the entries
// (r, r + d). Both parts are banded in the Dicke basis (bandwidth 2), so the
// product costs O(dim * cols) instead of O(dim^2 * cols).
struct Rhs {
  const std::vector<CVector>* static_diags;
  const std::vector<CVector>* drive_diags;
  int bandwidth;
  double omega;
  Eigen::Index rows;
  Eigen::Index cols;

  void operator()(const State& x, State& dxdt, double t) const {
    const double c = std::cos(omega * t);
    Eigen::Map<const CMatrix> y(reinterpret_cast<const Complex*>(x.data()), rows, cols);
    Eigen::Map<CMatrix> dy(reinterpret_cast<Complex*>(dxdt.data()), rows, cols);
    dy.setZero();
    for (int d = -bandwidth; d <= bandwidth; ++d) {
      const std::size_t k = static_cast<std::size_t>(d + bandwidth);
      const CVector diag = (*static_diags)[k] + c * (*drive_diags)[k];
      const Eigen::Index len = rows - std::abs(d);
      if (len <= 0) continue;
      if (d >= 0) {
        dy.topRows(len).noalias() += diag.asDiagonal() * y.bottomRows(len);
      } else {
        dy.bottomRows(len).noalias() += diag.asDiagonal() * y.topRows(len);
      }
    }
    dy *= -kI;
  }
};

int bandwidth_of(const CMatrix& a) {
  int b = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      if (a(r, c) != Complex(0.0, 0.0)) b = std::max(b, static_cast<int>(std::abs(r - c)));
  return b;
}

std::vector<CVector> diagonals(const CMatrix& a, int bandwidth) {
  std::vector<CVector> out;
  for (int d = -bandwidth; d <= bandwidth; ++d) out.push_back(a.diagonal(d));
  return out;
}

}  // namespace

SchrodingerIntegrator::SchrodingerIntegrator(const ModelParams& params, const CollectiveSpinOps& ops,
                                             const IntegratorSettings& settings)
    : omega_(params.omega), settings_(settings) {
  params.validate();
  settings.validate();
  if (ops.n_particles != params.n_particles)
    throw InvalidParameter("integrator: operators do not match particle number");
  const double n = params.n_particles;
  const CMatrix jx2 = ops.jx * ops.jx;
  static_ = -params.h * ops.jz - (params.gamma0x / n) * jx2 - (params.gammay / n) * (ops.jy * ops.jy);
  drive_ = -(params.gamma1x / n) * jx2;
  max_step_ = settings.max_step_fraction * params.period();
  bandwidth_ = std::max(bandwidth_of(static_), bandwidth_of(drive_));
  static_diags_ = diagonals(static_, bandwidth_);
  drive_diags_ = diagonals(drive_, bandwidth_);
}

CMatrix SchrodingerIntegrator::advance(const CMatrix& y0, double t0, double t1) const {
  if (t1 < t0) throw InvalidParameter("integrator: end time precedes start time");
  State x = pack(y0);
  if (t1 == t0) return y0;
  const Rhs rhs{&static_diags_, &drive_diags_, bandwidth_, omega_, y0.rows(), y0.cols()};
  auto stepper = odeint::make_controlled(settings_.atol, settings_.rtol, max_step_, Stepper());
  const double dt0 = std::min(max_step_, (t1 - t0)) / 16.0;
  odeint::integrate_adaptive(stepper, rhs, x, t0, t1, dt0);
  return unpack(x, y0.rows(), y0.cols());
}

std::vector<CMatrix> SchrodingerIntegrator::sample(const CMatrix& y0, double t0,
                                                   std::span<const double> times) const {
  std::vector<CMatrix> out;
  out.reserve(times.size());
  CMatrix y = y0;
  double t = t0;
  for (double target : times) {
    if (target < t) throw InvalidParameter("integrator: sample times must be non-decreasing");
    y = advance(y, t, target);
    t = target;
    out.push_back(y);
  }
  return out;
}

}  // namespace lmg::detail
