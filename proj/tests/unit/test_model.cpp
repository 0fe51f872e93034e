#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lmg/error.hpp"
#include "lmg/model.hpp"
#include "oracles.hpp"

namespace {

using lmg::CMatrix;
constexpr double kPi = std::numbers::pi;

lmg::ModelParams strong_drive(int n) {
  lmg::ModelParams p;
  p.h = -1.0;
  p.gamma0x = -1.0;
  p.gamma1x = 210.0;
  p.gammay = 2.0;
  p.omega = 40.0;
  p.n_particles = n;
  return p;
}

TEST(Params, ValidateRejectsBadValues) {
  lmg::ModelParams p;
  p.omega = 0.0;
  EXPECT_THROW(p.validate(), lmg::InvalidParameter);
  p = {};
  p.n_particles = 0;
  EXPECT_THROW(p.validate(), lmg::InvalidParameter);
  p = {};
  p.m = -1;
  EXPECT_THROW(p.validate(), lmg::InvalidParameter);
}

TEST(Params, ParameterNamesRoundTrip) {
  for (auto prm : {lmg::Parameter::h, lmg::Parameter::gamma0x, lmg::Parameter::gamma1x, lmg::Parameter::gammay,
                   lmg::Parameter::omega})
    EXPECT_EQ(lmg::parse_parameter(lmg::parameter_name(prm)), prm);
  EXPECT_THROW(lmg::parse_parameter("gz"), lmg::InvalidParameter);
}

TEST(Params, SweepAxisParsesAndHitsEndpoints) {
  const auto axis = lmg::SweepAxis::parse("omega:30:120:46");
  EXPECT_EQ(axis.parameter, lmg::Parameter::omega);
  EXPECT_EQ(axis.steps, 46);
  EXPECT_EQ(axis.value(0), 30.0);
  EXPECT_EQ(axis.value(45), 120.0);
  EXPECT_DOUBLE_EQ(axis.value(1), 32.0);
  EXPECT_THROW(lmg::SweepAxis::parse("omega:1:2"), lmg::InvalidParameter);
  EXPECT_THROW(lmg::SweepAxis::parse("omega:1:2:0"), lmg::InvalidParameter);
  EXPECT_EQ(lmg::SweepAxis::parse("omega:7:9:1").value(0), 7.0);
}

TEST(DriveCoupling, Values) {
  lmg::ModelParams p;
  p.gamma0x = 0.5;
  EXPECT_DOUBLE_EQ(lmg::drive_coupling(p, 0.37), 0.5);
  p = strong_drive(4);
  EXPECT_DOUBLE_EQ(lmg::drive_coupling(p, 0.0), 209.0);
  EXPECT_NEAR(lmg::drive_coupling(p, p.period() / 4), -1.0, 1e-12);
}

TEST(Hamiltonian, SpinHalfIsFieldPlusConstant) {
  auto p = strong_drive(1);
  const auto ops = lmg::build_ops(1);
  const CMatrix expected = -p.h * ops.jz - ((p.gamma0x + p.gamma1x + p.gammay) / 4.0) * CMatrix::Identity(2, 2);
  EXPECT_LT((lmg::hamiltonian_at(p, ops, 0.0) - expected).norm(), 1e-12);
}

TEST(Hamiltonian, UndrivenIsStatic) {
  lmg::ModelParams p;
  p.gamma0x = 0.3;
  p.gammay = 0.8;
  p.n_particles = 6;
  const auto ops = lmg::build_ops(6);
  EXPECT_LT((lmg::hamiltonian_at(p, ops, 0.0) - lmg::hamiltonian_at(p, ops, 0.123)).norm(), 1e-14);
}

TEST(Hamiltonian, PeriodicAndParitySymmetric) {
  auto p = strong_drive(9);
  const auto ops = lmg::build_ops(9);
  const double T = p.period();
  for (double t : {0.0, T / 3, T / 2, 0.77 * T}) {
    const CMatrix h = lmg::hamiltonian_at(p, ops, t);
    EXPECT_LT(lmg::commutator(h, ops.parity).norm(), 1e-10);
    EXPECT_LT(lmg::hermiticity_defect(h), 1e-12);
  }
  EXPECT_LT((lmg::hamiltonian_at(p, ops, 0.1) - lmg::hamiltonian_at(p, ops, 0.1 + T)).norm(), 1e-9);
  EXPECT_THROW(lmg::hamiltonian_at(p, lmg::build_ops(4), 0.0), lmg::InvalidParameter);
}

TEST(RotatingUnitary, IdentityAtStartAndAfterOnePeriod) {
  auto p = strong_drive(6);
  const auto ops = lmg::build_ops(6);
  const CMatrix id = CMatrix::Identity(7, 7);
  EXPECT_LT((lmg::rotating_unitary(p, ops, 0.0) - id).norm(), 1e-14);
  EXPECT_LT((lmg::rotating_unitary(p, ops, p.period()) - id).norm(), 1e-10);
  EXPECT_LT(lmg::unitarity_defect(lmg::rotating_unitary(p, ops, 0.3 * p.period())), 1e-10);
}

// The stroboscopic parity identity holds with exponent m r:
// U_m(r T) = exp(-i pi m r Jz) = [parity exp(i pi N / 2)]^(m r).
TEST(RotatingUnitary, StroboscopicParityIdentity) {
  for (int n : {2, 3, 4, 5}) {
    const auto ops = lmg::build_ops(n);
    for (int m : {1, 2, 3}) {
      auto p = strong_drive(n);
      p.m = m;
      for (int r : {1, 2}) {
        const CMatrix u = lmg::rotating_unitary(p, ops, r * p.period());
        EXPECT_LT((u - oracle::parity_power(ops, m * r)).norm(), 1e-10) << "n=" << n << " m=" << m << " r=" << r;
      }
    }
  }
}

TEST(RotatingHamiltonian, InitialValue) {
  for (int m : {0, 1, 2}) {
    auto p = strong_drive(5);
    p.m = m;
    const auto ops = lmg::build_ops(5);
    // The frame rate at t = 0 is -gx1/N, which removes the drive from H(0).
    const double theta_dot = -p.gamma1x / p.n_particles;
    const CMatrix expected = lmg::hamiltonian_at(p, ops, 0.0) - theta_dot * ops.jx * ops.jx - 0.5 * m * p.omega * ops.jz;
    EXPECT_LT((lmg::rotating_hamiltonian_at(p, ops, 0.0) - expected).norm(), 1e-10);
    p.gamma1x = 0.0;
    EXPECT_LT((lmg::rotating_hamiltonian_at(p, ops, 0.0) - expected).norm(), 1e-10);
  }
}

// i d/dt (U^dagger psi) = H_m U^dagger psi for every lab solution psi, i.e.
// H_m = U^dagger H U - i U^dagger dU/dt. The derivative is a fourth-order
// central difference, independent of the closed form used by the library.
TEST(RotatingHamiltonian, GeneratesTheFrameTransformedState) {
  for (int m : {0, 1, 2}) {
    auto p = strong_drive(4);
    p.m = m;
    const auto ops = lmg::build_ops(4);
    for (double frac : {0.13, 0.41, 0.77}) {
      const double t = frac * p.period();
      const double d = 2e-5;
      auto u = [&](double s) { return lmg::rotating_unitary(p, ops, s); };
      const CMatrix du = (u(t - 2 * d) - 8.0 * u(t - d) + 8.0 * u(t + d) - u(t + 2 * d)) / (12.0 * d);
      const CMatrix ut = u(t);
      const CMatrix expected =
          ut.adjoint() * lmg::hamiltonian_at(p, ops, t) * ut - lmg::Complex(0.0, 1.0) * ut.adjoint() * du;
      EXPECT_LT((lmg::rotating_hamiltonian_at(p, ops, t) - expected).norm(), 1e-6) << "m=" << m << " t/T=" << frac;
    }
  }
}

TEST(RotatingHamiltonian, UndrivenStaticFrameIsLabFrame) {
  lmg::ModelParams p;
  p.gamma0x = 0.4;
  p.gammay = 1.1;
  p.n_particles = 7;
  const auto ops = lmg::build_ops(7);
  for (double t : {0.0, 0.05, 0.11})
    EXPECT_LT((lmg::rotating_hamiltonian_at(p, ops, t) - lmg::hamiltonian_at(p, ops, t)).norm(), 1e-12);
}

TEST(RotatingHamiltonian, MatchesBesselExpansion) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m : {0, 1, 2}) {
    for (int n : {4, 10}) {
      auto p = strong_drive(n);
      p.m = m;
      const auto ops = lmg::build_ops(n);
      const double t = m == 0 && n == 4 ? p.period() / 5 : unit(rng) * p.period();
      const CMatrix direct = lmg::rotating_hamiltonian_at(p, ops, t);
      const CMatrix series = oracle::bessel_rotating_hamiltonian(p, ops, t);
      EXPECT_LT((direct - series).norm(), 1e-8) << "m=" << m << " n=" << n;
      EXPECT_LT(lmg::hermiticity_defect(direct), 1e-10);
    }
  }
}

TEST(RotatingHamiltonian, RotatedSpinComponents) {
  // exp(i th Jz) Jy exp(-i th Jz) and Jx in trigonometric form.
  const auto ops = lmg::build_ops(6);
  for (double th : {0.0, 0.4, 2.1}) {
    CMatrix uz = CMatrix::Zero(7, 7);
    for (int k = 0; k < 7; ++k) uz(k, k) = std::exp(-lmg::kI * (th * ops.jz(k, k).real()));
    const CMatrix lam1 = -ops.jy * std::cos(th) - ops.jx * std::sin(th);
    const CMatrix lam2 = ops.jx * std::cos(th) - ops.jy * std::sin(th);
    EXPECT_LT((uz.adjoint() * ops.jy * uz + lam1).norm(), 1e-10);
    EXPECT_LT((uz.adjoint() * ops.jx * uz - lam2).norm(), 1e-10);
  }
}

TEST(Fourier, UndrivenHasNoHarmonics) {
  lmg::ModelParams p;
  p.gamma0x = 0.2;
  p.gammay = 0.9;
  p.n_particles = 5;
  const auto ops = lmg::build_ops(5);
  EXPECT_LT(lmg::fourier_component(p, ops, 1, 64).norm(), 1e-12);
  EXPECT_THROW(lmg::fourier_component(p, ops, 0, 32), lmg::InvalidParameter);
}

TEST(Fourier, TimeAverageMatchesClosedForm) {
  auto p = strong_drive(10);
  const auto ops = lmg::build_ops(10);
  const CMatrix h0q = lmg::fourier_component(p, ops, 0, 256);
  EXPECT_LT(lmg::hermiticity_defect(h0q), 1e-10);
  EXPECT_LT((h0q - lmg::effective_h0_closed_form(p, ops)).norm(), 1e-8);
  EXPECT_LT((lmg::time_averaged_hamiltonian(p, ops) - lmg::effective_h0_closed_form(p, ops)).norm(), 1e-8);
}

TEST(EffectiveHamiltonian, UndrivenReducesToLabHamiltonian) {
  lmg::ModelParams p;
  p.gamma0x = 0.7;
  p.gammay = 1.3;
  p.n_particles = 8;
  const auto ops = lmg::build_ops(8);
  const CMatrix expected = -p.h * ops.jz - (p.gamma0x / 8) * ops.jx * ops.jx - (p.gammay / 8) * ops.jy * ops.jy;
  EXPECT_LT((lmg::effective_h0_closed_form(p, ops) - expected).norm(), 1e-12);
}

TEST(EffectiveHamiltonian, HermitianAndParityEven) {
  auto p = strong_drive(12);
  const auto ops = lmg::build_ops(12);
  const CMatrix h0 = lmg::effective_h0_closed_form(p, ops);
  EXPECT_LT(lmg::hermiticity_defect(h0), 1e-10);
  EXPECT_LT(lmg::commutator(h0, ops.parity).norm(), 1e-9);
}

TEST(EffectiveHamiltonian, OnlyForZeroResonance) {
  auto p = strong_drive(4);
  p.m = 1;
  EXPECT_THROW(lmg::effective_h0_closed_form(p, lmg::build_ops(4)), lmg::UnsupportedResonance);
}

TEST(Oscillator, EnergyScale) {
  lmg::ModelParams p;
  EXPECT_DOUBLE_EQ(lmg::symmetric_phase_oscillator(p).epsilon(), 1.0);
  p.gamma0x = 0.5;
  p.gammay = 0.5;
  EXPECT_DOUBLE_EQ(lmg::symmetric_phase_oscillator(p).epsilon(), 0.5);
  p = {};
  p.gammay = 1.0;
  EXPECT_DOUBLE_EQ(lmg::symmetric_phase_oscillator(p).epsilon(), 0.0);
  p.gammay = 2.0;
  EXPECT_LT(lmg::symmetric_phase_oscillator(p).epsilon_sq, 0.0);
  EXPECT_TRUE(std::isnan(lmg::symmetric_phase_oscillator(p).epsilon()));
  p = strong_drive(10);
  EXPECT_DOUBLE_EQ(lmg::symmetric_phase_oscillator(p).drive_coeff, -1.0 * 210.0 * (1.0 + 2.0 / -1.0));
  EXPECT_DOUBLE_EQ(lmg::symmetric_phase_oscillator(p).ground_shift, -5.0);
}

TEST(Oscillator, FreeOscillatorTrace) {
  lmg::OscillatorParams osc;
  osc.epsilon_sq = 2.25;
  osc.omega = 40.0;
  const auto s = lmg::oscillator_stability(osc);
  EXPECT_TRUE(s.stable);
  EXPECT_NEAR(s.monodromy_trace, 2.0 * std::cos(2.0 * kPi * 1.5 / 40.0), 1e-10);
  EXPECT_NEAR(s.monodromy_determinant, 1.0, 1e-8);
  EXPECT_THROW(lmg::oscillator_stability(osc, 999), lmg::InvalidParameter);
}

TEST(Oscillator, FirstTongueAgreesWithLongIntegration) {
  const double omega = 40.0;
  lmg::OscillatorParams res;
  res.omega = omega;
  res.epsilon_sq = 0.25 * omega * omega;
  res.drive_coeff = 0.05 * res.epsilon_sq;
  EXPECT_FALSE(lmg::oscillator_stability(res).stable);
  EXPECT_GT(oracle::mathieu_peak(res.epsilon_sq, res.drive_coeff, omega, 200), 100.0);

  lmg::OscillatorParams off = res;
  off.epsilon_sq = std::pow(0.37 * omega, 2);
  off.drive_coeff = 0.05 * off.epsilon_sq;
  const auto s = lmg::oscillator_stability(off);
  EXPECT_TRUE(s.stable);
  EXPECT_NEAR(s.monodromy_determinant, 1.0, 1e-8);
  EXPECT_LT(oracle::mathieu_peak(off.epsilon_sq, off.drive_coeff, omega, 200), 2.0);
}

TEST(Detuning, Values) {
  lmg::ModelParams p;
  EXPECT_DOUBLE_EQ(lmg::resonance_detuning(p).delta, 1.0);
  p.h = -20.0;
  p.m = 1;
  EXPECT_DOUBLE_EQ(lmg::resonance_detuning(p).delta, 0.0);
  auto q = strong_drive(10);
  EXPECT_DOUBLE_EQ(lmg::resonance_detuning(q).rwa_ratio, 0.05);
}

}  // namespace
