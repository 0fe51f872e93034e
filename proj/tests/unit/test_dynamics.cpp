#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lmg/dynamics.hpp"
#include "lmg/error.hpp"

namespace {

using lmg::CMatrix;
using lmg::CVector;

lmg::ModelParams strong_drive(int n, double omega = 40.0) {
  lmg::ModelParams p;
  p.h = -1.0;
  p.gamma0x = -1.0;
  p.gamma1x = 210.0;
  p.gammay = 2.0;
  p.omega = omega;
  p.n_particles = n;
  return p;
}

std::vector<double> grid(double t_end, int count) {
  std::vector<double> t;
  for (int k = 0; k <= count; ++k) t.push_back(t_end * k / count);
  return t;
}

CVector random_state(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = {g(rng), g(rng)};
  return v / v.norm();
}

TEST(Frame, Names) {
  for (auto f : {lmg::Frame::lab, lmg::Frame::rotating, lmg::Frame::stroboscopic, lmg::Frame::effective})
    EXPECT_EQ(lmg::parse_frame(lmg::to_string(f)), f);
  EXPECT_THROW(lmg::parse_frame("body"), lmg::InvalidParameter);
}

TEST(Evolve, FreePrecessionAboutZ) {
  lmg::ModelParams p;
  p.h = -1.0;
  p.n_particles = 8;
  const auto ops = lmg::build_ops(8);
  const double theta = 1.1, phi = 0.3;
  const auto traj = lmg::evolve(p, ops, lmg::coherent_state(8, theta, phi), grid(3.0, 30));
  const double r0 = std::sin(theta);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_NEAR(traj.jz[i], -std::cos(theta), 1e-9);
    // H = -h Jz with h = -1 precesses about +z at unit rate.
    const std::complex<double> perp(traj.jx[i], traj.jy[i]);
    EXPECT_NEAR(std::abs(perp), r0, 1e-9);
    EXPECT_NEAR(std::arg(perp * std::exp(std::complex<double>(0.0, -phi - traj.times[i]))), 0.0, 1e-8);
  }
}

TEST(Evolve, ParityAndNormConserved) {
  auto p = strong_drive(12);
  const auto ops = lmg::build_ops(12);
  const auto traj = lmg::evolve(p, ops, random_state(13, 4), grid(3 * p.period(), 40));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    EXPECT_LT(traj.norm_drift[i], 1e-8);
    EXPECT_LT(traj.parity_drift[i], 1e-8);
  }
}

TEST(Evolve, InputChecks) {
  auto p = strong_drive(4);
  const auto ops = lmg::build_ops(4);
  const CVector psi = lmg::coherent_state(4, 0.5, 0.0);
  EXPECT_THROW(lmg::evolve(p, ops, 2.0 * psi, {0.0, 0.1}), lmg::InvalidParameter);
  EXPECT_THROW(lmg::evolve(p, ops, psi, {0.1, 0.1}), lmg::InvalidParameter);
  EXPECT_THROW(lmg::evolve(p, ops, psi, {-0.1}), lmg::InvalidParameter);
  EXPECT_THROW(lmg::evolve(p, lmg::build_ops(5), psi, {0.1}), lmg::InvalidParameter);
}

TEST(Rotating, BothRoutesAgree) {
  for (int m : {0, 2}) {
    auto p = strong_drive(10);
    p.m = m;
    const auto ops = lmg::build_ops(10);
    const auto hist = lmg::evolve_states(p, ops, lmg::coherent_state(10, 0.9, -0.4), grid(2 * p.period(), 23));
    const auto a = lmg::rotating_expectations(p, ops, hist);
    const auto b = lmg::rotating_expectations_by_operators(p, ops, hist);
    EXPECT_EQ(a.frame, lmg::Frame::rotating);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a.jx[i], b.jx[i], 1e-10);
      EXPECT_NEAR(a.jy[i], b.jy[i], 1e-10);
      EXPECT_NEAR(a.jz[i], b.jz[i], 1e-10);
    }
  }
}

TEST(Rotating, CoincidesWithLabAtStartAndFullPeriods) {
  auto p = strong_drive(10);
  const auto ops = lmg::build_ops(10);
  const double T = p.period();
  const auto hist = lmg::evolve_states(p, ops, lmg::coherent_state(10, 1.2, 0.7), {0.0, 0.5 * T, T, 2 * T});
  const auto lab = lmg::trajectory_from_states(lmg::Frame::lab, ops, hist);
  const auto rot = lmg::rotating_expectations(p, ops, hist);
  for (std::size_t i : {0u, 2u, 3u}) {
    EXPECT_NEAR(rot.jx[i], lab.jx[i], 1e-9);
    EXPECT_NEAR(rot.jy[i], lab.jy[i], 1e-9);
    EXPECT_NEAR(rot.jz[i], lab.jz[i], 1e-9);
  }
}

TEST(Stroboscopic, FirstSnapshotMatchesDirectEvolution) {
  auto p = strong_drive(10);
  const auto ops = lmg::build_ops(10);
  const CVector psi0 = lmg::coherent_state(10, 0.8, 0.2);
  const auto strobe = lmg::stroboscopic(p, ops, psi0, 1);
  const auto lab = lmg::evolve(p, ops, psi0, {p.period()});
  ASSERT_EQ(strobe.size(), 2u);
  EXPECT_DOUBLE_EQ(strobe.times[1], p.period());
  EXPECT_NEAR(strobe.jx[1], lab.jx[0], 1e-10);
  EXPECT_NEAR(strobe.jy[1], lab.jy[0], 1e-10);
  EXPECT_NEAR(strobe.jz[1], lab.jz[0], 1e-10);
  EXPECT_THROW(lmg::stroboscopic(p, ops, psi0, 0), lmg::InvalidParameter);
}

TEST(Stroboscopic, LabStatesEqualRotatingStates) {
  auto p = strong_drive(8);
  const auto ops = lmg::build_ops(8);
  const CMatrix u = lmg::monodromy(p, ops);
  const auto hist = lmg::stroboscopic_states(ops, lmg::coherent_state(8, 1.0, 1.0), 5, u, p.period());
  for (std::size_t r = 0; r < hist.states.size(); ++r) {
    const CVector rot = lmg::rotating_unitary(p, ops, hist.times[r]).adjoint() * hist.states[r];
    EXPECT_LT((rot - hist.states[r]).norm(), 1e-9);
  }
}

TEST(Effective, EigenstateIsStationary) {
  auto p = strong_drive(10);
  const auto ops = lmg::build_ops(10);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lmg::effective_h0_closed_form(p, ops));
  const CVector psi0 = es.eigenvectors().col(3);
  const auto traj = lmg::effective_evolution(p, ops, psi0, grid(5.0, 10));
  for (std::size_t i = 1; i < traj.size(); ++i) {
    EXPECT_NEAR(traj.jx[i], traj.jx[0], 1e-10);
    EXPECT_NEAR(traj.jy[i], traj.jy[0], 1e-10);
    EXPECT_NEAR(traj.jz[i], traj.jz[0], 1e-10);
  }
}

TEST(Effective, GeneratorConserved) {
  auto p = strong_drive(10);
  const auto ops = lmg::build_ops(10);
  const auto traj = lmg::effective_evolution(p, ops, random_state(11, 9), grid(10.0, 25));
  ASSERT_EQ(traj.generator_expect.size(), traj.size());
  for (double e : traj.generator_expect) EXPECT_NEAR(e, traj.generator_expect.front(), 1e-10);
}

TEST(Effective, ApproachesExactStroboscopicStateAsFrequencyGrows) {
  auto infidelity = [](double omega) {
    auto p = strong_drive(10, omega);
    const auto ops = lmg::build_ops(10);
    const CVector psi0 = lmg::coherent_state(10, 1.0, 0.5);
    const auto exact = lmg::stroboscopic_states(ops, psi0, 10, lmg::monodromy(p, ops), p.period());
    const auto eff = lmg::effective_states(p, ops, psi0, {10 * p.period()});
    return 1.0 - std::abs(exact.states.back().dot(eff.states.back()));
  };
  const double at40 = infidelity(40.0);
  const double at80 = infidelity(80.0);
  EXPECT_LT(at40, 0.1);
  EXPECT_LT(at80, at40);
}

TEST(Projection, CoherentStartAndSouthPole) {
  auto p = strong_drive(20);
  const auto ops = lmg::build_ops(20);
  const double q = 0.3, s = -0.45;
  auto traj = lmg::evolve(p, ops, lmg::coherent_state_at(20, q, s), {0.0, 0.01});
  traj = lmg::project_trajectory(traj, 20);
  ASSERT_TRUE(traj.projected());
  EXPECT_NEAR(traj.path[0].q, q, 1e-8);
  EXPECT_NEAR(traj.path[0].p, s, 1e-8);

  lmg::Trajectory south;
  south.times = {0.0, 1.0};
  south.jx = {0.0, 0.0};
  south.jy = {0.0, 0.0};
  south.jz = {-1.0, 0.0};
  south = lmg::project_trajectory(south, 20);
  EXPECT_NEAR(south.path[0].q, 0.0, 1e-15);
  EXPECT_NEAR(south.path[0].p, 0.0, 1e-15);
  EXPECT_FALSE(south.flagged[0]);
  EXPECT_TRUE(south.flagged[1]);
  EXPECT_TRUE(std::isnan(south.path[1].q));
}

TEST(Confinement, StatisticsOfAStaticPath) {
  lmg::ModelParams p;
  p.gamma0x = 0.5;
  p.gammay = 2.0;
  lmg::Trajectory t;
  t.times = {0.0, 1.0};
  t.path = {{0.0, 0.5, 0, 0, 0.25, 0.5}, {0.0, 0.6, 0, 0, 0.36, 0.5}};
  t.flagged = {0, 0};
  const auto s = lmg::confinement(p, t, 0.0, 0.5, -0.5);
  EXPECT_NEAR(s.max_distance, 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(s.min_energy, lmg::qel(p, 0.0, 0.5));
  EXPECT_DOUBLE_EQ(s.max_energy, lmg::qel(p, 0.0, 0.6));
  EXPECT_TRUE(s.confined);
  EXPECT_EQ(s.samples, 2);
}

}  // namespace
