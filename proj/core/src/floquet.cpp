#include "lmg/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "lmg/error.hpp"
#include "schrodinger.hpp"

namespace lmg {

void IntegratorSettings::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidParameter("integrator tolerances must be positive");
  if (!(max_step_fraction > 0.0) || max_step_fraction > 1.0 / 16.0)
    throw InvalidParameter("integrator max step must be in (0, T/16]");
  if (method != "rkf78") throw InvalidParameter("unknown integrator method '" + method + "'");
}

IntegratorSettings IntegratorSettings::halved() const {
  IntegratorSettings s = *this;
  s.rtol *= 0.5;
  s.atol *= 0.5;
  return s;
}

CMatrix propagator(const ModelParams& params, const CollectiveSpinOps& ops, double t_start,
                   double t_end, const IntegratorSettings& settings) {
  if (t_end < t_start) throw InvalidParameter("propagator: t_end must not precede t_start");
  const detail::SchrodingerIntegrator integrator(params, ops, settings);
  CMatrix u = integrator.advance(CMatrix::Identity(ops.dim, ops.dim), t_start, t_end);
  const double defect = unitarity_defect(u);
  if (!(defect <= kAccuracyGuard))
    throw AccuracyError("propagator: unitarity defect " + std::to_string(defect) +
                        " exceeds guard; tighten rtol/atol");
  return u;
}

CMatrix propagator(const ModelParams& params, const CollectiveSpinOps& ops, double t_end,
                   const IntegratorSettings& settings) {
  if (t_end < 0.0) throw InvalidParameter("propagator: t_end must be non-negative");
  return propagator(params, ops, 0.0, t_end, settings);
}

CMatrix monodromy(const ModelParams& params, const CollectiveSpinOps& ops,
                  const IntegratorSettings& settings) {
  return propagator(params, ops, 0.0, params.period(), settings);
}

double fold_quasienergy(double value, double omega) {
  const double half = 0.5 * omega;
  double r = value - omega * std::floor((value + half) / omega);
  if (r <= -half + 1e-12) r += omega;
  if (r > half) r -= omega;
  return r;
}

double zone_distance(double a, double b, double omega) {
  return std::abs(fold_quasienergy(a - b, omega));
}

namespace {

struct Mode {
  double quasienergy;
  CVector vector;
  double parity;
};

std::vector<Eigen::Index> sector_indices(Eigen::Index dim, int parity_bit) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = parity_bit; k < dim; k += 2) idx.push_back(k);
  return idx;
}

CMatrix submatrix(const CMatrix& a, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  CMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = a(idx[r], idx[c]);
  return out;
}

double parity_of(const CVector& v) {
  double p = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) p += (k % 2 == 0 ? 1.0 : -1.0) * std::norm(v(k));
  return p;
}

// Schur vectors of a normal matrix are orthonormal eigenvectors, also inside
// degenerate eigenphase clusters.
void decompose_block(const CMatrix& block, const std::vector<Eigen::Index>& idx, Eigen::Index dim,
                     double period, double omega, std::vector<Mode>& modes) {
  Eigen::ComplexSchur<CMatrix> schur(block);
  const CMatrix& t = schur.matrixT();
  const CMatrix& z = schur.matrixU();
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    CVector v = CVector::Zero(dim);
    for (Eigen::Index r = 0; r < block.rows(); ++r) v(idx[r]) = z(r, i);
    const double eps = fold_quasienergy(-std::arg(t(i, i)) / period, omega);
    modes.push_back({eps, v, parity_of(v)});
  }
}

}  // namespace

QuasiSpectrum quasienergies(const CMatrix& monodromy, double omega) {
  if (monodromy.rows() != monodromy.cols() || monodromy.rows() == 0)
    throw InvalidParameter("quasienergies: monodromy must be a non-empty square matrix");
  if (!(omega > 0.0)) throw InvalidParameter("quasienergies: omega must be positive");
  const double defect = unitarity_defect(monodromy);
  if (!(defect <= kAccuracyGuard))
    throw InvalidParameter("quasienergies: input is not unitary (defect " + std::to_string(defect) + ")");

  const Eigen::Index dim = monodromy.rows();
  const double period = 2.0 * std::numbers::pi / omega;

  double off_sector = 0.0;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if ((r + c) % 2 == 1) off_sector += std::norm(monodromy(r, c));

  std::vector<Mode> modes;
  if (std::sqrt(off_sector) < 1e-8) {
    for (int bit : {0, 1}) {
      const auto idx = sector_indices(dim, bit);
      if (idx.empty()) continue;
      decompose_block(submatrix(monodromy, idx), idx, dim, period, omega, modes);
    }
  } else {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(dim));
    std::iota(all.begin(), all.end(), Eigen::Index{0});
    decompose_block(monodromy, all, dim, period, omega, modes);
  }

  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.quasienergy != b.quasienergy) return a.quasienergy < b.quasienergy;
    return a.parity > b.parity;
  });

  QuasiSpectrum spectrum;
  spectrum.omega = omega;
  spectrum.unitarity_defect = defect;
  spectrum.modes.resize(dim, dim);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    spectrum.quasienergies.push_back(modes[i].quasienergy);
    spectrum.parity_expect.push_back(modes[i].parity);
    spectrum.modes.col(static_cast<Eigen::Index>(i)) = modes[i].vector;
  }
  return spectrum;
}

namespace {

// Both lists sorted ascending; chooses the cyclic shift with the smallest
// total zone distance, which keeps branches that wrap across the zone edge
// paired with their partners.
std::vector<std::pair<double, double>> match_cyclic(std::vector<double> numeric,
                                                    std::vector<double> effective, double omega) {
  std::sort(numeric.begin(), numeric.end());
  std::sort(effective.begin(), effective.end());
  const std::size_t n = numeric.size();
  std::size_t best_shift = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) cost += zone_distance(numeric[i], effective[(i + s) % n], omega);
    if (cost < best_cost - 1e-15) {
      best_cost = cost;
      best_shift = s;
    }
  }
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(numeric[i], effective[(i + best_shift) % n]);
  return pairs;
}

}  // namespace

std::vector<RwaPair> rwa_comparison(const ModelParams& params, const CollectiveSpinOps& ops,
                                    const IntegratorSettings& settings) {
  const CMatrix h0 = effective_h0_closed_form(params, ops);
  const QuasiSpectrum spectrum = quasienergies(monodromy(params, ops, settings), params.omega);

  std::vector<RwaPair> out;
  std::vector<double> numeric_by_sector[2];
  for (std::size_t i = 0; i < spectrum.quasienergies.size(); ++i)
    numeric_by_sector[spectrum.parity_expect[i] >= 0.0 ? 0 : 1].push_back(spectrum.quasienergies[i]);

  std::vector<double> effective_by_sector[2];
  for (int bit : {0, 1}) {
    const auto idx = sector_indices(ops.dim, bit);
    if (idx.empty()) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(submatrix(h0, idx), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      effective_by_sector[bit].push_back(fold_quasienergy(solver.eigenvalues()(i), params.omega));
  }

  const bool sectors_match = numeric_by_sector[0].size() == effective_by_sector[0].size() &&
                             numeric_by_sector[1].size() == effective_by_sector[1].size();
  if (sectors_match) {
    for (int bit : {0, 1}) {
      for (const auto& [num, eff] : match_cyclic(numeric_by_sector[bit], effective_by_sector[bit], params.omega))
        out.push_back({num, eff, zone_distance(num, eff, params.omega), bit == 0 ? 1 : -1});
    }
  } else {
    // Degenerate modes with mixed parity: match the whole spectrum at once.
    std::vector<double> all_eff = effective_by_sector[0];
    all_eff.insert(all_eff.end(), effective_by_sector[1].begin(), effective_by_sector[1].end());
    for (const auto& [num, eff] : match_cyclic(spectrum.quasienergies, all_eff, params.omega))
      out.push_back({num, eff, zone_distance(num, eff, params.omega), 0});
  }

  std::stable_sort(out.begin(), out.end(), [](const RwaPair& a, const RwaPair& b) {
    if (a.quasienergy != b.quasienergy) return a.quasienergy < b.quasienergy;
    return a.parity > b.parity;
  });
  return out;
}

}  // namespace lmg
