#include "lmg/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <thread>

#include "lmg/bessel.hpp"
#include "lmg/error.hpp"

namespace lmg {

namespace {

constexpr double kDiskSlack = 1e-12;

// Second-order jet in (Q, P): value, gradient and Hessian carried together.
struct Jet {
  double v = 0.0;
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
};

Jet constant(double c) { return {c, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero()}; }

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.g - b.g, a.h - b.h}; }
Jet operator*(double c, const Jet& a) { return {c * a.v, c * a.g, c * a.h}; }

Jet operator*(const Jet& a, const Jet& b) {
  const Eigen::Matrix2d cross = a.g * b.g.transpose();
  return {a.v * b.v, a.v * b.g + b.v * a.g, a.v * b.h + b.v * a.h + cross + cross.transpose()};
}

// Chain rule for a scalar function with derivatives f1, f2 at a.v.
Jet apply(const Jet& a, double f0, double f1, double f2) {
  return {f0, f1 * a.g, f1 * a.h + f2 * a.g * a.g.transpose()};
}

Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return apply(a, s, 0.5 / s, -0.25 / (s * a.v));
}

// J0' = -J1, J0'' = (J2 - J0) / 2
Jet j0(const Jet& a) {
  const double u = a.v;
  const double b0 = bessel_j(0, u);
  return apply(a, b0, -bessel_j(1, u), 0.5 * (bessel_j(2, u) - b0));
}

void require_m0(const ModelParams& params) {
  if (params.m != 0) throw UnsupportedResonance("quasienergy landscape is only defined for m = 0");
}

Jet qel_jet(const ModelParams& params, double q, double p) {
  require_m0(params);
  if (!(q * q + p * p < 1.0))
    throw DomainError("landscape derivatives are singular on or outside the unit circle");
  const Jet qj{q, {1.0, 0.0}, Eigen::Matrix2d::Zero()};
  const Jet pj{p, {0.0, 1.0}, Eigen::Matrix2d::Zero()};
  const Jet a = qj * qj + pj * pj;
  const Jet x = a - constant(0.5);
  const Jet w = constant(1.0) - a;
  const Jet u1 = (2.0 * params.gamma1x / params.omega) * (qj * sqrt(w));
  const Jet x2 = x * x;
  const Jet wp2 = w * pj * pj;
  const double gy = params.gammay;
  return (-params.h) * (x * j0(u1)) - (0.5 * gy) * (x2 + wp2) +
         (0.5 * gy) * ((x2 - wp2) * j0(2.0 * u1)) - params.gamma0x * (w * qj * qj);
}

StationaryKind classify(const Eigen::Vector2d& eig, double tol) {
  if (std::abs(eig(0)) <= tol || std::abs(eig(1)) <= tol) return StationaryKind::degenerate;
  if (eig(0) > 0.0) return StationaryKind::minimum;
  if (eig(1) < 0.0) return StationaryKind::maximum;
  return StationaryKind::saddle;
}

QelPoint evaluate(const ModelParams& params, double q, double p, double curvature_tol) {
  const Jet e = qel_jet(params, q, p);
  QelPoint pt;
  pt.q = q;
  pt.p = p;
  pt.energy = e.v;
  pt.gradient = e.g;
  pt.hessian = 0.5 * (e.h + e.h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(pt.hessian, Eigen::EigenvaluesOnly);
  pt.hessian_eigenvalues = solver.eigenvalues();
  pt.kind = classify(pt.hessian_eigenvalues, curvature_tol);
  return pt;
}

bool inside(double q, double p, double margin) { return q * q + p * p <= 1.0 - margin; }

// Energy strictly above the centre on a small ring: a minimum of higher
// order when the Hessian alone cannot tell.
bool ring_minimum(const ModelParams& params, const QelPoint& pt) {
  constexpr double radius = 5e-3;
  constexpr int samples = 32;
  for (int k = 0; k < samples; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / samples;
    const double q = pt.q + radius * std::cos(angle);
    const double p = pt.p + radius * std::sin(angle);
    if (q * q + p * p >= 1.0) return false;
    if (!(qel(params, q, p) > pt.energy)) return false;
  }
  return true;
}

enum class Outcome { converged, escaped, failed };

struct Refined {
  QelPoint point;
  Outcome outcome = Outcome::failed;
};

// Damped Newton with backtracking. Newton steps are used while the Hessian
// is positive definite, scaled gradient steps otherwise. Near convergence
// energy differences drop below rounding, so a step is also accepted when it
// shrinks the gradient under a positive definite Hessian.
Refined descend(const ModelParams& params, double q0, double p0, const MinimaOptions& opt) {
  Refined out;
  double q = q0;
  double p = p0;
  QelPoint pt = evaluate(params, q, p, opt.curvature_tol);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    pt.iterations = it;
    const double gnorm = pt.gradient.norm();
    if (gnorm < opt.refine_tol) {
      pt.converged = true;
      out.point = pt;
      out.outcome = inside(q, p, opt.boundary_margin) ? Outcome::converged : Outcome::escaped;
      return out;
    }
    const bool newton = pt.hessian_eigenvalues(0) > 1e-12;
    Eigen::Vector2d step;
    if (newton) {
      step = -pt.hessian.ldlt().solve(pt.gradient);
    } else {
      // Saddle-free Newton: curvature magnitudes, floored, keep narrow curved
      // valleys from stalling a plain gradient step.
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(pt.hessian);
      const Eigen::Vector2d lam = solver.eigenvalues().cwiseAbs();
      const double floor = std::max(1e-6 * lam.maxCoeff(), 1e-8);
      const Eigen::Matrix2d& v = solver.eigenvectors();
      const Eigen::Vector2d gv = v.transpose() * pt.gradient;
      step = -v * Eigen::Vector2d(gv(0) / std::max(lam(0), floor), gv(1) / std::max(lam(1), floor));
    }
    const double max_len = 0.1;
    if (step.norm() > max_len) step *= max_len / step.norm();

    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const double qn = q + step(0);
      const double pn = p + step(1);
      if (qn * qn + pn * pn < 1.0 - 1e-12) {
        const QelPoint trial = evaluate(params, qn, pn, opt.curvature_tol);
        const bool lower = trial.energy < pt.energy;
        const bool flatter = newton && trial.gradient.norm() < gnorm && trial.energy <= pt.energy + 1e-14;
        if (lower || flatter) {
          q = qn;
          p = pn;
          pt = trial;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted && pt.hessian_eigenvalues(0) < 0.0) {
      // Stuck on a symmetry line through a saddle: the gradient has no
      // component along the descending direction, so step along it.
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(pt.hessian);
      const Eigen::Vector2d dir = solver.eigenvectors().col(0);
      for (double len = 1e-2; len > 1e-7 && !accepted; len *= 0.5) {
        for (double sign : {1.0, -1.0}) {
          const double qn = q + sign * len * dir(0);
          const double pn = p + sign * len * dir(1);
          if (qn * qn + pn * pn >= 1.0 - 1e-12) continue;
          const QelPoint trial = evaluate(params, qn, pn, opt.curvature_tol);
          if (trial.energy < pt.energy) {
            q = qn;
            p = pn;
            pt = trial;
            accepted = true;
            break;
          }
        }
      }
    }
    if (!accepted) {
      // Nothing downhill at double precision. Accept the point if it is
      // already stationary to within rounding of the gradient itself.
      if (gnorm < 1e3 * opt.refine_tol) {
        pt.converged = true;
        pt.diagnostic = "stalled at gradient " + std::to_string(gnorm);
        out.point = pt;
        out.outcome = inside(q, p, opt.boundary_margin) ? Outcome::converged : Outcome::escaped;
        return out;
      }
      break;
    }
    if (!inside(q, p, opt.boundary_margin)) {
      out.point = pt;
      out.outcome = Outcome::escaped;
      return out;
    }
  }
  pt.converged = false;
  pt.iterations = it;
  pt.diagnostic = "refinement did not converge; gradient norm " + std::to_string(pt.gradient.norm());
  out.point = pt;
  out.outcome = inside(q, p, 1e-3) ? Outcome::failed : Outcome::escaped;
  return out;
}

// Plain Newton on the gradient: converges to the nearest stationary point of
// any kind (used for saddles).
QelPoint newton_stationary(const ModelParams& params, double q, double p, const MinimaOptions& opt) {
  QelPoint pt = evaluate(params, q, p, opt.curvature_tol);
  for (int it = 0; it < opt.max_iterations; ++it) {
    pt.iterations = it;
    const double gnorm = pt.gradient.norm();
    if (gnorm < opt.refine_tol) {
      pt.converged = true;
      return pt;
    }
    Eigen::Vector2d step = -pt.hessian.fullPivLu().solve(pt.gradient);
    if (!step.allFinite()) break;
    if (step.norm() > 0.05) step *= 0.05 / step.norm();
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      const double qn = pt.q + step(0);
      const double pn = pt.p + step(1);
      if (qn * qn + pn * pn < 1.0 - 1e-12) {
        QelPoint trial = evaluate(params, qn, pn, opt.curvature_tol);
        if (trial.gradient.norm() < gnorm) {
          pt = trial;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (gnorm < 1e3 * opt.refine_tol) {
        pt.converged = true;
        pt.diagnostic = "stalled at gradient " + std::to_string(gnorm);
        return pt;
      }
      break;
    }
  }
  pt.converged = false;
  pt.diagnostic = "stationary-point search did not converge";
  return pt;
}

struct Grid {
  int n = 0;
  double step = 0.0;
  std::vector<double> energy;
  std::vector<char> valid;

  double coord(int i) const { return -1.0 + step * i; }
  std::size_t index(int i, int k) const { return static_cast<std::size_t>(i) * n + k; }
};

Grid sample_grid(const ModelParams& params, int grid_n, double margin) {
  Grid g;
  g.n = grid_n;
  g.step = 2.0 / (grid_n - 1);
  g.energy.assign(static_cast<std::size_t>(grid_n) * grid_n, 0.0);
  g.valid.assign(g.energy.size(), 0);
  for (int i = 0; i < grid_n; ++i) {
    for (int k = 0; k < grid_n; ++k) {
      const double q = g.coord(i);
      const double p = g.coord(k);
      if (!inside(q, p, margin)) continue;
      g.valid[g.index(i, k)] = 1;
      g.energy[g.index(i, k)] = qel(params, q, p);
    }
  }
  return g;
}

bool discrete_minimum(const Grid& g, int i, int k) {
  const double e = g.energy[g.index(i, k)];
  for (int di = -1; di <= 1; ++di) {
    for (int dk = -1; dk <= 1; ++dk) {
      if (di == 0 && dk == 0) continue;
      const int a = i + di;
      const int b = k + dk;
      if (a < 0 || b < 0 || a >= g.n || b >= g.n || !g.valid[g.index(a, b)]) continue;
      if (g.energy[g.index(a, b)] < e) return false;
    }
  }
  return true;
}

void sort_points(std::vector<QelPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const QelPoint& a, const QelPoint& b) {
    if (std::abs(a.energy - b.energy) > 1e-9) return a.energy < b.energy;
    if (a.q != b.q) return a.q < b.q;
    return a.p < b.p;
  });
}

void add_unique(std::vector<QelPoint>& pts, const QelPoint& pt, double radius) {
  for (const QelPoint& other : pts)
    if (std::hypot(other.q - pt.q, other.p - pt.p) < radius) return;
  pts.push_back(pt);
}

}  // namespace

std::string_view to_string(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::minimum: return "minimum";
    case StationaryKind::saddle: return "saddle";
    case StationaryKind::maximum: return "maximum";
    case StationaryKind::degenerate: return "degenerate";
  }
  return "unknown";
}

double qel(const ModelParams& params, double q, double p) {
  require_m0(params);
  const double a = q * q + p * p;
  if (!(a <= 1.0 + kDiskSlack))
    throw DomainError("qel: point (" + std::to_string(q) + ", " + std::to_string(p) +
                      ") lies outside the unit disk");
  const double w = std::max(0.0, 1.0 - a);
  const double x = a - 0.5;
  const double u1 = 2.0 * params.gamma1x * q * std::sqrt(w) / params.omega;
  const double gy = params.gammay;
  return -params.h * x * bessel_j0(u1) - 0.5 * gy * (x * x + w * p * p) +
         0.5 * gy * (x * x - w * p * p) * bessel_j0(2.0 * u1) - params.gamma0x * w * q * q;
}

Eigen::Vector2d qel_gradient(const ModelParams& params, double q, double p) {
  return qel_jet(params, q, p).g;
}

Eigen::Matrix2d qel_hessian(const ModelParams& params, double q, double p) {
  const Eigen::Matrix2d h = qel_jet(params, q, p).h;
  return 0.5 * (h + h.transpose());
}

OriginEigenvalues origin_eigenvalues(const ModelParams& params) {
  const double ratio = params.gamma1x / params.omega;
  OriginEigenvalues out;
  out.lambda1 = -2.0 * (params.h + params.gammay);
  out.lambda2 = -2.0 * params.h - 2.0 * params.gamma0x - (params.h + params.gammay) * ratio * ratio;
  return out;
}

QelPoint evaluate_point(const ModelParams& params, double q, double p) {
  QelPoint pt = evaluate(params, q, p, MinimaOptions{}.curvature_tol);
  pt.converged = pt.gradient.norm() < MinimaOptions{}.refine_tol;
  return pt;
}

int MinimaReport::phase_count() const {
  int total = count;
  for (const QelPoint& d : degenerate)
    if (d.higher_order_minimum) ++total;
  return total;
}

MinimaReport find_minima(const ModelParams& params, int grid_n, double refine_tol) {
  MinimaOptions opt;
  opt.grid_n = grid_n;
  opt.refine_tol = refine_tol;
  return find_minima(params, opt);
}

MinimaReport find_minima(const ModelParams& params, const MinimaOptions& opt) {
  require_m0(params);
  params.validate();
  if (opt.grid_n < 101) throw InvalidParameter("find_minima: grid_n must be >= 101");
  if (!(opt.refine_tol > 0.0)) throw InvalidParameter("find_minima: refine_tol must be positive");

  MinimaReport report;
  report.params = params;
  report.grid_resolution = opt.grid_n;

  const Grid grid = sample_grid(params, opt.grid_n, opt.boundary_margin);
  std::vector<std::pair<double, double>> candidates;
  for (int i = 0; i < grid.n; ++i)
    for (int k = 0; k < grid.n; ++k)
      if (grid.valid[grid.index(i, k)] && discrete_minimum(grid, i, k))
        candidates.emplace_back(grid.coord(i), grid.coord(k));

  // A candidate that lands exactly on a saddle (the origin, typically) is
  // pushed off along its descending direction once.
  std::vector<std::pair<double, double>> pushed;
  auto process = [&](double q0, double p0, bool allow_push) {
    const Refined r = descend(params, q0, p0, opt);
    if (r.outcome == Outcome::escaped) {
      ++report.boundary_escapes;
      return;
    }
    if (r.outcome == Outcome::failed) {
      add_unique(report.failures, r.point, opt.cluster_radius);
      return;
    }
    const QelPoint& pt = r.point;
    switch (pt.kind) {
      case StationaryKind::minimum:
        add_unique(report.minima, pt, opt.cluster_radius);
        break;
      case StationaryKind::degenerate: {
        QelPoint d = pt;
        d.higher_order_minimum = ring_minimum(params, d);
        add_unique(report.degenerate, d, opt.cluster_radius);
        break;
      }
      case StationaryKind::saddle:
      case StationaryKind::maximum:
        if (allow_push) {
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(pt.hessian);
          const Eigen::Vector2d dir = solver.eigenvectors().col(0);
          const double offset = 0.5 * grid.step;
          pushed.emplace_back(pt.q + offset * dir(0), pt.p + offset * dir(1));
          pushed.emplace_back(pt.q - offset * dir(0), pt.p - offset * dir(1));
        }
        break;
    }
  };
  for (const auto& [q, p] : candidates) process(q, p, true);
  for (std::size_t i = 0; i < pushed.size(); ++i) {
    const auto [q, p] = pushed[i];
    if (inside(q, p, opt.boundary_margin)) process(q, p, false);
  }

  // A degenerate point that also showed up as a minimum is the same point.
  std::erase_if(report.degenerate, [&](const QelPoint& d) {
    return std::any_of(report.minima.begin(), report.minima.end(), [&](const QelPoint& m) {
      return std::hypot(m.q - d.q, m.p - d.p) < opt.cluster_radius;
    });
  });

  sort_points(report.minima);
  sort_points(report.degenerate);
  sort_points(report.failures);
  report.count = static_cast<int>(report.minima.size());

  double emin = std::numeric_limits<double>::infinity();
  for (const QelPoint& m : report.minima) emin = std::min(emin, m.energy);
  for (const QelPoint& d : report.degenerate)
    if (d.higher_order_minimum) emin = std::min(emin, d.energy);
  report.global_minimum_energy = emin;

  const double r = opt.cluster_radius;
  for (const QelPoint& m : report.minima) {
    SymmetryPartners partners;
    for (std::size_t j = 0; j < report.minima.size(); ++j) {
      const QelPoint& o = report.minima[j];
      if (std::hypot(o.q + m.q, o.p - m.p) < r) partners.q_mirror = static_cast<int>(j);
      if (std::hypot(o.q - m.q, o.p + m.p) < r) partners.p_mirror = static_cast<int>(j);
    }
    report.partners.push_back(partners);
  }
  return report;
}

QelPoint rim_saddle(const ModelParams& params, const QelPoint& minimum, int grid_n) {
  require_m0(params);
  if (grid_n < 101) throw InvalidParameter("rim_saddle: grid_n must be >= 101");
  const MinimaOptions opt;
  const Grid grid = sample_grid(params, grid_n, opt.boundary_margin);

  const int si = std::clamp(static_cast<int>(std::lround((minimum.q + 1.0) / grid.step)), 0, grid.n - 1);
  const int sk = std::clamp(static_cast<int>(std::lround((minimum.p + 1.0) / grid.step)), 0, grid.n - 1);
  if (!grid.valid[grid.index(si, sk)]) throw DomainError("rim_saddle: minimum lies in the excluded rim");

  // Min-max flood: each cell's level is the lowest possible maximum along a
  // path from the start; `pass` remembers which cell set that maximum.
  const std::size_t cells = grid.energy.size();
  std::vector<double> level(cells, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> pass(cells, 0);
  std::vector<char> done(cells, 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  const std::size_t start = grid.index(si, sk);
  level[start] = grid.energy[start];
  pass[start] = start;
  queue.emplace(level[start], start);

  const double exclusion = 2.5 * grid.step;
  std::size_t pass_cell = start;
  bool found = false;
  while (!queue.empty()) {
    const auto [lvl, cell] = queue.top();
    queue.pop();
    if (done[cell]) continue;
    done[cell] = 1;
    const int i = static_cast<int>(cell / grid.n);
    const int k = static_cast<int>(cell % grid.n);
    const double far = std::hypot(grid.coord(i) - grid.coord(si), grid.coord(k) - grid.coord(sk));
    if (far > exclusion && grid.energy[cell] < lvl && discrete_minimum(grid, i, k)) {
      pass_cell = pass[cell];
      found = true;
      break;
    }
    for (int di = -1; di <= 1; ++di) {
      for (int dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dk == 0) continue;
        const int a = i + di;
        const int b = k + dk;
        if (a < 0 || b < 0 || a >= grid.n || b >= grid.n) continue;
        const std::size_t next = grid.index(a, b);
        if (!grid.valid[next]) {
          // Reached the rim: the basin spills over the boundary circle.
          pass_cell = pass[cell];
          if (-params.h * 0.5 > level[cell]) pass_cell = cell;
          found = true;
          break;
        }
        if (done[next]) continue;
        const double nl = std::max(lvl, grid.energy[next]);
        if (nl < level[next]) {
          level[next] = nl;
          pass[next] = grid.energy[next] >= lvl ? next : pass[cell];
          queue.emplace(nl, next);
        }
      }
      if (found) break;
    }
    if (found) break;
  }
  if (!found) throw Error("rim_saddle: flood exhausted the disk without leaving the basin");

  const int pi = static_cast<int>(pass_cell / grid.n);
  const int pk = static_cast<int>(pass_cell % grid.n);
  QelPoint saddle = newton_stationary(params, grid.coord(pi), grid.coord(pk), opt);
  if (!saddle.converged) {
    // Keep the grid estimate so callers still get an energy level.
    saddle = evaluate_point(params, grid.coord(pi), grid.coord(pk));
    saddle.converged = false;
    saddle.diagnostic = "rim saddle refinement did not converge; grid estimate";
  }
  return saddle;
}

bool PhaseDiagram::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const PhaseCell& c) { return c.count >= 0; });
}

namespace {

bool sweepable(Parameter p) {
  return p == Parameter::gamma0x || p == Parameter::gamma1x || p == Parameter::gammay;
}

void zero_crossings(const PhaseDiagram& d, double (*pick)(const PhaseCell&), std::vector<ContourPoint>& out) {
  const int n1 = d.axis1.steps;
  const int n2 = d.axis2.steps;
  auto interp = [](double x0, double x1, double f0, double f1) { return x0 + (x1 - x0) * f0 / (f0 - f1); };
  for (int i = 0; i < n1; ++i) {
    for (int k = 0; k < n2; ++k) {
      const PhaseCell& c = d.at(i, k);
      const double f = pick(c);
      if (f == 0.0) {
        out.push_back({c.axis1, c.axis2});
        continue;
      }
      if (k + 1 < n2) {
        const PhaseCell& n = d.at(i, k + 1);
        const double g = pick(n);
        if (f * g < 0.0) out.push_back({c.axis1, interp(c.axis2, n.axis2, f, g)});
      }
      if (i + 1 < n1) {
        const PhaseCell& n = d.at(i + 1, k);
        const double g = pick(n);
        if (f * g < 0.0) out.push_back({interp(c.axis1, n.axis1, f, g), c.axis2});
      }
    }
  }
}

}  // namespace

PhaseDiagram phase_diagram(const ModelParams& params, const SweepAxis& axis1, const SweepAxis& axis2,
                           const MinimaOptions& options, int workers) {
  require_m0(params);
  if (!sweepable(axis1.parameter) || !sweepable(axis2.parameter))
    throw InvalidParameter("phase_diagram: axes must be gx0, gx1 or gy");
  if (axis1.parameter == axis2.parameter) throw InvalidParameter("phase_diagram: axes must differ");
  if (axis1.steps < 2 || axis2.steps < 2) throw InvalidParameter("phase_diagram: each axis needs >= 2 steps");
  if (workers < 1) throw InvalidParameter("phase_diagram: workers must be >= 1");

  PhaseDiagram diagram;
  diagram.axis1 = axis1;
  diagram.axis2 = axis2;
  const std::size_t total = static_cast<std::size_t>(axis1.steps) * axis2.steps;
  diagram.cells.resize(total);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int i1 = static_cast<int>(idx / axis2.steps);
      const int i2 = static_cast<int>(idx % axis2.steps);
      PhaseCell& cell = diagram.cells[idx];
      cell.axis1 = axis1.value(i1);
      cell.axis2 = axis2.value(i2);
      ModelParams p = params;
      set_parameter(p, axis1.parameter, cell.axis1);
      set_parameter(p, axis2.parameter, cell.axis2);
      const OriginEigenvalues lam = origin_eigenvalues(p);
      cell.lambda1 = lam.lambda1;
      cell.lambda2 = lam.lambda2;
      try {
        cell.report = find_minima(p, options);
        cell.global_min_energy = cell.report.global_minimum_energy;
        if (cell.report.ok()) {
          cell.count = cell.report.phase_count();
        } else {
          cell.count = -1;
          cell.diagnostic = cell.report.failures.front().diagnostic;
        }
      } catch (const Error& e) {
        cell.count = -1;
        cell.diagnostic = e.what();
      }
    }
  };

  const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), total));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  zero_crossings(diagram, [](const PhaseCell& c) { return c.lambda1; }, diagram.lambda1_zero);
  zero_crossings(diagram, [](const PhaseCell& c) { return c.lambda2; }, diagram.lambda2_zero);
  return diagram;
}

}  // namespace lmg
