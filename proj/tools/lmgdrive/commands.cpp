#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cli.hpp"
#include "format.hpp"
#include "lmg/landscape.hpp"

namespace lmg::cli {

namespace {

using nlohmann::json;

// Runs body(i) for i in [0, count) on up to `workers` threads. Results are
// written by index, so the order never depends on scheduling.
template <typename Body>
void parallel_for(std::size_t count, int workers, Body body) {
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
}

json config_json(const RunConfig& config) {
  json j = json::object();
  for (const auto& [key, value] : config.describe()) j[key] = value;
  return j;
}

std::string finish_json(const RunConfig& config, json body) {
  json doc = json::object();
  doc["config"] = config_json(config);
  for (auto& [key, value] : body.items()) doc[key] = value;
  return json_header(config.describe()) + doc.dump(1) + "\n";
}

// Sweep points for up to two axes; a missing axis contributes one point.
std::vector<ModelParams> sweep_points(const RunConfig& config) {
  std::vector<ModelParams> points{config.params};
  for (const SweepAxis& axis : config.sweeps) {
    std::vector<ModelParams> next;
    for (const ModelParams& base : points) {
      for (int i = 0; i < axis.steps; ++i) {
        ModelParams p = base;
        set_parameter(p, axis.parameter, axis.value(i));
        next.push_back(p);
      }
    }
    points = std::move(next);
  }
  return points;
}

json point_json(const QelPoint& pt) {
  return json{{"q", pt.q},
              {"p", pt.p},
              {"energy", pt.energy},
              {"hess_eig1", pt.hessian_eigenvalues(0)},
              {"hess_eig2", pt.hessian_eigenvalues(1)},
              {"gradient_norm", pt.gradient.norm()},
              {"class", std::string(to_string(pt.kind))},
              {"higher_order_minimum", pt.higher_order_minimum},
              {"converged", pt.converged},
              {"iterations", pt.iterations},
              {"diagnostic", pt.diagnostic}};
}

json report_json(const MinimaReport& r) {
  json minima = json::array();
  for (std::size_t i = 0; i < r.minima.size(); ++i) {
    json m = point_json(r.minima[i]);
    m["q_mirror"] = r.partners[i].q_mirror;
    m["p_mirror"] = r.partners[i].p_mirror;
    minima.push_back(m);
  }
  json degenerate = json::array();
  for (const QelPoint& d : r.degenerate) degenerate.push_back(point_json(d));
  json failures = json::array();
  for (const QelPoint& f : r.failures) failures.push_back(point_json(f));
  return json{{"count", r.count},
              {"phase_count", r.phase_count()},
              {"global_minimum_energy", r.global_minimum_energy},
              {"grid_resolution", r.grid_resolution},
              {"boundary_escapes", r.boundary_escapes},
              {"minima", minima},
              {"degenerate", degenerate},
              {"failures", failures}};
}

}  // namespace

CommandResult cmd_quasienergies(const RunConfig& config) {
  std::vector<double> omegas;
  if (config.sweeps.empty()) {
    omegas.push_back(config.params.omega);
  } else {
    for (int i = 0; i < config.sweeps[0].steps; ++i) omegas.push_back(config.sweeps[0].value(i));
  }

  const CollectiveSpinOps ops = build_ops(config.params.n_particles);
  std::vector<std::vector<RwaPair>> results(omegas.size());
  std::vector<std::string> errors(omegas.size());
  std::vector<char> accuracy(omegas.size(), 0);
  parallel_for(omegas.size(), config.workers, [&](std::size_t i) {
    ModelParams p = config.params;
    p.omega = omegas[i];
    try {
      results[i] = rwa_comparison(p, ops, config.integrator);
    } catch (const AccuracyError& e) {
      errors[i] = e.what();
      accuracy[i] = 1;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::size_t failed = 0;
  std::size_t accuracy_failed = 0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    failed += errors[i].empty() ? 0 : 1;
    accuracy_failed += accuracy[i];
  }

  CommandResult result;
  if (failed == omegas.size()) {
    result.exit_code = accuracy_failed == failed ? kAccuracy : kUsage;
    result.message = errors.front();
    return result;
  }
  if (failed > 0) {
    result.exit_code = kPartial;
    result.message = std::to_string(failed) + " of " + std::to_string(omegas.size()) + " omega values failed";
  }

  if (config.format == Format::csv) {
    CsvWriter csv(config.describe());
    for (std::size_t i = 0; i < omegas.size(); ++i)
      if (!errors[i].empty()) csv.comment("failed omega=" + number(omegas[i]) + ": " + errors[i]);
    csv.columns({"omega", "branch_index", "quasienergy", "effective_eigenvalue", "deviation", "parity"});
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      for (std::size_t b = 0; b < results[i].size(); ++b) {
        const RwaPair& r = results[i][b];
        csv.row({number(omegas[i]), number(static_cast<int>(b)), number(r.quasienergy), number(r.effective_eigenvalue),
                 number(r.deviation), number(r.parity)});
      }
    }
    result.text = csv.text();
  } else {
    json points = json::array();
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      json branches = json::array();
      for (const RwaPair& r : results[i])
        branches.push_back({{"quasienergy", r.quasienergy},
                            {"effective_eigenvalue", r.effective_eigenvalue},
                            {"deviation", r.deviation},
                            {"parity", r.parity}});
      points.push_back({{"omega", omegas[i]}, {"error", errors[i]}, {"branches", branches}});
    }
    result.text = finish_json(config, {{"points", points}});
  }
  return result;
}

CommandResult cmd_phase_diagram(const RunConfig& config) {
  MinimaOptions opt;
  opt.grid_n = config.grid;
  const PhaseDiagram d = phase_diagram(config.params, config.sweeps[0], config.sweeps[1], opt, config.workers);

  CommandResult result;
  const auto failed = std::count_if(d.cells.begin(), d.cells.end(), [](const PhaseCell& c) { return c.count < 0; });
  if (failed > 0) {
    result.exit_code = kPartial;
    result.message = std::to_string(failed) + " cells failed to refine";
  }

  const std::string a1(parameter_name(d.axis1.parameter));
  const std::string a2(parameter_name(d.axis2.parameter));
  if (config.format == Format::csv) {
    CsvWriter csv(config.describe());
    csv.comment("axis1=" + a1 + " axis2=" + a2);
    csv.columns({"axis1", "axis2", "minima_count", "lambda1", "lambda2", "global_min_energy", "diagnostics"});
    for (const PhaseCell& c : d.cells)
      csv.row({number(c.axis1), number(c.axis2), number(c.count), number(c.lambda1), number(c.lambda2),
               number(c.global_min_energy), c.diagnostic.empty() ? "" : "\"" + c.diagnostic + "\""});
    result.text = csv.text();
  } else {
    json cells = json::array();
    for (const PhaseCell& c : d.cells)
      cells.push_back({{"axis1", c.axis1},
                       {"axis2", c.axis2},
                       {"minima_count", c.count},
                       {"lambda1", c.lambda1},
                       {"lambda2", c.lambda2},
                       {"global_min_energy", c.global_min_energy},
                       {"diagnostics", c.diagnostic},
                       {"report", report_json(c.report)}});
    auto contour = [](const std::vector<ContourPoint>& pts) {
      json arr = json::array();
      for (const ContourPoint& p : pts) arr.push_back({p.axis1, p.axis2});
      return arr;
    };
    result.text = finish_json(config, {{"axis1", a1},
                                       {"axis2", a2},
                                       {"cells", cells},
                                       {"lambda1_zero", contour(d.lambda1_zero)},
                                       {"lambda2_zero", contour(d.lambda2_zero)}});
  }
  return result;
}

CommandResult cmd_landscape(const RunConfig& config) {
  const int n = config.grid;
  const double step = 2.0 / (n - 1);
  CommandResult result;
  CsvWriter csv(config.describe());
  json rows = json::array();
  if (config.format == Format::csv) csv.columns({"q", "p", "energy"});
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      // The centre node is pinned to exactly 0 so the axes sit on the grid.
      const double q = (2 * i == n - 1) ? 0.0 : -1.0 + step * i;
      const double p = (2 * k == n - 1) ? 0.0 : -1.0 + step * k;
      if (q * q + p * p > 1.0 + 1e-12) continue;  // keep rim nodes lost to rounding
      const double e = qel(config.params, q, p);
      if (config.format == Format::csv) {
        csv.row({number(q), number(p), number(e)});
      } else {
        rows.push_back({q, p, e});
      }
    }
  }
  result.text = config.format == Format::csv ? csv.text() : finish_json(config, {{"columns", {"q", "p", "energy"}}, {"rows", rows}});
  return result;
}

CommandResult cmd_minima(const RunConfig& config) {
  const MinimaReport r = find_minima(config.params, config.grid);
  CommandResult result;
  if (!r.ok()) {
    result.exit_code = kPartial;
    result.message = std::to_string(r.failures.size()) + " refinements did not converge";
  }
  if (config.format == Format::csv) {
    CsvWriter csv(config.describe());
    csv.comment("count=" + number(r.count) + " global_minimum_energy=" + number(r.global_minimum_energy) +
                " boundary_escapes=" + number(r.boundary_escapes));
    csv.columns({"q", "p", "energy", "hess_eig1", "hess_eig2", "class"});
    auto emit = [&](const QelPoint& pt, const std::string& cls) {
      csv.row({number(pt.q), number(pt.p), number(pt.energy), number(pt.hessian_eigenvalues(0)),
               number(pt.hessian_eigenvalues(1)), cls});
    };
    for (const QelPoint& pt : r.minima) emit(pt, "minimum");
    for (const QelPoint& pt : r.degenerate) emit(pt, pt.higher_order_minimum ? "degenerate-minimum" : "degenerate");
    for (const QelPoint& pt : r.failures) emit(pt, "failed");
    result.text = csv.text();
  } else {
    result.text = finish_json(config, {{"report", report_json(r)}});
  }
  return result;
}

CommandResult cmd_evolve(const RunConfig& config) {
  const ModelParams& params = config.params;
  const CollectiveSpinOps ops = build_ops(params.n_particles);

  CVector psi0;
  double q0 = 0.0;
  double p0 = 0.0;
  std::optional<QelPoint> start_minimum;
  if (config.minimum) {
    const MinimaReport r = find_minima(params, config.grid);
    if (*config.minimum >= r.count)
      throw UsageError("--minimum " + std::to_string(*config.minimum) + " but only " + std::to_string(r.count) +
                       " minima exist");
    start_minimum = r.minima[static_cast<std::size_t>(*config.minimum)];
    q0 = start_minimum->q;
    p0 = start_minimum->p;
    psi0 = coherent_state_at(params.n_particles, q0, p0);
  } else {
    psi0 = coherent_state(params.n_particles, *config.theta, *config.phi);
    const PhasePoint qp = angles_to_qp(*config.theta, *config.phi);
    q0 = qp.q;
    p0 = qp.p;
  }

  const double period = params.period();
  std::vector<double> times;
  const int samples = config.periods * config.samples_per_period;
  for (int k = 0; k <= samples; ++k) times.push_back(period * k / config.samples_per_period);

  Trajectory traj;
  switch (config.frame) {
    case Frame::lab:
      traj = evolve(params, ops, psi0, times, config.integrator);
      break;
    case Frame::rotating:
      traj = rotating_expectations(params, ops, evolve_states(params, ops, psi0, times, config.integrator));
      break;
    case Frame::stroboscopic:
      traj = stroboscopic(params, ops, psi0, config.periods, config.integrator);
      break;
    case Frame::effective:
      traj = effective_evolution(params, ops, psi0, times);
      break;
  }
  traj = project_trajectory(std::move(traj), params.n_particles);

  json footer;
  if (params.m == 0) {
    const double rim = start_minimum ? rim_saddle(params, *start_minimum, config.grid).energy
                                     : std::numeric_limits<double>::quiet_NaN();
    const ConfinementStats s = confinement(params, traj, q0, p0, rim);
    footer = {{"q0", q0},
              {"p0", p0},
              {"max_distance", s.max_distance},
              {"max_energy", s.max_energy},
              {"min_energy", s.min_energy},
              {"mean_energy", s.mean_energy},
              {"band", s.band},
              {"rim_saddle_energy", start_minimum ? json(rim) : json(nullptr)},
              {"confined", start_minimum ? json(s.confined) : json(nullptr)},
              {"samples", s.samples}};
  }

  CommandResult result;
  const std::string frame(to_string(traj.frame));
  if (config.format == Format::csv) {
    CsvWriter csv(config.describe());
    csv.columns({"t", "frame", "jx", "jy", "jz", "q", "p", "norm_drift", "parity_drift"});
    for (std::size_t i = 0; i < traj.size(); ++i)
      csv.row({number(traj.times[i]), frame, number(traj.jx[i]), number(traj.jy[i]), number(traj.jz[i]),
               number(traj.path[i].q), number(traj.path[i].p), number(traj.norm_drift[i]),
               number(traj.parity_drift[i])});
    if (!footer.is_null()) csv.comment("confinement " + footer.dump());
    result.text = csv.text();
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < traj.size(); ++i)
      rows.push_back({traj.times[i], traj.jx[i], traj.jy[i], traj.jz[i], traj.path[i].q, traj.path[i].p,
                      traj.norm_drift[i], traj.parity_drift[i]});
    result.text = finish_json(
        config, {{"frame", frame},
                 {"columns", {"t", "jx", "jy", "jz", "q", "p", "norm_drift", "parity_drift"}},
                 {"rows", rows},
                 {"confinement", footer}});
  }
  return result;
}

CommandResult cmd_stability(const RunConfig& config) {
  const std::vector<ModelParams> points = sweep_points(config);
  struct Row {
    OscillatorParams osc;
    StabilityResult stab;
    double delta[3];
  };
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), config.workers, [&](std::size_t i) {
    Row& row = rows[i];
    row.osc = symmetric_phase_oscillator(points[i]);
    row.stab = oscillator_stability(row.osc);
    for (int m = 0; m < 3; ++m) {
      ModelParams p = points[i];
      p.m = m;
      row.delta[m] = resonance_detuning(p).delta;
    }
  });

  std::vector<std::string> axis_names;
  for (const SweepAxis& a : config.sweeps) axis_names.emplace_back(parameter_name(a.parameter));

  CommandResult result;
  if (config.format == Format::csv) {
    CsvWriter csv(config.describe());
    std::vector<std::string> cols = axis_names;
    for (const char* c : {"epsilon_sq", "drive_coeff", "monodromy_trace", "monodromy_det", "stable", "delta_m0",
                          "delta_m1", "delta_m2"})
      cols.emplace_back(c);
    csv.columns(cols);
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<std::string> cells;
      for (const SweepAxis& a : config.sweeps) cells.push_back(number(get_parameter(points[i], a.parameter)));
      const Row& r = rows[i];
      for (double v : {r.osc.epsilon_sq, r.osc.drive_coeff, r.stab.monodromy_trace, r.stab.monodromy_determinant})
        cells.push_back(number(v));
      cells.emplace_back(r.stab.stable ? "1" : "0");
      for (double v : r.delta) cells.push_back(number(v));
      csv.row(cells);
    }
    result.text = csv.text();
  } else {
    json arr = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      json j;
      for (const SweepAxis& a : config.sweeps)
        j[std::string(parameter_name(a.parameter))] = get_parameter(points[i], a.parameter);
      const Row& r = rows[i];
      j["epsilon_sq"] = r.osc.epsilon_sq;
      j["drive_coeff"] = r.osc.drive_coeff;
      j["monodromy_trace"] = r.stab.monodromy_trace;
      j["monodromy_det"] = r.stab.monodromy_determinant;
      j["stable"] = r.stab.stable;
      j["delta"] = {r.delta[0], r.delta[1], r.delta[2]};
      arr.push_back(j);
    }
    result.text = finish_json(config, {{"rows", arr}});
  }
  return result;
}

CommandResult run_command(const RunConfig& config) {
  config.validate();
  if (config.command == "quasienergies") return cmd_quasienergies(config);
  if (config.command == "phase-diagram") return cmd_phase_diagram(config);
  if (config.command == "landscape") return cmd_landscape(config);
  if (config.command == "minima") return cmd_minima(config);
  if (config.command == "evolve") return cmd_evolve(config);
  if (config.command == "stability") return cmd_stability(config);
  throw UsageError("unknown command '" + config.command + "'");
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + path);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const UsageError& e) {
    err << "lmgdrive: " << e.what() << "\n";
    return kUsage;
  }
  if (!config) return kOk;

  CommandResult result;
  try {
    result = run_command(*config);
  } catch (const AccuracyError& e) {
    err << "lmgdrive: accuracy: " << e.what() << "\n";
    return kAccuracy;
  } catch (const Error& e) {
    err << "lmgdrive: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "lmgdrive: unexpected failure: " << e.what() << "\n";
    return kUsage;
  }
  if (!result.message.empty()) err << "lmgdrive: " << result.message << "\n";
  if (result.exit_code != kOk && result.exit_code != kPartial) return result.exit_code;

  try {
    if (config->out.empty()) {
      out << result.text;
    } else {
      write_atomically(config->out, result.text);
    }
  } catch (const Error& e) {
    err << "lmgdrive: " << e.what() << "\n";
    return kUsage;
  }
  return result.exit_code;
}

}  // namespace lmg::cli
