#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "cli.hpp"
#include "format.hpp"

namespace lmg::cli {

namespace {

std::string axis_text(const SweepAxis& axis) {
  return std::string(parameter_name(axis.parameter)) + ":" + number(axis.lo) + ":" + number(axis.hi) + ":" +
         number(axis.steps);
}

bool needs_minima_grid(const std::string& command) {
  return command == "phase-diagram" || command == "minima" || command == "evolve";
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (sweeps.size() > 2) throw UsageError("at most two --sweep axes are allowed");
  if (workers < 1) throw UsageError("--workers must be >= 1");
  if (periods < 1) throw UsageError("--periods must be >= 1");
  if (samples_per_period < 1) throw UsageError("--samples must be >= 1");
  if (needs_minima_grid(command) && grid < 101) throw UsageError("--grid must be >= 101 for minima searches");
  if (command == "landscape" && grid < 2) throw UsageError("--grid must be >= 2");
  integrator.validate();

  if (command == "quasienergies") {
    if (sweeps.size() > 1 || (sweeps.size() == 1 && sweeps[0].parameter != Parameter::omega))
      throw UsageError("quasienergies sweeps only omega");
    if (params.m != 0) throw UsageError("quasienergies compares against the m = 0 effective Hamiltonian");
  }
  if (command == "phase-diagram" && sweeps.size() != 2) throw UsageError("phase-diagram needs two --sweep axes");
  if (command == "evolve") {
    const bool angles = theta.has_value() || phi.has_value();
    if (angles && minimum.has_value()) throw UsageError("give either --theta/--phi or --minimum, not both");
    if (!angles && !minimum.has_value()) throw UsageError("evolve needs --theta/--phi or --minimum");
    if (angles && !(theta.has_value() && phi.has_value())) throw UsageError("--theta and --phi go together");
    if (minimum.has_value() && *minimum < 0) throw UsageError("--minimum must be >= 0");
    if (frame == Frame::effective && params.m != 0) throw UsageError("the effective frame needs m = 0");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::describe() const {
  std::vector<std::pair<std::string, std::string>> d;
  d.emplace_back("lmgdrive", LMG_VERSION);
  d.emplace_back("command", command);
  d.emplace_back("units", "raw (energies as given; no rescaling by |h|)");
  d.emplace_back("n", number(params.n_particles));
  d.emplace_back("h", number(params.h));
  d.emplace_back("gx0", number(params.gamma0x));
  d.emplace_back("gx1", number(params.gamma1x));
  d.emplace_back("gy", number(params.gammay));
  d.emplace_back("omega", number(params.omega));
  d.emplace_back("m", number(params.m));
  d.emplace_back("grid", number(grid));
  for (std::size_t i = 0; i < sweeps.size(); ++i) d.emplace_back("sweep" + std::to_string(i + 1), axis_text(sweeps[i]));
  if (theta) d.emplace_back("theta", number(*theta));
  if (phi) d.emplace_back("phi", number(*phi));
  if (minimum) d.emplace_back("minimum", number(*minimum));
  d.emplace_back("periods", number(periods));
  d.emplace_back("samples", number(samples_per_period));
  d.emplace_back("frame", std::string(to_string(frame)));
  d.emplace_back("format", format == Format::csv ? "csv" : "json");
  d.emplace_back("workers", number(workers));
  d.emplace_back("rtol", number(integrator.rtol));
  d.emplace_back("atol", number(integrator.atol));
  return d;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{"Driven Lipkin-Meshkov-Glick simulator", "lmgdrive"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(LMG_VERSION));
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();

  const char* commands[][2] = {
      {"quasienergies", "Floquet quasienergies vs effective-Hamiltonian eigenvalues over an omega sweep"},
      {"phase-diagram", "minima counts of the quasienergy landscape over two coupling axes"},
      {"landscape", "quasienergy landscape sampled on a grid"},
      {"minima", "classified minima of the quasienergy landscape"},
      {"evolve", "spin expectation values of a coherent state over time"},
      {"stability", "parametric-oscillator stability of the symmetric phase"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

  std::vector<std::string> sweeps;
  std::string frame = "lab";
  std::string format = "csv";
  double theta = 0.0;
  double phi = 0.0;
  int minimum = 0;

  app.add_option("--n", cfg.params.n_particles, "particle number N")->capture_default_str();
  app.add_option("--h", cfg.params.h, "transverse field h")->capture_default_str();
  app.add_option("--gx0", cfg.params.gamma0x, "static xx coupling")->capture_default_str();
  app.add_option("--gx1", cfg.params.gamma1x, "xx drive amplitude")->capture_default_str();
  app.add_option("--gy", cfg.params.gammay, "yy coupling")->capture_default_str();
  app.add_option("--omega", cfg.params.omega, "drive frequency")->capture_default_str();
  app.add_option("--m", cfg.params.m, "resonance index of the rotating frame")->capture_default_str();
  app.add_option("--grid", cfg.grid, "grid points per axis on [-1,1]")->capture_default_str();
  app.add_option("--sweep", sweeps, "name:lo:hi:steps (up to twice)")->expected(1)->take_all();
  auto* theta_opt = app.add_option("--theta", theta, "initial polar angle");
  auto* phi_opt = app.add_option("--phi", phi, "initial azimuth");
  auto* min_opt = app.add_option("--minimum", minimum, "start at the k-th lowest minimum (0-based)");
  app.add_option("--periods", cfg.periods, "drive periods to evolve")->capture_default_str();
  app.add_option("--samples", cfg.samples_per_period, "samples per period (lab, rotating, effective)")
      ->capture_default_str();
  app.add_option("--frame", frame, "lab | rotating | stroboscopic | effective")->capture_default_str();
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--workers", cfg.workers, "worker threads for sweeps");
  app.add_option("--rtol", cfg.integrator.rtol, "integrator relative tolerance")->capture_default_str();
  app.add_option("--atol", cfg.integrator.atol, "integrator absolute tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << LMG_VERSION << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    for (const std::string& s : sweeps) cfg.sweeps.push_back(SweepAxis::parse(s));
    cfg.frame = parse_frame(frame);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (format == "csv") {
    cfg.format = Format::csv;
  } else if (format == "json") {
    cfg.format = Format::json;
  } else {
    throw UsageError("--format must be csv or json");
  }
  if (theta_opt->count() > 0) cfg.theta = theta;
  if (phi_opt->count() > 0) cfg.phi = phi;
  if (min_opt->count() > 0) cfg.minimum = minimum;
  return cfg;
}

}  // namespace lmg::cli
