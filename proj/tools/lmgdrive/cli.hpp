#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmg/dynamics.hpp"
#include "lmg/error.hpp"
#include "lmg/floquet.hpp"
#include "lmg/model.hpp"

namespace lmg::cli {

enum class Format { csv, json };

enum ExitCode : int { kOk = 0, kUsage = 1, kAccuracy = 2, kPartial = 3 };

struct RunConfig {
  std::string command;
  ModelParams params;
  int grid = 201;
  std::vector<SweepAxis> sweeps;
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<int> minimum;  ///< index into the sorted minima list, 0 = lowest
  int periods = 200;
  int samples_per_period = 32;  ///< lab/rotating/effective frames
  Frame frame = Frame::lab;
  Format format = Format::csv;
  std::string out;  ///< empty means stdout
  int workers = 1;
  IntegratorSettings integrator;

  void validate() const;
  /// Resolved key=value pairs in a fixed order, for output headers.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

/// Thrown for malformed command lines and config files.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Parses argv (argv[0] is the program name). Flags override values read
/// from --config. Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

struct CommandResult {
  std::string text;
  int exit_code = kOk;
  std::string message;  ///< diagnostics for stderr
};

CommandResult run_command(const RunConfig& config);

CommandResult cmd_quasienergies(const RunConfig& config);
CommandResult cmd_phase_diagram(const RunConfig& config);
CommandResult cmd_landscape(const RunConfig& config);
CommandResult cmd_minima(const RunConfig& config);
CommandResult cmd_evolve(const RunConfig& config);
CommandResult cmd_stability(const RunConfig& config);

/// Writes `text` to `path` through a temporary file and a rename, so a
/// failed run never leaves a truncated file behind.
void write_atomically(const std::string& path, const std::string& text);

/// Full program: parse, run, write, and map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lmg::cli
