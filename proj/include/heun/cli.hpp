#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heun/dynamics.hpp"
#include "heun/verification.hpp"

namespace heun {

// Invalid configuration; field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string model;
  std::map<std::string, double> params;
  PencilCoefficients tau;
  std::vector<double> initial;
  IntegratorConfig integrator;
  std::uint64_t seed = 0;
  std::vector<std::string> checks{"all"};
  std::filesystem::path out_dir = ".";
  int n_points = 1000;
  Tolerances tolerances;
  // Test hook: added to alpha[0][0] after the model is built.
  double corrupt_alpha00 = 0.0;
};

// Parses the flat key=value format. Blank lines and '#' comments are
// ignored; dotted keys (params.beta0, tol.algebra) are accepted. Throws
// ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// HEUN_PENCIL_SEED, when set, replaces the configured seed.
void apply_environment(RunConfig& cfg);

// Builds the model and initial point described by cfg; throws ConfigError.
ModelSpec model_from_config(const RunConfig& cfg);
PhasePoint initial_point(const RunConfig& cfg);

// Writes trajectory.csv and summary.json into cfg.out_dir.
Trajectory run_simulate(const RunConfig& cfg);

// Runs the configured checks and writes report.json into cfg.out_dir.
VerificationReport run_verify(const RunConfig& cfg);

std::string format_double(double v);

// Subcommands `simulate --config <file>` and `verify --config <file>`.
// Exit codes: 0 success, 1 check failure, 2 config error, 3 runtime error.
int cli_main(int argc, const char* const* argv);

}  // namespace heun
