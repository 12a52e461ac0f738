#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace lambq::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kInstability = 2,
  kVerificationFailure = 3,
  kInternalError = 4,
};

int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_coeffs(const RunConfig& cfg, std::ostream& out);
int cmd_ground_state(const RunConfig& cfg, std::ostream& out);
int cmd_decay(const RunConfig& cfg, std::ostream& out);
int cmd_emission(const RunConfig& cfg, std::ostream& out);
int cmd_variance(const RunConfig& cfg, std::ostream& out);
int cmd_figures(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);

/// Runs a subcommand by name and maps errors onto the exit-code contract.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

const std::vector<std::string>& command_names();

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
  bool skipped{false};
};

/// The verification suite behind `verify`, exposed for tests.
std::vector<Check> verification_checks(const RunConfig& cfg);

}  // namespace lambq::cli
