#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lambq/params.hpp"
#include "lambq/spectrum.hpp"
#include "lambq/string_modes.hpp"

namespace lambq::cli {

/// Dimensionless parameter block; unset fields take defaults that depend on the subcommand.
struct ParamBlock {
  std::optional<double> omega_c_ratio;
  std::optional<double> tension_ratio;
  std::optional<int> n_modes;
  std::optional<double> length;
  std::optional<double> omega_0;
};

struct SweepSpec {
  std::string param;  ///< omega_c_ratio, tension_ratio, length, n_modes, g_target, g
  double from{0};
  double to{0};
  int steps{0};
};

struct RunConfig {
  std::optional<ParamBlock> params;
  std::optional<PhysicalParams<double>> raw;
  std::string out_dir;
  std::optional<double> g_target;
  TensionBranch g_branch{TensionBranch::lower};
  bool g_branch_set{false};
  std::uint64_t seed{1};
  bool decouple{false};

  // Damping parameterization (decay, variance): ν and ω_s in units of ω_0.
  std::optional<double> nu;
  std::optional<double> omega_s;

  int samples{4096};
  double t_max{0};
  double delta{1};
  double inject_perturbation{0};
  int cutoff{10};
  int draws{10};
  SweepSpec sweep;
};

/// Reads a JSON config. Throws ValidationError naming the offending key.
RunConfig load_config(const std::string& path);

/// Fills `cfg` from a parsed JSON document (exposed for tests).
void apply_json(RunConfig& cfg, const std::string& text);

/// Flag values layered on top of the file; each set field overrides.
struct Overrides {
  std::optional<std::string> out;
  std::optional<int> n_modes;
  std::optional<double> g_target;
  std::optional<std::string> g_branch;
  std::optional<std::uint64_t> seed;
  std::optional<double> omega_c_ratio;
  std::optional<double> tension_ratio;
  std::optional<double> length;
  std::optional<double> omega_0;
  std::optional<double> nu;
  std::optional<double> omega_s;
  std::optional<int> samples;
  std::optional<double> t_max;
  std::optional<double> delta;
  std::optional<double> inject_perturbation;
  std::optional<int> cutoff;
  std::optional<int> draws;
  std::optional<std::string> sweep_param;
  std::optional<double> sweep_from;
  std::optional<double> sweep_to;
  std::optional<int> sweep_steps;
  bool decouple{false};
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Output directory: --out, then the config's "out", then $LAMBQ_OUT, then ".".
std::string output_dir(const RunConfig& cfg);

TensionBranch parse_branch(const std::string& s);

/// The model the run describes: damping parameterization when ν is set, raw block when given,
/// otherwise the dimensionless block with `defaults` filling unset fields; g_target then fixes
/// τ/(κ_c d).
LambModel<double> resolve_model(const RunConfig& cfg, const DimensionlessParams<double>& defaults);

/// Dimensionless parameters the model was built from (raw blocks are converted).
DimensionlessParams<double> resolve_params(const RunConfig& cfg,
                                           const DimensionlessParams<double>& defaults);

/// The secular problem of the model, with couplings zeroed under --decouple.
SecularProblem<double> resolve_problem(const RunConfig& cfg, const LambModel<double>& model);

/// Defaults for fig3/fig5 and the emission check: N = 15, ω_c/ω_0 = 0.99, ℓω_0/c = 32,
/// τ/(κ_c d) on the upper branch for g = 0.7.
DimensionlessParams<double> figure_defaults();
inline constexpr double kFigureOmegaCRatio = 0.99;
inline constexpr double kFigureLength = 32;
inline constexpr double kFigureG = 0.7;

/// Damping parameterization: ω_s = min(10, 0.25/ν), ℓ = 3/ν, N = 400 unless set.
DimensionlessParams<double> damping_params(const RunConfig& cfg);

}  // namespace lambq::cli
