// lambq: command-line front end for the quantum Lamb model.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "lambq/errors.hpp"

namespace {

struct Shared {
  std::string config_path;
  lambq::cli::Overrides o;
};

template <typename T, typename Field>
void opt(CLI::App* sub, const char* name, Field& field, const char* help) {
  sub->add_option_function<T>(name, [&field](const T& v) { field = v; }, help);
}

void add_common(CLI::App* sub, Shared& s) {
  auto& o = s.o;
  sub->add_option("--config", s.config_path, "JSON config file");
  opt<std::string>(sub, "--out", o.out, "output directory (default $LAMBQ_OUT, else .)");
  opt<int>(sub, "--n-modes", o.n_modes, "number of string modes N");
  opt<double>(sub, "--g-target", o.g_target, "solve tau/(kappa_c d) for this coupling strength g");
  opt<std::string>(sub, "--g-branch", o.g_branch, "lower|upper solution branch for --g-target");
  opt<std::uint64_t>(sub, "--seed", o.seed, "seed for randomized checks");
  opt<double>(sub, "--omega-c-ratio", o.omega_c_ratio, "omega_c/omega_0");
  opt<double>(sub, "--tension-ratio", o.tension_ratio, "tau/(kappa_c d)");
  opt<double>(sub, "--length", o.length, "string length in units of c/omega_0");
  opt<double>(sub, "--omega-0", o.omega_0, "bead frequency omega_0");
  opt<double>(sub, "--nu", o.nu, "classical damping rate; selects the damping parameterization");
  opt<double>(sub, "--omega-s", o.omega_s, "c k_s for the damping parameterization");
  sub->add_flag("--decouple", o.decouple, "set all couplings gamma_n to zero");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Bogoliubov solution of the quantum Lamb model"};
  app.require_subcommand(1);
  Shared s;
  auto& o = s.o;

  for (const auto& name : lambq::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, s);
    if (name == "decay") {
      opt<int>(sub, "--samples", o.samples, "time samples (default 4096)");
      opt<double>(sub, "--t-max", o.t_max, "trace length (default 10/nu)");
      opt<double>(sub, "--delta", o.delta, "initial bead displacement");
    }
    if (name == "verify") {
      sub->add_option_function<double>(
             "--inject-perturbation", [&o](const double& v) { o.inject_perturbation = v; },
             "shift Omega_0 by this amount before checking (default 1e-4)")
          ->expected(0, 1)
          ->default_str("1e-4");
      opt<int>(sub, "--cutoff", o.cutoff, "Fock cutoff per mode for n_modes <= 2");
      opt<int>(sub, "--draws", o.draws, "random parameter draws");
    }
    if (name == "sweep") {
      opt<std::string>(sub, "--param", o.sweep_param,
                       "omega_c_ratio|tension_ratio|length|n_modes|g_target|g|nu");
      opt<double>(sub, "--from", o.sweep_from, "first value");
      opt<double>(sub, "--to", o.sweep_to, "last value");
      opt<int>(sub, "--steps", o.sweep_steps, "number of points");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lambq::cli::kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  lambq::cli::RunConfig cfg;
  try {
    if (!s.config_path.empty()) cfg = lambq::cli::load_config(s.config_path);
    lambq::cli::apply_overrides(cfg, o);
  } catch (const lambq::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lambq::cli::kConfigError;
  }
  return lambq::cli::run_command(name, cfg, std::cout, std::cerr);
}
