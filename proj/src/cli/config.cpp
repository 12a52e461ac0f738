#include "cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lambq/errors.hpp"
#include "lambq/observables.hpp"

namespace lambq::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where, "must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
}

double get_number(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(where + key, "must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(where + key, "must be an integer");
  return v.get<int>();
}

template <typename T, typename Get>
void maybe(const json& obj, const char* key, std::optional<T>& dst, Get get, const std::string& where) {
  if (obj.contains(key)) dst = get(obj, key, where);
}

}  // namespace

TensionBranch parse_branch(const std::string& s) {
  if (s == "lower") return TensionBranch::lower;
  if (s == "upper") return TensionBranch::upper;
  throw ValidationError("g_branch", "must be \"lower\" or \"upper\"");
}

void apply_json(RunConfig& cfg, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc,
             {"params", "raw", "out", "g_target", "g_branch", "seed", "decouple", "nu", "omega_s",
              "samples", "t_max", "delta", "inject_perturbation", "cutoff", "draws", "sweep"},
             "");
  if (doc.contains("params") && doc.contains("raw"))
    throw ValidationError("params", "give exactly one of \"params\" and \"raw\"");
  if (doc.contains("params")) {
    const json& p = doc["params"];
    check_keys(p, {"omega_c_ratio", "tension_ratio", "n_modes", "length", "omega_0"}, "params");
    ParamBlock b;
    maybe(p, "omega_c_ratio", b.omega_c_ratio, get_number, "params.");
    maybe(p, "tension_ratio", b.tension_ratio, get_number, "params.");
    maybe(p, "n_modes", b.n_modes, get_int, "params.");
    maybe(p, "length", b.length, get_number, "params.");
    maybe(p, "omega_0", b.omega_0, get_number, "params.");
    cfg.params = b;
  }
  if (doc.contains("raw")) {
    const json& r = doc["raw"];
    check_keys(r, {"m", "kappa", "kappa_c", "tau", "sigma", "ell", "n_modes"}, "raw");
    for (const char* k : {"m", "kappa", "kappa_c", "tau", "sigma", "ell", "n_modes"})
      if (!r.contains(k)) throw ValidationError(std::string("raw.") + k, "missing");
    PhysicalParams<double> p;
    p.m = get_number(r, "m", "raw.");
    p.kappa = get_number(r, "kappa", "raw.");
    p.kappa_c = get_number(r, "kappa_c", "raw.");
    p.tau = get_number(r, "tau", "raw.");
    p.sigma = get_number(r, "sigma", "raw.");
    p.ell = get_number(r, "ell", "raw.");
    p.n_modes = get_int(r, "n_modes", "raw.");
    cfg.raw = p;
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ValidationError("out", "must be a string");
    cfg.out_dir = doc["out"].get<std::string>();
  }
  if (doc.contains("g_target")) cfg.g_target = get_number(doc, "g_target", "");
  if (doc.contains("g_branch")) {
    if (!doc["g_branch"].is_string()) throw ValidationError("g_branch", "must be a string");
    cfg.g_branch = parse_branch(doc["g_branch"].get<std::string>());
    cfg.g_branch_set = true;
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ValidationError("seed", "must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("decouple")) {
    if (!doc["decouple"].is_boolean()) throw ValidationError("decouple", "must be a boolean");
    cfg.decouple = doc["decouple"].get<bool>();
  }
  if (doc.contains("nu")) cfg.nu = get_number(doc, "nu", "");
  if (doc.contains("omega_s")) cfg.omega_s = get_number(doc, "omega_s", "");
  if (doc.contains("samples")) cfg.samples = get_int(doc, "samples", "");
  if (doc.contains("t_max")) cfg.t_max = get_number(doc, "t_max", "");
  if (doc.contains("delta")) cfg.delta = get_number(doc, "delta", "");
  if (doc.contains("inject_perturbation"))
    cfg.inject_perturbation = get_number(doc, "inject_perturbation", "");
  if (doc.contains("cutoff")) cfg.cutoff = get_int(doc, "cutoff", "");
  if (doc.contains("draws")) cfg.draws = get_int(doc, "draws", "");
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, {"param", "from", "to", "steps"}, "sweep");
    if (s.contains("param")) {
      if (!s["param"].is_string()) throw ValidationError("sweep.param", "must be a string");
      cfg.sweep.param = s["param"].get<std::string>();
    }
    if (s.contains("from")) cfg.sweep.from = get_number(s, "from", "sweep.");
    if (s.contains("to")) cfg.sweep.to = get_number(s, "to", "sweep.");
    if (s.contains("steps")) cfg.sweep.steps = get_int(s, "steps", "sweep.");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_json(cfg, ss.str());
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  const bool dimensionless_flag = o.omega_c_ratio || o.tension_ratio || o.length || o.omega_0;
  if (cfg.raw && dimensionless_flag)
    throw ValidationError("params", "dimensionless parameter flags conflict with a \"raw\" block");
  if (dimensionless_flag || (o.n_modes && !cfg.raw)) {
    if (!cfg.params) cfg.params = ParamBlock{};
    if (o.omega_c_ratio) cfg.params->omega_c_ratio = o.omega_c_ratio;
    if (o.tension_ratio) cfg.params->tension_ratio = o.tension_ratio;
    if (o.length) cfg.params->length = o.length;
    if (o.omega_0) cfg.params->omega_0 = o.omega_0;
    if (o.n_modes) cfg.params->n_modes = o.n_modes;
  }
  if (o.n_modes && cfg.raw) cfg.raw->n_modes = *o.n_modes;
  if (o.out) cfg.out_dir = *o.out;
  if (o.g_target) cfg.g_target = o.g_target;
  if (o.g_branch) {
    cfg.g_branch = parse_branch(*o.g_branch);
    cfg.g_branch_set = true;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.nu) cfg.nu = o.nu;
  if (o.omega_s) cfg.omega_s = o.omega_s;
  if (o.samples) cfg.samples = *o.samples;
  if (o.t_max) cfg.t_max = *o.t_max;
  if (o.delta) cfg.delta = *o.delta;
  if (o.inject_perturbation) cfg.inject_perturbation = *o.inject_perturbation;
  if (o.cutoff) cfg.cutoff = *o.cutoff;
  if (o.draws) cfg.draws = *o.draws;
  if (o.sweep_param) cfg.sweep.param = *o.sweep_param;
  if (o.sweep_from) cfg.sweep.from = *o.sweep_from;
  if (o.sweep_to) cfg.sweep.to = *o.sweep_to;
  if (o.sweep_steps) cfg.sweep.steps = *o.sweep_steps;
  if (o.decouple) cfg.decouple = true;

  if (cfg.samples < 16) throw ValidationError("samples", "must be >= 16");
  if (!(cfg.t_max >= 0)) throw ValidationError("t_max", "must be >= 0");
  if (cfg.cutoff < 1) throw ValidationError("cutoff", "must be >= 1");
  if (cfg.draws < 0) throw ValidationError("draws", "must be >= 0");
  if (cfg.nu && !(*cfg.nu > 0)) throw ValidationError("nu", "must be strictly positive");
  if (cfg.omega_s && !(*cfg.omega_s > 0)) throw ValidationError("omega_s", "must be strictly positive");
  if (cfg.g_target && cfg.raw) throw ValidationError("g_target", "not available with a \"raw\" block");
  if (cfg.nu && cfg.raw) throw ValidationError("nu", "not available with a \"raw\" block");
}

std::string output_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("LAMBQ_OUT"); env && *env) return env;
  return ".";
}

DimensionlessParams<double> figure_defaults() {
  DimensionlessParams<double> p;
  p.omega_c_ratio = kFigureOmegaCRatio;
  p.n_modes = 15;
  p.length = kFigureLength;
  p.tension_ratio = solve_tension_for_g(kFigureOmegaCRatio, 15, kFigureG, TensionBranch::upper);
  return p;
}

DimensionlessParams<double> damping_params(const RunConfig& cfg) {
  const double nu = *cfg.nu;
  const ParamBlock b = cfg.params.value_or(ParamBlock{});
  const double omega_0 = b.omega_0.value_or(1.0);
  const double omega_s = cfg.omega_s.value_or(std::min(10.0, 0.25 / nu) * omega_0);
  const double length = b.length.value_or(3.0 * omega_0 / nu);
  return params_from_damping(nu, omega_s, length, b.n_modes.value_or(400), omega_0);
}

DimensionlessParams<double> resolve_params(const RunConfig& cfg,
                                           const DimensionlessParams<double>& defaults) {
  if (cfg.nu) return damping_params(cfg);
  if (cfg.raw) return to_dimensionless(*cfg.raw);
  DimensionlessParams<double> p = defaults;
  if (cfg.params) {
    const ParamBlock& b = *cfg.params;
    if (b.omega_c_ratio) p.omega_c_ratio = *b.omega_c_ratio;
    if (b.tension_ratio) p.tension_ratio = *b.tension_ratio;
    if (b.n_modes) p.n_modes = *b.n_modes;
    if (b.length) p.length = *b.length;
    if (b.omega_0) p.omega_0 = *b.omega_0;
  }
  validate(p);
  // A requested g at or past the threshold is the instability itself, not a bad parameter.
  if (cfg.g_target && *cfg.g_target >= 1) throw InstabilityError(*cfg.g_target);
  if (cfg.g_target) p.tension_ratio = solve_tension_for_g(p.omega_c_ratio, p.n_modes, *cfg.g_target, cfg.g_branch);
  return p;
}

LambModel<double> resolve_model(const RunConfig& cfg, const DimensionlessParams<double>& defaults) {
  if (cfg.raw && !cfg.nu) return build_model(*cfg.raw);
  return build_model(resolve_params(cfg, defaults));
}

SecularProblem<double> resolve_problem(const RunConfig& cfg, const LambModel<double>& model) {
  SecularProblem<double> p = make_secular_problem(model);
  if (cfg.decouple) p.gamma.setZero();
  return p;
}

}  // namespace lambq::cli
