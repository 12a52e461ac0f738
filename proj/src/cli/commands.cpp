#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <json.hpp>

#include "cli/io.hpp"
#include "lambq/lambq.hpp"

namespace lambq::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Everything downstream of the parameters for one run.
struct Pipeline {
  LambModel<double> model;
  SecularProblem<double> problem;
  BogoliubovSpectrum<double> spectrum;
  CoefficientSet<double> coeffs;
};

Pipeline run_pipeline(const RunConfig& cfg, const DimensionlessParams<double>& defaults) {
  Pipeline p;
  p.model = resolve_model(cfg, defaults);
  p.problem = resolve_problem(cfg, p.model);
  p.spectrum = solve_spectrum(p.problem);
  p.coeffs = build_coefficients(p.problem, p.spectrum);
  return p;
}

ordered_json params_json(const LambModel<double>& m, bool decoupled) {
  const auto d = to_dimensionless(m.params);
  ordered_json j;
  j["omega_c_ratio"] = d.omega_c_ratio;
  j["tension_ratio"] = d.tension_ratio;
  j["n_modes"] = d.n_modes;
  j["length"] = d.length;
  j["omega_0"] = d.omega_0;
  j["nu"] = m.scales.nu;
  j["omega_s"] = m.scales.omega_s;
  j["omega_d"] = m.scales.omega_d;
  j["g"] = decoupled ? 0.0 : m.g();
  j["decoupled"] = decoupled;
  return j;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

Table spectrum_table(const BogoliubovSpectrum<double>& s) {
  Table t{{"alpha", "Omega", "bracket_lo", "bracket_hi", "residual"}, {}};
  for (Eigen::Index a = 0; a < s.size(); ++a)
    t.add(static_cast<long long>(a), s.Omega(a), s.brackets(a, 0), s.brackets(a, 1), s.residuals(a));
  return t;
}

// Bare mode frequencies ω_0, ω_1, ..., ω_N.
VectorXd bare_frequencies(const SecularProblem<double>& p) {
  VectorXd w(p.size() + 1);
  w(0) = p.omega_0;
  w.tail(p.size()) = p.omega;
  return w;
}

Table occupation_table(const VectorXd& n, const VectorXd& bare) {
  Table t{{"alpha", "Omega", "n"}, {}};
  for (Eigen::Index a = 0; a < n.size(); ++a) t.add(static_cast<long long>(a), bare(a), n(a));
  return t;
}

// Continuum resonance, or NaN fields when it cannot be located.
DecayReport<double> try_resonance(const LambModel<double>& m) {
  try {
    return resonance(continuum_functions(m.scales));
  } catch (const ResonanceNotFoundError&) {
  } catch (const DomainError&) {
  }
  DecayReport<double> r;
  r.x_r = r.omega_r = r.h_r = r.Gamma_r = r.Gamma_closed = r.theta_0 = kNaN;
  r.nu = m.scales.nu;
  r.Gamma_gr = 2 * m.scales.nu;
  return r;
}

double try_relative_variance(double nu, double omega_d, double omega_r) {
  if (!(omega_r > 0) || !(omega_d / omega_r > 1)) return kNaN;
  return relative_variance(nu / omega_r, omega_d / omega_r);
}

void say(std::ostream& out, const char* fmt, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a);
  out << buf;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto model = resolve_model(cfg, DimensionlessParams<double>{});
  const auto problem = resolve_problem(cfg, model);
  const auto spec = solve_spectrum(problem);
  write_outputs(output_dir(cfg), {{"spectrum.csv", spectrum_table(spec).str()}});
  say(out, "g = %.17g\n", spec.g);
  say(out, "Omega_min = %.17g\n", spec.Omega(0));
  return kOk;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  const auto p = run_pipeline(cfg, DimensionlessParams<double>{});
  const auto& c = p.coeffs;
  Table t{{"alpha", "beta", "M", "N", "U", "V"}, {}};
  for (Eigen::Index a = 0; a < c.size(); ++a)
    for (Eigen::Index b = 0; b < c.size(); ++b)
      t.add(static_cast<long long>(a), static_cast<long long>(b), c.M(a, b), c.N_mat(a, b), c.U(a, b),
            c.V(a, b));
  write_outputs(output_dir(cfg), {{"coeffs.csv", t.str()}});
  say(out, "det_M = %.17g\n", c.det_M);
  for (const auto& w : c.warnings) out << "warning: " << w << "\n";
  return kOk;
}

int cmd_ground_state(const RunConfig& cfg, std::ostream& out) {
  const auto p = run_pipeline(cfg, DimensionlessParams<double>{});
  auto report = ground_state_report(p.coeffs, p.spectrum, p.problem.omega_0, p.model.params.m);
  const auto res = try_resonance(p.model);
  report.renormalized_ratio = report.variance_u0 * 2 * p.model.params.m * res.omega_r;
  ordered_json j;
  j["params"] = params_json(p.model, cfg.decouple);
  j["total_occ"] = report.total_occ;
  j["n_bead"] = report.n_occ(0);
  j["n_string_total"] = report.total_occ - report.n_occ(0);
  j["variance_u0"] = report.variance_u0;
  j["variance_freq_form"] = report.variance_freq_form;
  j["variance_ratio"] = report.variance_ratio;
  j["renormalized_ratio"] = report.renormalized_ratio;
  j["omega_r"] = res.omega_r;
  j["det_M"] = p.coeffs.det_M;
  j["ground_norm"] = p.coeffs.ground_norm;
  j["ground_energy"] = symplectic_ground_energy(p.problem, p.spectrum);
  write_outputs(output_dir(cfg),
                {{"occupation.csv", occupation_table(report.n_occ, bare_frequencies(p.problem)).str()},
                 {"ground_state.json", json_text(j)}});
  say(out, "total_occ = %.17g\n", report.total_occ);
  say(out, "variance_ratio = %.17g\n", report.variance_ratio);
  return kOk;
}

int cmd_decay(const RunConfig& cfg, std::ostream& out) {
  const auto p = run_pipeline(cfg, DimensionlessParams<double>{});
  DecayReport<double> r = try_resonance(p.model);
  const VectorXd t = cfg.t_max > 0 ? VectorXd::LinSpaced(cfg.samples, 0.0, cfg.t_max)
                                   : default_time_grid(p.model.scales.nu, p.problem.omega_0, cfg.samples);
  const auto trace = displacement_trace(p.coeffs, p.spectrum, cfg.delta, t);
  const auto fit = fit_envelope(trace.t, trace.u0);
  const auto rho = spectral_density(p.coeffs, p.spectrum);
  r.Gamma_fit = fit.rate;
  r.n_extrema = fit.n_extrema;
  r.fwhm = rho.width_estimate;

  Table tt{{"t", "u0"}, {}};
  for (Eigen::Index i = 0; i < t.size(); ++i) tt.add(trace.t(i), trace.u0(i));
  Table tr{{"Omega", "rho"}, {}};
  for (Eigen::Index a = 0; a < rho.rho.size(); ++a) tr.add(rho.Omega(a), rho.rho(a));
  ordered_json j;
  j["params"] = params_json(p.model, cfg.decouple);
  j["x_r"] = r.x_r;
  j["omega_r"] = r.omega_r;
  j["h_r"] = r.h_r;
  j["Gamma_r"] = r.Gamma_r;
  j["Gamma_closed"] = r.Gamma_closed;
  j["Gamma_fit"] = r.Gamma_fit;
  j["Gamma_gr"] = r.Gamma_gr;
  j["Gamma_gr_finite"] = r.Gamma_gr_finite;
  j["theta_0"] = r.theta_0;
  j["nu"] = r.nu;
  j["fwhm"] = r.fwhm;
  j["n_extrema"] = r.n_extrema;
  j["sum_rule_residual"] = rho.sum_rule_residual;
  write_outputs(output_dir(cfg), {{"trace.csv", tt.str()}, {"rho.csv", tr.str()}, {"decay.json", json_text(j)}});
  say(out, "Gamma_closed = %.17g\n", r.Gamma_closed);
  say(out, "Gamma_fit = %.17g\n", r.Gamma_fit);
  say(out, "Gamma_gr = %.17g\n", r.Gamma_gr);
  return kOk;
}

int cmd_emission(const RunConfig& cfg, std::ostream& out) {
  const auto p = run_pipeline(cfg, DimensionlessParams<double>{});
  const auto e = emission_spectrum(p.coeffs, p.spectrum);
  Table t{{"Omega", "P1"}, {}};
  for (Eigen::Index a = 0; a < e.p1.size(); ++a) t.add(e.Omega(a), e.p1(a));
  ordered_json j;
  j["params"] = params_json(p.model, cfg.decouple);
  j["total_p1"] = e.total_p1;
  j["multi_quantum_weight"] = 1 - e.total_p1;
  j["peak_alpha"] = e.peak_alpha;
  j["peak_Omega"] = e.Omega(e.peak_alpha);
  write_outputs(output_dir(cfg), {{"p1.csv", t.str()}, {"emission.json", json_text(j)}});
  say(out, "total_p1 = %.17g\n", e.total_p1);
  return kOk;
}

int cmd_variance(const RunConfig& cfg, std::ostream& out) {
  const auto p = run_pipeline(cfg, DimensionlessParams<double>{});
  const auto v = bead_variance(p.coeffs, p.spectrum, p.problem.omega_0, p.model.params.m);
  const auto res = try_resonance(p.model);
  const double renorm = v.variance * 2 * p.model.params.m * res.omega_r;
  const double R = try_relative_variance(p.model.scales.nu, p.model.scales.omega_d, res.omega_r);
  ordered_json j;
  j["params"] = params_json(p.model, cfg.decouple);
  j["variance_u0"] = v.variance;
  j["variance_freq_form"] = v.freq_form;
  j["forms_rel_diff"] = v.rel_diff;
  j["variance_ratio"] = v.ratio;
  j["omega_r"] = res.omega_r;
  j["renormalized_ratio"] = renorm;
  j["nu_bar"] = p.model.scales.nu / res.omega_r;
  j["omega_d_bar"] = p.model.scales.omega_d / res.omega_r;
  j["R"] = R;
  write_outputs(output_dir(cfg), {{"variance.json", json_text(j)}});
  say(out, "variance_ratio = %.17g\n", v.ratio);
  say(out, "renormalized_ratio = %.17g\n", renorm);
  say(out, "R = %.17g\n", R);
  return kOk;
}

int cmd_figures(const RunConfig& cfg_in, std::ostream& out) {
  RunConfig cfg = cfg_in;
  if (!cfg.g_branch_set) cfg.g_branch = TensionBranch::upper;
  DimensionlessParams<double> defaults = figure_defaults();
  std::vector<OutputFile> files;
  ordered_json summary;

  // fig2.csv: g against τ/(κ_c d).
  {
    std::vector<double> ratios{0.5, 0.7, 0.9, 0.99};
    if (cfg.params && cfg.params->omega_c_ratio) ratios = {*cfg.params->omega_c_ratio};
    const int n = cfg.params && cfg.params->n_modes ? *cfg.params->n_modes : 15;
    Table t{{"omega_c_ratio", "tension_ratio", "g_inf", "g_discrete"}, {}};
    for (double r : ratios) {
      t.add(r, 0.0, g_infinity(r, 0.0), kNaN);
      for (int i = 0; i <= 160; ++i) {
        const double tr = std::pow(10.0, -4.0 + 8.0 * i / 160.0);
        DimensionlessParams<double> dp;
        dp.omega_c_ratio = r;
        dp.tension_ratio = tr;
        dp.n_modes = n;
        dp.length = 1;
        t.add(r, tr, g_infinity(r, tr), build_model(dp).g());
      }
      t.add(r, std::numeric_limits<double>::infinity(),
            g_infinity(r, std::numeric_limits<double>::infinity()), kNaN);
    }
    files.push_back({"fig2.csv", t.str()});
  }

  RunConfig fig = cfg;
  if (!fig.g_target) fig.g_target = kFigureG;
  const auto p = run_pipeline(fig, defaults);
  summary["params"] = params_json(p.model, cfg.decouple);

  // fig3.csv: occupations of the uncoupled modes in the coupled ground state.
  {
    const VectorXd n = occupation_numbers(p.coeffs);
    files.push_back({"fig3.csv", occupation_table(n, bare_frequencies(p.problem)).str()});
    summary["fig3"] = {{"n_bead", n(0)}, {"n_string_total", n.sum() - n(0)}};
  }

  // fig4.csv: spectral density at two coupling strengths.
  {
    Table t{{"g", "alpha", "Omega", "rho"}, {}};
    ordered_json widths = ordered_json::array();
    for (double g : {0.4, 0.6}) {
      RunConfig c4 = cfg;
      c4.g_target = g;
      const auto q = run_pipeline(c4, defaults);
      const auto rho = spectral_density(q.coeffs, q.spectrum);
      for (Eigen::Index a = 0; a < rho.rho.size(); ++a)
        t.add(g, static_cast<long long>(a), rho.Omega(a), rho.rho(a));
      widths.push_back({{"g", g}, {"fwhm", rho.width_estimate}, {"sum_rule_residual", rho.sum_rule_residual}});
    }
    files.push_back({"fig4.csv", t.str()});
    summary["fig4"] = widths;
  }

  // fig5.csv: single-bogoliubon emission.
  {
    const auto e = emission_spectrum(p.coeffs, p.spectrum);
    Table t{{"alpha", "Omega", "P1"}, {}};
    for (Eigen::Index a = 0; a < e.p1.size(); ++a) t.add(static_cast<long long>(a), e.Omega(a), e.p1(a));
    files.push_back({"fig5.csv", t.str()});
    summary["fig5"] = {{"total_p1", e.total_p1}, {"peak_Omega", e.Omega(e.peak_alpha)}};
    say(out, "fig5 total_p1 = %.17g\n", e.total_p1);
  }

  // figS3.csv: closed-form relative variance.
  {
    Table t{{"omega_d_bar", "nu_bar", "R"}, {}};
    for (double wd : {3.5, 7.0, 30.0})
      for (int i = 0; i <= 200; ++i) {
        const double nb = 2.0 * i / 200.0;
        t.add(wd, nb, relative_variance(nb, wd));
      }
    files.push_back({"figS3.csv", t.str()});
  }
  files.push_back({"figures.json", json_text(summary)});
  write_outputs(output_dir(cfg), files);
  return kOk;
}

std::vector<Check> verification_checks(const RunConfig& cfg) {
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value, tol, value <= tol});
  };
  auto skip = [&](std::string name) { checks.push_back({std::move(name), kNaN, kNaN, true, true}); };

  const auto model = resolve_model(cfg, DimensionlessParams<double>{});
  const auto problem = resolve_problem(cfg, model);
  const Eigen::Index n = problem.size();

  {
    const double a = model.scales.k_s * model.params.ell;
    double r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double th = model.modes.k(i) * model.params.ell;
      r = std::max(r, std::abs(a * std::sin(th) + th * std::cos(th)) / (a + th));
    }
    add("wavenumbers.residual", r, 1e-12);
  }
  if (cfg.decouple) {
    skip("gamma.first_principles");
  } else {
    const VectorXd fp = first_principles_gammas(model.params, model.scales, model.modes);
    add("gamma.first_principles",
        ((model.modes.gamma - fp.cwiseAbs()).array().abs() / model.modes.gamma.array()).maxCoeff(), 1e-10);
  }

  const double g = coupling_strength(problem);
  checks.push_back({"stability.g_below_one", g, 1.0, g < 1});
  const auto spec = solve_spectrum(problem);
  add("spectrum.interlacing", interlacing_holds(problem, spec) ? 0.0 : 1.0, 0.0);
  add("spectrum.residual", spec.residuals.maxCoeff(), 1e-12);
  {
    const VectorXd q = quadrature_eigenvalues(problem);
    add("spectrum.quadrature_oracle", ((q - spec.x).array().abs() / spec.x.array()).maxCoeff(), 1e-10);
  }

  const auto used = cfg.inject_perturbation != 0 ? perturb_frequency(spec, 0, cfg.inject_perturbation) : spec;
  const auto c = build_coefficients(problem, used);
  const auto sr = check_symplectic(c);
  add("symplectic.tjt", sr.tjt, 1e-10);
  add("symplectic.mm_nn", sr.mm_nn, 1e-10);
  add("symplectic.uu_vv", sr.uu_vv, 1e-10);
  add("symplectic.sym_nm", sr.sym_nm, 1e-10);
  add("symplectic.sym_uv", sr.sym_uv, 1e-10);
  add("symplectic.det_t", sr.det_t, 1e-10);
  add("symplectic.row_norm", sr.row_norm, 1e-10);
  const auto sq = squeeze_matrix(c);
  add("squeeze.symmetry", sq.symmetry, 1e-10);
  add("squeeze.schur", sq.schur, 1e-10);
  add("squeeze.det_identity", sq.det_identity, 1e-8);
  checks.push_back({"squeeze.spectral_radius", sq.spectral_radius, 1.0, sq.spectral_radius < 1});
  add("coefficients.system", verify_coefficient_system(problem, used, c).max(), 1e-9);

  const auto rho = spectral_density(c, used);
  add("observables.sum_rule", rho.sum_rule_residual, 1e-10);
  {
    const VectorXd t = default_time_grid(model.scales.nu, problem.omega_0, 256);
    const auto tr = displacement_trace(c, used, cfg.delta, t);
    add("observables.trace_initial", std::abs(tr.u0(0) - cfg.delta), 1e-10);
    add("observables.trace_forms", tr.form_difference, 1e-10);
  }
  const auto bv = bead_variance(c, used, problem.omega_0, model.params.m);
  add("observables.variance_forms", bv.rel_diff, 1e-10);
  const auto em = emission_spectrum(c, used);
  checks.push_back({"observables.emission_total", em.total_p1, 1.0,
                    em.total_p1 > 0 && em.total_p1 <= 1 + 1e-12 && em.p1.minCoeff() >= 0});

  {
    // Gauge: flip the signs of a random subset of couplings.
    std::mt19937_64 rng(cfg.seed);
    std::bernoulli_distribution flip(0.5);
    SecularProblem<double> flipped = problem;
    for (Eigen::Index i = 0; i < n; ++i)
      if (flip(rng)) flipped.gamma(i) = -flipped.gamma(i);
    const auto fs = solve_spectrum(flipped);
    const auto fused = cfg.inject_perturbation != 0 ? perturb_frequency(fs, 0, cfg.inject_perturbation) : fs;
    const auto fc = build_coefficients(flipped, fused);
    double d = max_abs(occupation_numbers(fc) - occupation_numbers(c));
    d = std::max(d, max_abs(spectral_density(fc, fused).rho - rho.rho));
    d = std::max(d, max_abs(emission_spectrum(fc, fused).p1 - em.p1));
    d = std::max(d, max_abs(fs.Omega - spec.Omega));
    add("gauge.sign_flips", d, 1e-10);
  }

  if (n <= 2) {
    const auto trunc = fock_truncation(problem, cfg.cutoff);
    const auto sol = fock_ground_state(trunc);
    const double e_sym = symplectic_ground_energy(problem, used);
    add("fock.ground_energy", std::abs(sol.ground_energy - e_sym), 1e-6);
    add("fock.occupations", max_abs(fock_occupations(trunc, sol.ground) - occupation_numbers(c)), 1e-5);
    add("fock.emission", max_abs(fock_emission(trunc, sol, used.Omega, 1e-6) - em.p1), 1e-5);
    add("fock.variance", std::abs(fock_bead_variance(trunc, sol.ground, problem.omega_0, model.params.m) -
                                  bv.variance), 1e-5);
    add("fock.parity", odd_parity_amplitude(trunc, sol.ground), 1e-10);
    add("fock.cutoff", sol.top_occupancy, kFockCutoffWarning);
  } else {
    skip("fock (needs n_modes <= 2)");
  }

  {
    std::mt19937_64 rng(cfg.seed);
    const int nd = static_cast<int>(std::min<Eigen::Index>(n, 50));
    double symp = 0, quad = 0, sys = 0;
    for (int k = 0; k < cfg.draws; ++k) {
      const auto m = build_model(random_dimensionless(rng, nd));
      const auto pr = make_secular_problem(m);
      const auto s = solve_spectrum(pr);
      const auto cc = build_coefficients(pr, s);
      symp = std::max(symp, check_symplectic(cc).max());
      const VectorXd q = quadrature_eigenvalues(pr);
      quad = std::max(quad, ((q - s.x).array().abs() / s.x.array()).maxCoeff());
      sys = std::max(sys, verify_coefficient_system(pr, s, cc).max());
    }
    if (cfg.draws > 0) {
      add("draws.symplectic", symp, 1e-10);
      add("draws.quadrature_oracle", quad, 1e-10);
      add("draws.coefficient_system", sys, 1e-9);
    }
  }
  return checks;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto checks = verification_checks(cfg);
  Table t{{"invariant", "value", "tolerance", "status"}, {}};
  const Check* first_fail = nullptr;
  char line[200];
  std::snprintf(line, sizeof line, "%-32s %14s %10s  %s\n", "invariant", "value", "tolerance", "status");
  out << line;
  for (const auto& c : checks) {
    const char* status = c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL");
    std::snprintf(line, sizeof line, "%-32s %14.6e %10.1e  %s\n", c.name.c_str(), c.value, c.tolerance, status);
    out << line;
    t.add(c.name, c.value, c.tolerance, status);
    if (!c.pass && !first_fail) first_fail = &c;
  }
  write_outputs(output_dir(cfg), {{"verify.csv", t.str()}});
  if (first_fail) throw InvariantError(first_fail->name, "residual " + cell(first_fail->value) +
                                                             " exceeds tolerance " + cell(first_fail->tolerance));
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const SweepSpec& sw = cfg.sweep;
  static const std::vector<std::string> known{"omega_c_ratio", "tension_ratio", "length", "n_modes",
                                              "g_target", "g", "nu"};
  if (std::find(known.begin(), known.end(), sw.param) == known.end())
    throw ValidationError("sweep.param", "must be one of omega_c_ratio, tension_ratio, length, n_modes, "
                                         "g_target, g, nu");
  if (sw.steps < 1) throw ValidationError("sweep.steps", "must be >= 1");
  if (!std::isfinite(sw.from) || !std::isfinite(sw.to)) throw ValidationError("sweep.from", "must be finite");

  Table summary{{"index", "value", "g", "Omega_min", "total_p1", "variance_ratio", "renormalized_ratio", "R",
                 "status"},
                {}};
  std::vector<OutputFile> files;
  for (int i = 0; i < sw.steps; ++i) {
    const double v = sw.steps == 1 ? sw.from : sw.from + (sw.to - sw.from) * i / (sw.steps - 1);
    RunConfig c = cfg;
    double g = kNaN;
    try {
      if (!c.params && !c.raw) c.params = ParamBlock{};
      if (sw.param == "omega_c_ratio") c.params->omega_c_ratio = v;
      if (sw.param == "tension_ratio") c.params->tension_ratio = v;
      if (sw.param == "length") c.params->length = v;
      if (sw.param == "n_modes") {
        if (c.raw) c.raw->n_modes = static_cast<int>(std::lround(v));
        else c.params->n_modes = static_cast<int>(std::lround(v));
      }
      if (sw.param == "g_target") c.g_target = v;
      if (sw.param == "nu") c.nu = v;
      const auto model = resolve_model(c, DimensionlessParams<double>{});
      auto problem = resolve_problem(c, model);
      if (sw.param == "g") {
        const double g0 = coupling_strength(problem);
        if (!(g0 > 0)) throw ValidationError("sweep.param", "g sweep needs nonzero couplings");
        problem = scale_couplings(problem, std::sqrt(v / g0));
      }
      g = coupling_strength(problem);
      const auto spec = solve_spectrum(problem);
      const auto coeffs = build_coefficients(problem, spec);
      const auto em = emission_spectrum(coeffs, spec);
      const auto bv = bead_variance(coeffs, spec, problem.omega_0, model.params.m);
      const auto res = try_resonance(model);
      // Rescaled couplings no longer match the continuum description of the model.
      const bool continuum = sw.param != "g";
      summary.add(static_cast<long long>(i), v, g, spec.Omega(0), em.total_p1, bv.ratio,
                  continuum ? bv.variance * 2 * model.params.m * res.omega_r : kNaN,
                  continuum ? try_relative_variance(model.scales.nu, model.scales.omega_d, res.omega_r) : kNaN,
                  "ok");
      files.push_back({"spectrum_" + std::to_string(i) + ".csv", spectrum_table(spec).str()});
    } catch (const InstabilityError& e) {
      summary.add(static_cast<long long>(i), v, e.g(), kNaN, kNaN, kNaN, kNaN, kNaN, "unstable");
    } catch (const ValidationError& e) {
      if (std::string(e.field()).rfind("sweep", 0) == 0) throw;
      summary.add(static_cast<long long>(i), v, g, kNaN, kNaN, kNaN, kNaN, kNaN, "invalid");
    }
  }
  files.push_back({"sweep.csv", summary.str()});
  write_outputs(output_dir(cfg), files);
  out << "sweep points: " << sw.steps << "\n";
  return kOk;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "coeffs",  "ground-state", "decay", "emission",
                                              "variance", "figures", "verify",       "sweep"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (name == "spectrum") return cmd_spectrum(cfg, out);
    if (name == "coeffs") return cmd_coeffs(cfg, out);
    if (name == "ground-state") return cmd_ground_state(cfg, out);
    if (name == "decay") return cmd_decay(cfg, out);
    if (name == "emission") return cmd_emission(cfg, out);
    if (name == "variance") return cmd_variance(cfg, out);
    if (name == "figures") return cmd_figures(cfg, out);
    if (name == "verify") return cmd_verify(cfg, out);
    if (name == "sweep") return cmd_sweep(cfg, out);
    err << "error: unknown command " << name << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << "\n";
    say(err, "g = %.17g\n", e.g());
    return kInstability;
  } catch (const InvariantError& e) {
    err << "verification failed: invariant " << e.what() << "\n";
    return kVerificationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace lambq::cli
