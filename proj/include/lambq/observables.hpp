#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/LU>

#include "lambq/bogoliubov.hpp"
#include "lambq/errors.hpp"
#include "lambq/params.hpp"
#include "lambq/roots.hpp"
#include "lambq/spectrum.hpp"
#include "lambq/string_modes.hpp"
#include "lambq/types.hpp"

namespace lambq {

template <typename Scalar = double>
struct GroundStateReport {
  Vector<Scalar> n_occ;
  Scalar total_occ{0};
  Scalar variance_u0{0};
  Scalar variance_ratio{1};  ///< ⟨u_0²⟩ / (1/(2mω_0))
  Scalar variance_freq_form{0};
  Scalar renormalized_ratio{std::numeric_limits<Scalar>::quiet_NaN()};  ///< ⟨u_0²⟩ / (1/(2mω_r))
};

/// n_α = Σ_β N_βα².
template <typename Scalar>
Vector<Scalar> occupation_numbers(const CoefficientSet<Scalar>& c) {
  return c.N_mat.array().square().colwise().sum().transpose();
}

template <typename Scalar = double>
struct BeadVariance {
  Scalar variance{0};    ///< (1/(2mω_0)) Σ_α (M_α0 - N_α0)²
  Scalar freq_form{0};   ///< (1/(2m)) Σ_α 1/(Ω_α D_α²)
  Scalar ratio{1};
  Scalar rel_diff{0};
};

template <typename Scalar>
BeadVariance<Scalar> bead_variance(const CoefficientSet<Scalar>& c,
                                   const BogoliubovSpectrum<Scalar>& s, Scalar omega_0,
                                   Scalar mass = Scalar(1)) {
  using std::abs;
  BeadVariance<Scalar> v;
  v.variance = (c.M.col(0) - c.N_mat.col(0)).squaredNorm() / (2 * mass * omega_0);
  Scalar sum = 0;
  for (Eigen::Index a = 0; a < s.size(); ++a) {
    if (s.decoupled(a)) continue;
    const Scalar D = c.norm_factors(a);
    sum += 1 / (s.Omega(a) * D * D);
  }
  v.freq_form = sum / (2 * mass);
  v.ratio = v.variance * 2 * mass * omega_0;
  v.rel_diff = abs(v.variance - v.freq_form) / v.variance;
  return v;
}

template <typename Scalar>
GroundStateReport<Scalar> ground_state_report(const CoefficientSet<Scalar>& c,
                                              const BogoliubovSpectrum<Scalar>& s, Scalar omega_0,
                                              Scalar mass = Scalar(1)) {
  GroundStateReport<Scalar> r;
  r.n_occ = occupation_numbers(c);
  r.total_occ = r.n_occ.sum();
  const auto v = bead_variance(c, s, omega_0, mass);
  r.variance_u0 = v.variance;
  r.variance_ratio = v.ratio;
  r.variance_freq_form = v.freq_form;
  return r;
}

/// R(ν̄) = (1/π)(arctan((ω̄_d² - 1)/(2ν̄)) + arctan(1/(2ν̄))), ν̄ = ν/ω_r, ω̄_d = ω_d/ω_r.
template <typename Scalar>
Scalar relative_variance(Scalar nu_bar, Scalar omega_d_bar) {
  using std::atan;
  if (!(omega_d_bar > 1)) throw DomainError("relative_variance: omega_d_bar must exceed 1");
  if (!(nu_bar >= 0)) throw DomainError("relative_variance: nu_bar must be non-negative");
  if (nu_bar == Scalar(0)) return Scalar(1);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  return (atan((omega_d_bar * omega_d_bar - 1) / (2 * nu_bar)) + atan(1 / (2 * nu_bar))) / pi;
}

template <typename Scalar = double>
struct SpectralDensity {
  Vector<Scalar> Omega;
  Vector<Scalar> rho;          ///< U_0α² - V_0α²
  Scalar sum_rule_residual{0};
  Scalar width_estimate{std::numeric_limits<Scalar>::quiet_NaN()};  ///< FWHM in Ω
  Eigen::Index peak{0};
};

template <typename Scalar>
SpectralDensity<Scalar> spectral_density(const CoefficientSet<Scalar>& c,
                                         const BogoliubovSpectrum<Scalar>& s) {
  using std::abs;
  SpectralDensity<Scalar> r;
  r.Omega = s.Omega;
  r.rho = c.U.row(0).array().square().transpose() - c.V.row(0).array().square().transpose();
  r.sum_rule_residual = abs(r.rho.sum() - 1);
  r.rho.maxCoeff(&r.peak);
  const Scalar half = r.rho(r.peak) / 2;
  const Eigen::Index n = r.rho.size();
  Eigen::Index i = r.peak, j = r.peak;
  while (i > 0 && r.rho(i) >= half) --i;
  while (j < n - 1 && r.rho(j) >= half) ++j;
  if (r.rho(i) < half && r.rho(j) < half) {
    auto cross = [&](Eigen::Index a, Eigen::Index b) {
      return r.Omega(a) + (half - r.rho(a)) * (r.Omega(b) - r.Omega(a)) / (r.rho(b) - r.rho(a));
    };
    r.width_estimate = cross(j - 1, j) - cross(i, i + 1);
  }
  return r;
}

template <typename Scalar = double>
struct DisplacementTrace {
  Vector<Scalar> t;
  Vector<Scalar> u0;
  Scalar form_difference{0};  ///< max |Σ ρ cos - Σ cos/D²| · |δ|
};

/// ⟨u_0(t)⟩ = δ Σ_α ρ(Ω_α) cos(Ω_α t), cross-checked against δ Σ_α cos(Ω_α t)/D_α².
template <typename Scalar>
DisplacementTrace<Scalar> displacement_trace(const CoefficientSet<Scalar>& c,
                                             const BogoliubovSpectrum<Scalar>& s, Scalar delta,
                                             const Vector<Scalar>& t_grid) {
  using std::abs;
  using std::cos;
  const Vector<Scalar> rho =
      c.U.row(0).array().square().transpose() - c.V.row(0).array().square().transpose();
  Vector<Scalar> inv_d2(s.size());
  for (Eigen::Index a = 0; a < s.size(); ++a)
    inv_d2(a) = s.decoupled(a) ? Scalar(0) : 1 / (c.norm_factors(a) * c.norm_factors(a));
  DisplacementTrace<Scalar> r;
  r.t = t_grid;
  r.u0.resize(t_grid.size());
  for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
    Scalar u = 0, u_alt = 0;
    for (Eigen::Index a = 0; a < s.size(); ++a) {
      const Scalar ct = cos(s.Omega(a) * t_grid(i));
      u += rho(a) * ct;
      u_alt += inv_d2(a) * ct;
    }
    r.u0(i) = delta * u;
    r.form_difference = std::max(r.form_difference, abs(delta) * abs(u - u_alt));
  }
  return r;
}

inline constexpr int kTraceSamples = 4096;

/// 4096 points on [0, 10/ν], or [0, 200/ω_0] without damping.
template <typename Scalar>
Vector<Scalar> default_time_grid(Scalar nu, Scalar omega_0, int samples = kTraceSamples) {
  const Scalar t_max = nu > 0 ? 10 / nu : 200 / omega_0;
  return Vector<Scalar>::LinSpaced(samples, Scalar(0), t_max);
}

template <typename Scalar = double>
struct EnvelopeFit {
  Scalar rate{std::numeric_limits<Scalar>::quiet_NaN()};
  Scalar intercept{0};
  int n_extrema{0};
};

/// Decay rate from a least-squares line through ln|extremum| vs t, over the first `e_folds`
/// e-folds of the amplitude. Extremum positions are refined by a parabola through three samples.
template <typename Scalar>
EnvelopeFit<Scalar> fit_envelope(const Vector<Scalar>& t, const Vector<Scalar>& u,
                                 Scalar e_folds = Scalar(5)) {
  using std::abs;
  using std::exp;
  using std::log;
  std::vector<Scalar> te, le;
  Scalar a0 = abs(u(0));
  te.push_back(t(0));
  le.push_back(log(a0));
  const Scalar floor = a0 * exp(-e_folds);
  for (Eigen::Index i = 1; i + 1 < u.size(); ++i) {
    const Scalar y0 = abs(u(i - 1)), y1 = abs(u(i)), y2 = abs(u(i + 1));
    if (!(y1 > y0 && y1 >= y2)) continue;
    const Scalar denom = y0 - 2 * y1 + y2;
    Scalar shift = 0, peak = y1;
    if (denom < 0) {
      shift = Scalar(0.5) * (y0 - y2) / denom;
      peak = y1 - Scalar(0.25) * (y0 - y2) * shift;
    }
    if (peak < floor) break;
    te.push_back(t(i) + shift * (t(i + 1) - t(i)));
    le.push_back(log(peak));
  }
  EnvelopeFit<Scalar> f;
  f.n_extrema = static_cast<int>(te.size());
  if (te.size() < 3) return f;
  const Scalar n = Scalar(te.size());
  Scalar st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t k = 0; k < te.size(); ++k) {
    st += te[k];
    sl += le[k];
    stt += te[k] * te[k];
    stl += te[k] * le[k];
  }
  const Scalar slope = (n * stl - st * sl) / (n * stt - st * st);
  f.rate = -slope;
  f.intercept = (sl - slope * st) / n;
  return f;
}

/// Quasicontinuum limit of the couplings: J(ω) = 𝒟γ²(ω) = νω_s²ω / (πω_0(ω² + ω_s²)).
template <typename Scalar = double>
struct ContinuumCoupling {
  Scalar omega_0;
  Scalar nu;
  Scalar omega_s;
  Scalar omega_d;

  Scalar J(Scalar w) const {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    return nu * omega_s * omega_s * w / (pi * omega_0 * (w * w + omega_s * omega_s));
  }

  /// ω_0² + 4ω_0 ⨍_0^{ω_d} J(ω) ω/(x - ω²) dω.
  Scalar g_fn(Scalar x) const {
    check(x);
    if (nu == Scalar(0)) return omega_0 * omega_0;
    return omega_0 * omega_0 + C() / (x + S()) * P(x);
  }

  Scalar g_fn_prime(Scalar x) const {
    check(x);
    if (nu == Scalar(0)) return Scalar(0);
    const Scalar s = x + S();
    return C() * (P_prime(x) / s - P(x) / (s * s));
  }

  /// 2πω_0 J(√x).
  Scalar h(Scalar x) const {
    check(x);
    using std::sqrt;
    return 2 * nu * omega_s * omega_s * sqrt(x) / (x + omega_s * omega_s);
  }

  /// 2πJ(ω_0); tends to 2ν for ω_s ≫ ω_0.
  Scalar golden_rule() const {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    return 2 * pi * J(omega_0);
  }

 private:
  Scalar C() const { return 4 * nu * omega_s * omega_s / std::numbers::pi_v<Scalar>; }
  Scalar S() const { return omega_s * omega_s; }
  Scalar L(Scalar x) const {
    using std::log;
    using std::sqrt;
    const Scalar r = sqrt(x);
    return log((omega_d + r) / (omega_d - r));
  }
  Scalar P(Scalar x) const {
    using std::atan;
    using std::sqrt;
    return -omega_s * atan(omega_d / omega_s) + sqrt(x) / 2 * L(x);
  }
  Scalar P_prime(Scalar x) const {
    using std::sqrt;
    return L(x) / (4 * sqrt(x)) + omega_d / (2 * (omega_d * omega_d - x));
  }
  void check(Scalar x) const {
    if (!(x > 0 && x < omega_d * omega_d))
      throw DomainError("continuum functions: x outside (0, omega_d^2)");
  }
};

template <typename Scalar>
ContinuumCoupling<Scalar> continuum_functions(const DerivedScales<Scalar>& s) {
  return {s.omega_0, s.nu, s.omega_s, s.omega_d};
}

template <typename Scalar = double>
struct DecayReport {
  Scalar x_r{0};
  Scalar omega_r{0};
  Scalar h_r{0};
  Scalar Gamma_r{0};
  Scalar Gamma_closed{0};
  Scalar Gamma_fit{std::numeric_limits<Scalar>::quiet_NaN()};
  Scalar Gamma_gr{0};          ///< 2ν
  Scalar Gamma_gr_finite{0};   ///< 2πJ(ω_0) at finite ω_s
  Scalar theta_0{0};
  Scalar nu{0};
  Scalar fwhm{std::numeric_limits<Scalar>::quiet_NaN()};
  int n_extrema{0};
};

/// Γ = (ω_r/√2)(√(1 + Γ_r⁴/ω_r⁴) - 1)^{1/2}, written to avoid cancellation for small Γ_r/ω_r.
template <typename Scalar>
Scalar closed_form_gamma(Scalar omega_r, Scalar Gamma_r) {
  using std::sqrt;
  const Scalar y = (Gamma_r / omega_r) * (Gamma_r / omega_r) * (Gamma_r / omega_r) *
                   (Gamma_r / omega_r);
  return omega_r / sqrt(Scalar(2)) * sqrt(y / (sqrt(1 + y) + 1));
}

inline constexpr int kResonanceScan = 4000;

/// Resonance data from the continuum functions: first upward crossing of x = g_fn(x) on
/// (0, ω_d²), then h_r, Γ_r, closed-form Γ and θ_0.
template <typename Scalar>
DecayReport<Scalar> resonance(const ContinuumCoupling<Scalar>& cc) {
  using std::atan;
  using std::sqrt;
  DecayReport<Scalar> r;
  r.nu = cc.nu;
  r.Gamma_gr = 2 * cc.nu;
  if (cc.nu == Scalar(0)) {
    r.x_r = cc.omega_0 * cc.omega_0;
    r.omega_r = cc.omega_0;
    return r;
  }
  r.Gamma_gr_finite = cc.golden_rule();
  const Scalar top = cc.omega_d * cc.omega_d;
  auto F = [&](Scalar x) { return x - cc.g_fn(x); };
  Scalar prev_x = top * Scalar(1e-12), prev_f = F(prev_x);
  bool found = false;
  for (int i = 1; i <= kResonanceScan; ++i) {
    const Scalar x = top * Scalar(i) / Scalar(kResonanceScan + 1);
    const Scalar fx = F(x);
    if (prev_f < 0 && fx >= 0) {
      r.x_r = brent_root(F, prev_x, x, prev_f, fx, Scalar(1e-12));
      found = true;
      break;
    }
    prev_x = x;
    prev_f = fx;
  }
  if (!found) throw ResonanceNotFoundError("x = g(x) has no root in (0, omega_d^2)");
  r.omega_r = sqrt(r.x_r);
  r.h_r = cc.h(r.x_r) / (1 - cc.g_fn_prime(r.x_r));
  r.Gamma_r = sqrt(r.h_r);
  r.Gamma_closed = closed_form_gamma(r.omega_r, r.Gamma_r);
  r.theta_0 = atan(r.h_r / r.x_r);
  return r;
}

template <typename Scalar = double>
struct DecayOptions {
  int samples{kTraceSamples};
  Scalar t_max{0};  ///< 0 selects 10/ν (200/ω_0 when ν = 0)
  Scalar delta{1};
  Scalar e_folds{5};
};

/// Continuum resonance plus the envelope fit of the discrete trace for the same parameters.
template <typename Scalar>
DecayReport<Scalar> decay_rate(const LambModel<Scalar>& model,
                               const DecayOptions<Scalar>& opt = {}) {
  DecayReport<Scalar> r = resonance(continuum_functions(model.scales));
  const auto problem = make_secular_problem(model);
  const auto spec = solve_spectrum(problem);
  const auto coeffs = build_coefficients(problem, spec);
  const Vector<Scalar> t =
      opt.t_max > 0 ? Vector<Scalar>::LinSpaced(opt.samples, Scalar(0), opt.t_max)
                    : default_time_grid(model.scales.nu, model.scales.omega_0, opt.samples);
  const auto trace = displacement_trace(coeffs, spec, opt.delta, t);
  const auto fit = fit_envelope(trace.t, trace.u0, opt.e_folds);
  r.Gamma_fit = fit.rate;
  r.n_extrema = fit.n_extrema;
  r.fwhm = spectral_density(coeffs, spec).width_estimate;
  return r;
}

/// Parameters with a prescribed classical damping ν and spring wavenumber scale ω_s = c k_s
/// (c = 1): ω_c = √(2νω_s), τ/(κ_c d) = N/(ℓ ω_s).
template <typename Scalar>
DimensionlessParams<Scalar> params_from_damping(Scalar nu, Scalar omega_s, Scalar length,
                                                int n_modes, Scalar omega_0 = Scalar(1)) {
  using std::sqrt;
  DimensionlessParams<Scalar> p;
  p.omega_0 = omega_0;
  p.n_modes = n_modes;
  p.length = length;
  p.omega_c_ratio = sqrt(2 * nu * omega_s) / omega_0;
  p.tension_ratio = Scalar(n_modes) / (length / omega_0 * omega_s);
  validate(p);
  return p;
}

template <typename Scalar = double>
struct EmissionSpectrum {
  Vector<Scalar> Omega;
  Vector<Scalar> p1;
  Scalar total_p1{0};
  Eigen::Index peak_alpha{0};
};

/// P_1(Ω_α) = ((M⁻¹)_0α)² / |det M|.
template <typename Scalar>
EmissionSpectrum<Scalar> emission_spectrum(const CoefficientSet<Scalar>& c,
                                           const BogoliubovSpectrum<Scalar>& s) {
  using std::abs;
  const Eigen::Index dim = c.size();
  Eigen::PartialPivLU<Matrix<Scalar>> lu(c.M.transpose());
  if (!(abs(lu.determinant()) > 0) || !(lu.rcond() > 16 * std::numeric_limits<Scalar>::epsilon()))
    throw SingularMatrixError("M is singular to working precision");
  const Vector<Scalar> z = lu.solve(Vector<Scalar>::Unit(dim, 0));
  EmissionSpectrum<Scalar> e;
  e.Omega = s.Omega;
  e.p1 = z.array().square() / abs(c.det_M);
  e.total_p1 = e.p1.sum();
  e.p1.maxCoeff(&e.peak_alpha);
  return e;
}

/// Indices of interior or edge local maxima whose value exceeds rel_floor × the global max.
template <typename Scalar>
std::vector<Eigen::Index> local_maxima(const Vector<Scalar>& v, Scalar rel_floor) {
  std::vector<Eigen::Index> out;
  const Eigen::Index n = v.size();
  if (n == 0) return out;
  const Scalar floor = rel_floor * v.maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool left = i == 0 || v(i) > v(i - 1);
    const bool right = i == n - 1 || v(i) >= v(i + 1);
    if (left && right && v(i) > floor) out.push_back(i);
  }
  return out;
}

}  // namespace lambq
