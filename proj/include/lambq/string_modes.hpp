#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lambq/errors.hpp"
#include "lambq/params.hpp"
#include "lambq/roots.hpp"
#include "lambq/types.hpp"

namespace lambq {

/// Normal modes of the string with a spring boundary at x = 0 and a fixed end at x = ℓ.
template <typename Scalar = double>
struct StringModes {
  Vector<Scalar> k;       ///< wavenumbers, ascending
  Vector<Scalar> omega;   ///< c k
  Vector<Scalar> gamma;   ///< bead-mode couplings (positive convention)
  Vector<Scalar> a_norm;  ///< mode normalization constants A_n

  Eigen::Index size() const { return k.size(); }
};

inline constexpr double kRootTolerance = 1e-13;

/// Roots of tan(kℓ) = -(τ/κ_c) k, one in each ((n-½)π/ℓ, nπ/ℓ).
///
/// Solved in θ = kℓ from the pole-free form a sin θ + θ cos θ = 0 with a = k_s ℓ,
/// which has opposite signs at the two bracket ends for every a > 0.
template <typename Scalar>
StringModes<Scalar> solve_wavenumbers(const PhysicalParams<Scalar>& p,
                                      Scalar rel_tol = Scalar(kRootTolerance)) {
  using std::cos;
  using std::sin;
  validate(p);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar a = p.kappa_c / p.tau * p.ell;
  const Scalar c = std::sqrt(p.tau / p.sigma);
  StringModes<Scalar> modes;
  modes.k.resize(p.n_modes);
  modes.omega.resize(p.n_modes);
  auto h = [a](Scalar theta) { return a * sin(theta) + theta * cos(theta); };
  for (int n = 1; n <= p.n_modes; ++n) {
    const Scalar lo = (Scalar(n) - Scalar(0.5)) * pi;
    const Scalar hi = Scalar(n) * pi;
    // Exact endpoint values: cos((n-½)π) and sin(nπ) are not exactly zero in floating point.
    const Scalar h_lo = (n % 2 == 1) ? a : -a;
    const Scalar h_hi = (n % 2 == 0) ? hi : -hi;
    const Scalar theta = brent_root(h, lo, hi, h_lo, h_hi, rel_tol,
                                    std::numeric_limits<Scalar>::min(), n - 1);
    modes.k(n - 1) = theta / p.ell;
    modes.omega(n - 1) = c * modes.k(n - 1);
  }
  return modes;
}

/// |tan(k_n ℓ) + (τ/κ_c) k_n| for each mode.
template <typename Scalar>
Vector<Scalar> wavenumber_residuals(const PhysicalParams<Scalar>& p,
                                    const StringModes<Scalar>& modes) {
  using std::abs;
  using std::tan;
  Vector<Scalar> r(modes.size());
  for (Eigen::Index n = 0; n < modes.size(); ++n)
    r(n) = abs(tan(modes.k(n) * p.ell) + p.tau / p.kappa_c * modes.k(n));
  return r;
}

/// Couplings γ_n = ω_s √(ν/ω_0) √(k_nℓ/((k_nℓ)² + (k_sℓ)²)) / √(1 + k_sℓ/((k_nℓ)² + (k_sℓ)²)).
///
/// The sign under the last root is the one that follows from the normalization A_n
/// evaluated on a root of the wavenumber equation; see first_principles_gammas.
template <typename Scalar>
StringModes<Scalar> coupling_gammas(const PhysicalParams<Scalar>& p,
                                    const DerivedScales<Scalar>& s, StringModes<Scalar> modes) {
  using std::sin;
  using std::sqrt;
  const Eigen::Index n = modes.size();
  modes.gamma.resize(n);
  modes.a_norm.resize(n);
  const Scalar ksl = s.k_s * p.ell;
  const Scalar prefactor = s.omega_s * sqrt(s.nu / s.omega_0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar knl = modes.k(i) * p.ell;
    const Scalar denom = knl * knl + ksl * ksl;
    modes.gamma(i) = prefactor * sqrt(knl / denom) / sqrt(1 + ksl / denom);
    modes.a_norm(i) = sqrt(Scalar(2) / p.ell) / sqrt(1 - sin(2 * knl) / (2 * knl));
  }
  return modes;
}

/// Signed couplings from the interaction -κ_c u_0 u_s(0): κ_c w_n(0) / (2√(m σ ω_0 ω_n)),
/// with w_n(0) = -A_n sin(k_n ℓ).
template <typename Scalar>
Vector<Scalar> first_principles_gammas(const PhysicalParams<Scalar>& p,
                                       const DerivedScales<Scalar>& s,
                                       const StringModes<Scalar>& modes) {
  using std::sin;
  using std::sqrt;
  Vector<Scalar> g(modes.size());
  for (Eigen::Index i = 0; i < modes.size(); ++i) {
    const Scalar knl = modes.k(i) * p.ell;
    const Scalar a_n = sqrt(Scalar(2) / p.ell) / sqrt(1 - sin(2 * knl) / (2 * knl));
    const Scalar w0 = -a_n * sin(knl);
    g(i) = p.kappa_c * w0 / (2 * sqrt(p.m * p.sigma * s.omega_0 * modes.omega(i)));
  }
  return g;
}

/// g = (4/ω_0) Σ γ_n²/ω_n.
template <typename Scalar>
Scalar coupling_strength(Scalar omega_0, const Vector<Scalar>& omega, const Vector<Scalar>& gamma) {
  return 4 / omega_0 * (gamma.array().square() / omega.array()).sum();
}

/// Thermodynamic-limit coupling strength (2/π)(ω_c/ω_0)² arctan(πτ/(κ_c d)).
/// tension_ratio = τ/(κ_c d) may be +inf.
template <typename Scalar>
Scalar g_infinity(Scalar omega_c_ratio, Scalar tension_ratio) {
  using std::atan;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (tension_ratio == Scalar(0)) return Scalar(0);
  if (std::isinf(static_cast<double>(tension_ratio))) return omega_c_ratio * omega_c_ratio;
  return 2 / pi * omega_c_ratio * omega_c_ratio * atan(pi * tension_ratio);
}

template <typename Scalar>
struct CouplingStrength {
  Scalar g;
  Scalar g_infinity;
};

template <typename Scalar>
CouplingStrength<Scalar> coupling_strength(const PhysicalParams<Scalar>& p,
                                           const DerivedScales<Scalar>& s,
                                           const StringModes<Scalar>& modes) {
  return {coupling_strength(s.omega_0, modes.omega, modes.gamma),
          g_infinity(s.omega_c / s.omega_0, p.tau / (p.kappa_c * s.d))};
}

/// Parameters plus everything derived from them that the later stages need.
template <typename Scalar = double>
struct LambModel {
  PhysicalParams<Scalar> params;
  DerivedScales<Scalar> scales;
  StringModes<Scalar> modes;

  Scalar g() const { return coupling_strength(scales.omega_0, modes.omega, modes.gamma); }
};

template <typename Scalar>
LambModel<Scalar> build_model(const PhysicalParams<Scalar>& p) {
  LambModel<Scalar> model;
  model.params = p;
  model.scales = derive_scales(p);
  model.modes = coupling_gammas(p, model.scales, solve_wavenumbers(p));
  return model;
}

template <typename Scalar>
LambModel<Scalar> build_model(const DimensionlessParams<Scalar>& p) {
  return build_model(to_physical(p));
}

enum class TensionBranch { lower, upper };

/// τ/(κ_c d) at which the discrete coupling strength equals g_target for fixed ω_c/ω_0 and N.
///
/// The discrete g is independent of ℓ and rises then falls with τ/(κ_c d), so a reachable
/// target has two solutions; the lower branch is the one continuous with the thermodynamic
/// limit. Throws ValidationError when g_target exceeds the attainable maximum.
template <typename Scalar>
Scalar solve_tension_for_g(Scalar omega_c_ratio, int n_modes, Scalar g_target,
                           TensionBranch branch = TensionBranch::lower) {
  using std::exp;
  using std::log;
  if (!(g_target > 0)) throw ValidationError("g_target", "must be positive");
  auto g_of_log_t = [&](Scalar log_t) {
    DimensionlessParams<Scalar> dp;
    dp.omega_c_ratio = omega_c_ratio;
    dp.tension_ratio = exp(log_t);
    dp.n_modes = n_modes;
    dp.length = 1;
    return build_model(dp).g();
  };
  // Golden-section search for the maximum of g over log(τ/(κ_c d)).
  Scalar a = -20, b = log(Scalar(1e4) * Scalar(n_modes));
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  Scalar f1 = g_of_log_t(x1), f2 = g_of_log_t(x2);
  while (b - a > Scalar(1e-9)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g_of_log_t(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g_of_log_t(x1);
    }
  }
  const Scalar peak = (a + b) / 2;
  const Scalar g_max = g_of_log_t(peak);
  if (g_target > g_max)
    throw ValidationError("g_target", "unreachable for omega_c_ratio and n_modes; max g = " +
                                          std::to_string(static_cast<double>(g_max)));
  auto f = [&](Scalar log_t) { return g_of_log_t(log_t) - g_target; };
  const Scalar lo = branch == TensionBranch::lower ? Scalar(-20) : peak;
  const Scalar hi = branch == TensionBranch::lower ? peak : log(Scalar(1e4) * Scalar(n_modes));
  return exp(brent_root(f, lo, hi, Scalar(1e-14)));
}

}  // namespace lambq
