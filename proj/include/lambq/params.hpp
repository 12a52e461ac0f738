#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "lambq/errors.hpp"

namespace lambq {

/// Raw constants of the bead-spring-string model, natural units with hbar = 1.
template <typename Scalar = double>
struct PhysicalParams {
  Scalar m{1};        ///< bead mass
  Scalar kappa{1};    ///< bead spring constant
  Scalar kappa_c{1};  ///< coupling spring constant
  Scalar tau{1};      ///< string tension
  Scalar sigma{1};    ///< lineal mass density
  Scalar ell{1};      ///< string length
  int n_modes{1};     ///< number of string modes N
};

/// The combinations the figures sweep: ω_c/ω_0, τ/(κ_c d), N and ℓ in units of c/ω_0.
/// Mapped onto raw parameters with m = 1 and c = 1.
template <typename Scalar = double>
struct DimensionlessParams {
  Scalar omega_c_ratio{Scalar(0.9)};
  Scalar tension_ratio{1};
  int n_modes{15};
  Scalar length{10};
  Scalar omega_0{1};
};

template <typename Scalar = double>
struct DerivedScales {
  Scalar omega_0;  ///< √((κ+κ_c)/m)
  Scalar omega_b;  ///< √(κ/m)
  Scalar omega_c;  ///< √(κ_c/m)
  Scalar c;        ///< √(τ/σ)
  Scalar nu;       ///< τ/(2mc), classical damping rate
  Scalar k_s;      ///< κ_c/τ
  Scalar omega_s;  ///< c k_s
  Scalar d;        ///< ℓ/N
  Scalar omega_d;  ///< (N/ℓ)πc, Debye cutoff
  Scalar dos;      ///< ℓ/(πc), string density of states
  Scalar ell;
  int n_modes;
};

namespace detail {

template <typename Scalar>
void require_positive(Scalar v, const char* field) {
  if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v)))
    throw ValidationError(field, "must be finite and strictly positive");
}

}  // namespace detail

template <typename Scalar>
void validate(const PhysicalParams<Scalar>& p) {
  detail::require_positive(p.m, "m");
  detail::require_positive(p.kappa, "kappa");
  detail::require_positive(p.kappa_c, "kappa_c");
  detail::require_positive(p.tau, "tau");
  detail::require_positive(p.sigma, "sigma");
  detail::require_positive(p.ell, "ell");
  if (p.n_modes < 1) throw ValidationError("n_modes", "must be >= 1");
}

template <typename Scalar>
void validate(const DimensionlessParams<Scalar>& p) {
  detail::require_positive(p.omega_c_ratio, "omega_c_ratio");
  if (!(p.omega_c_ratio < Scalar(1)))
    throw ValidationError("omega_c_ratio", "must be < 1 (bead spring κ must be positive)");
  detail::require_positive(p.tension_ratio, "tension_ratio");
  detail::require_positive(p.length, "length");
  detail::require_positive(p.omega_0, "omega_0");
  if (p.n_modes < 1) throw ValidationError("n_modes", "must be >= 1");
}

template <typename Scalar>
DerivedScales<Scalar> derive_scales(const PhysicalParams<Scalar>& p) {
  using std::sqrt;
  validate(p);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  DerivedScales<Scalar> s;
  s.omega_0 = sqrt((p.kappa + p.kappa_c) / p.m);
  s.omega_b = sqrt(p.kappa / p.m);
  s.omega_c = sqrt(p.kappa_c / p.m);
  s.c = sqrt(p.tau / p.sigma);
  s.nu = p.tau / (2 * p.m * s.c);
  s.k_s = p.kappa_c / p.tau;
  s.omega_s = s.c * s.k_s;
  s.d = p.ell / Scalar(p.n_modes);
  s.omega_d = Scalar(p.n_modes) / p.ell * pi * s.c;
  s.dos = p.ell / (pi * s.c);
  s.ell = p.ell;
  s.n_modes = p.n_modes;
  return s;
}

template <typename Scalar>
PhysicalParams<Scalar> to_physical(const DimensionlessParams<Scalar>& p) {
  validate(p);
  // m = 1, c = 1; lengths measured in c/ω_0.
  PhysicalParams<Scalar> r;
  r.m = 1;
  r.n_modes = p.n_modes;
  r.ell = p.length / p.omega_0;
  const Scalar omega_c = p.omega_c_ratio * p.omega_0;
  r.kappa_c = omega_c * omega_c;
  r.kappa = p.omega_0 * p.omega_0 - r.kappa_c;
  const Scalar d = r.ell / Scalar(p.n_modes);
  const Scalar k_s = 1 / (d * p.tension_ratio);
  r.tau = r.kappa_c / k_s;
  r.sigma = r.tau;
  return r;
}

/// Inverse of to_physical: the dimensionless view of a raw parameter set.
template <typename Scalar>
DimensionlessParams<Scalar> to_dimensionless(const PhysicalParams<Scalar>& p) {
  const auto s = derive_scales(p);
  DimensionlessParams<Scalar> r;
  r.omega_0 = s.omega_0;
  r.omega_c_ratio = s.omega_c / s.omega_0;
  r.tension_ratio = p.tau / (p.kappa_c * s.d);
  r.n_modes = p.n_modes;
  r.length = p.ell * s.omega_0 / s.c;
  return r;
}

}  // namespace lambq
