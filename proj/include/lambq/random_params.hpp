#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "lambq/params.hpp"
#include "lambq/spectrum.hpp"

namespace lambq {

/// A stable physical parameter set: ω_c/ω_0 ∈ [0.3, 0.95], τ/(κ_c d) log-uniform on
/// [1e-2, 1e2], ℓω_0/c ∈ [5, 50]. Stability is automatic since g < (ω_c/ω_0)².
template <typename Rng>
DimensionlessParams<double> random_dimensionless(Rng& rng, int n_modes) {
  std::uniform_real_distribution<double> ratio(0.3, 0.95), log_t(std::log(1e-2), std::log(1e2)),
      length(5.0, 50.0);
  DimensionlessParams<double> p;
  p.omega_c_ratio = ratio(rng);
  p.tension_ratio = std::exp(log_t(rng));
  p.n_modes = n_modes;
  p.length = length(rng);
  return p;
}

/// Generic couplings not tied to the string: ω_n sorted uniform on (0.05, 3)ω_0 with a
/// minimum gap, |γ_n| random with random signs, rescaled to g uniform on [g_lo, g_hi].
template <typename Rng>
SecularProblem<double> random_secular_problem(Rng& rng, int n_modes, double g_lo = 0.05,
                                              double g_hi = 0.95) {
  std::uniform_real_distribution<double> freq(0.05, 3.0), mag(0.1, 1.0), g_dist(g_lo, g_hi);
  std::bernoulli_distribution sign(0.5);
  SecularProblem<double> p;
  p.omega_0 = 1;
  p.omega.resize(n_modes);
  p.gamma.resize(n_modes);
  const double min_gap = 1e-3 / n_modes;
  for (;;) {
    for (int i = 0; i < n_modes; ++i) p.omega(i) = freq(rng);
    std::sort(p.omega.data(), p.omega.data() + n_modes);
    bool ok = true;
    for (int i = 1; i < n_modes; ++i) ok = ok && p.omega(i) - p.omega(i - 1) > min_gap;
    if (ok) break;
  }
  for (int i = 0; i < n_modes; ++i) p.gamma(i) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
  const double g = coupling_strength(p);
  p.gamma *= std::sqrt(g_dist(rng) / g);
  return p;
}

}  // namespace lambq
