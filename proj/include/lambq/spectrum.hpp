#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "lambq/errors.hpp"
#include "lambq/params.hpp"
#include "lambq/roots.hpp"
#include "lambq/string_modes.hpp"
#include "lambq/types.hpp"

namespace lambq {

/// Bead frequency plus string frequencies and couplings; everything the secular equation needs.
template <typename Scalar = double>
struct SecularProblem {
  Scalar omega_0{1};
  Vector<Scalar> omega;
  Vector<Scalar> gamma;

  Eigen::Index size() const { return omega.size(); }
};

template <typename Scalar>
void validate(const SecularProblem<Scalar>& p) {
  if (!(p.omega_0 > 0) || !std::isfinite(static_cast<double>(p.omega_0)))
    throw ValidationError("omega_0", "must be finite and strictly positive");
  if (p.omega.size() != p.gamma.size())
    throw ValidationError("gamma", "length differs from omega");
  if (p.omega.size() < 1) throw ValidationError("omega", "need at least one string mode");
  if (!p.gamma.allFinite()) throw ValidationError("gamma", "must be finite");
  if (!(p.omega(0) > 0)) throw ValidationError("omega", "must be strictly positive");
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (!(p.omega(i) > p.omega(i - 1))) throw ValidationError("omega", "must be strictly increasing");
}

template <typename Scalar>
SecularProblem<Scalar> make_secular_problem(const LambModel<Scalar>& model) {
  return {model.scales.omega_0, model.modes.omega, model.modes.gamma};
}

template <typename Scalar>
Scalar coupling_strength(const SecularProblem<Scalar>& p) {
  return coupling_strength(p.omega_0, p.omega, p.gamma);
}

/// Multiplies every γ_n by `factor`, so g scales by factor².
template <typename Scalar>
SecularProblem<Scalar> scale_couplings(SecularProblem<Scalar> p, Scalar factor) {
  p.gamma *= factor;
  return p;
}

template <typename Scalar>
struct SecularValue {
  Scalar S;
  Scalar dS;
};

inline constexpr double kPoleGuard = 1e-12;

/// S(x) = x - ω_0² - 4ω_0 Σ γ_q² ω_q / (x - ω_q²) and its derivative.
/// Throws PoleProximityError within pole_guard·max(1, ω_N²) of any ω_q².
template <typename Scalar>
SecularValue<Scalar> secular_eval(const SecularProblem<Scalar>& p, Scalar x,
                                  Scalar pole_guard = Scalar(kPoleGuard)) {
  using std::abs;
  const Scalar top = p.omega(p.size() - 1) * p.omega(p.size() - 1);
  const Scalar eps = pole_guard * std::max(Scalar(1), top);
  SecularValue<Scalar> v{x - p.omega_0 * p.omega_0, Scalar(1)};
  for (Eigen::Index q = 0; q < p.size(); ++q) {
    const Scalar d = x - p.omega(q) * p.omega(q);
    if (abs(d) < eps)
      throw PoleProximityError("x = " + std::to_string(static_cast<double>(x)) +
                               " within pole guard of omega_" + std::to_string(q + 1) + "^2");
    const Scalar w = 4 * p.omega_0 * p.gamma(q) * p.gamma(q) * p.omega(q);
    v.S -= w / d;
    v.dS += w / (d * d);
  }
  return v;
}

/// N+1 Bogoliubov frequencies, ascending. Row α of `detuning` holds Ω_α² - ω_q² computed
/// without cancellation against the nearest pole.
template <typename Scalar = double>
struct BogoliubovSpectrum {
  Vector<Scalar> Omega;
  Vector<Scalar> x;           ///< Ω²
  Matrix<Scalar> brackets;    ///< (N+1)×2 search intervals in x
  Vector<Scalar> residuals;   ///< |S(x)| / (ω_0² + x + Σ|w_q/(x-ω_q²)|)
  Matrix<Scalar> detuning;    ///< (N+1)×N
  std::vector<int> decoupled_mode;  ///< string mode q when row α is a bare decoupled mode, else -1
  Scalar g{0};

  Eigen::Index size() const { return Omega.size(); }
  bool decoupled(Eigen::Index alpha) const { return decoupled_mode[alpha] >= 0; }
};

inline constexpr double kSpectrumTolerance = 1e-12;

namespace detail {

// Secular function of the coupled subsystem written in t = x - anchor.
template <typename Scalar>
struct LocalSecular {
  Scalar omega_0_sq;
  std::vector<Scalar> poles;
  std::vector<Scalar> weights;
  Scalar anchor;
  int anchor_pole;  // index into poles, or -1 when anchoring on a non-pole

  Scalar detuning(std::size_t q, Scalar t) const {
    return static_cast<int>(q) == anchor_pole ? t : (anchor - poles[q]) + t;
  }
  Scalar operator()(Scalar t) const {
    Scalar s = (anchor + t) - omega_0_sq;
    for (std::size_t q = 0; q < poles.size(); ++q) s -= weights[q] / detuning(q, t);
    return s;
  }
  Scalar scale(Scalar t) const {
    using std::abs;
    Scalar s = omega_0_sq + abs(anchor + t);
    for (std::size_t q = 0; q < poles.size(); ++q) s += abs(weights[q] / detuning(q, t));
    return s;
  }
};

}  // namespace detail

/// Roots of S in x = Ω², one per interval (0, ω_1²), (ω_q², ω_{q+1}²), (ω_N², ∞).
/// Modes with γ_q = 0 do not couple and keep Ω = ω_q. Throws InstabilityError when g ≥ 1.
template <typename Scalar>
BogoliubovSpectrum<Scalar> solve_spectrum(const SecularProblem<Scalar>& p,
                                          Scalar rel_tol = Scalar(kSpectrumTolerance)) {
  using std::abs;
  using std::sqrt;
  validate(p);
  const Scalar g = coupling_strength(p);
  if (!(g < 1)) throw InstabilityError(static_cast<double>(g));

  const Eigen::Index n = p.size();
  detail::LocalSecular<Scalar> f;
  f.omega_0_sq = p.omega_0 * p.omega_0;
  std::vector<Eigen::Index> coupled;
  for (Eigen::Index q = 0; q < n; ++q) {
    if (p.gamma(q) == Scalar(0)) continue;
    coupled.push_back(q);
    f.poles.push_back(p.omega(q) * p.omega(q));
    f.weights.push_back(4 * p.omega_0 * p.gamma(q) * p.gamma(q) * p.omega(q));
  }
  const std::size_t m = coupled.size();

  struct Row {
    Scalar x;
    Scalar lo, hi;
    Scalar residual;
    Vector<Scalar> detuning;
    int mode;
  };
  std::vector<Row> rows;
  rows.reserve(n + 1);

  auto finish = [&](Scalar anchor, int anchor_pole, Scalar t, Scalar lo, Scalar hi) {
    f.anchor = anchor;
    f.anchor_pole = anchor_pole;
    Row r{anchor + t, lo, hi, abs(f(t)) / f.scale(t), Vector<Scalar>(n), -1};
    for (Eigen::Index q = 0; q < n; ++q) r.detuning(q) = (anchor - p.omega(q) * p.omega(q)) + t;
    if (anchor_pole >= 0) r.detuning(coupled[anchor_pole]) = t;
    rows.push_back(std::move(r));
  };

  // Solve on (t_a, t_b) in the frame anchored at `anchor`; the endpoint on the anchor pole
  // is pulled in until S has the required sign there.
  auto solve_local = [&](int bracket, Scalar t_a, Scalar t_b, bool a_on_pole, bool b_on_pole) {
    Scalar fa, fb;
    if (a_on_pole) {
      Scalar delta = Scalar(1e-3) * (t_b - t_a);
      t_a += delta;
      while ((fa = f(t_a)) >= 0) {
        delta *= Scalar(1e-3);
        if (!(delta > 0)) throw RootNotFoundError(bracket, "root collapsed onto pole");
        t_a = delta;
      }
    } else {
      fa = f(t_a);
    }
    if (b_on_pole) {
      Scalar delta = Scalar(1e-3) * (t_b - t_a);
      t_b -= delta;
      while ((fb = f(t_b)) <= 0) {
        delta *= Scalar(1e-3);
        if (!(delta > 0)) throw RootNotFoundError(bracket, "root collapsed onto pole");
        t_b = -delta;
      }
    } else {
      fb = f(t_b);
    }
    return brent_root(f, t_a, t_b, fa, fb, rel_tol, std::numeric_limits<Scalar>::min(), bracket);
  };

  if (m == 0) {
    f.anchor = 0;
    f.anchor_pole = -1;
    finish(Scalar(0), -1, f.omega_0_sq, Scalar(0), f.omega_0_sq);
  }
  for (std::size_t k = 0; k < m + (m > 0 ? 1 : 0); ++k) {
    const int bracket = static_cast<int>(k);
    if (k == m) {
      // Top interval: double t until S > 0.
      f.anchor = f.poles[m - 1];
      f.anchor_pole = static_cast<int>(m - 1);
      Scalar t_hi = std::max(f.poles[m - 1], f.omega_0_sq);
      for (int it = 0; f(t_hi) <= 0; ++it) {
        if (it > 2000) throw RootNotFoundError(bracket, "top interval did not close");
        t_hi *= 2;
      }
      const Scalar t = solve_local(bracket, Scalar(0), t_hi, true, false);
      finish(f.anchor, f.anchor_pole, t, f.poles[m - 1], f.anchor + t_hi);
      continue;
    }
    const Scalar lo = k == 0 ? Scalar(0) : f.poles[k - 1];
    const Scalar hi = f.poles[k];
    const Scalar mid = lo + (hi - lo) / 2;
    // Anchor on the end the root is closer to; the midpoint sign is taken in that frame.
    f.anchor = lo;
    f.anchor_pole = k == 0 ? -1 : static_cast<int>(k - 1);
    if (f(mid - lo) > 0) {
      const Scalar t = solve_local(bracket, Scalar(0), mid - lo, k != 0, false);
      finish(f.anchor, f.anchor_pole, t, lo, hi);
      continue;
    }
    f.anchor = hi;
    f.anchor_pole = static_cast<int>(k);
    if (f(mid - hi) >= 0) {
      finish(f.anchor, f.anchor_pole, mid - hi, lo, hi);
      continue;
    }
    const Scalar t = solve_local(bracket, mid - hi, Scalar(0), false, true);
    finish(f.anchor, f.anchor_pole, t, lo, hi);
  }

  for (Eigen::Index q = 0; q < n; ++q) {
    if (p.gamma(q) != Scalar(0)) continue;
    const Scalar xq = p.omega(q) * p.omega(q);
    Row r{xq, xq, xq, Scalar(0), Vector<Scalar>(n), static_cast<int>(q)};
    for (Eigen::Index j = 0; j < n; ++j) r.detuning(j) = xq - p.omega(j) * p.omega(j);
    r.detuning(q) = 0;
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.x < b.x; });

  BogoliubovSpectrum<Scalar> s;
  s.g = g;
  s.Omega.resize(n + 1);
  s.x.resize(n + 1);
  s.brackets.resize(n + 1, 2);
  s.residuals.resize(n + 1);
  s.detuning.resize(n + 1, n);
  s.decoupled_mode.resize(n + 1);
  for (Eigen::Index a = 0; a <= n; ++a) {
    const Row& r = rows[a];
    s.x(a) = r.x;
    s.Omega(a) = sqrt(r.x);
    s.brackets(a, 0) = r.lo;
    s.brackets(a, 1) = r.hi;
    s.residuals(a) = r.residual;
    s.detuning.row(a) = r.detuning.transpose();
    s.decoupled_mode[a] = r.mode;
  }
  return s;
}

/// 0 < Ω_0² < ω_1² < Ω_1² < ... < ω_N² < Ω_N², with equality allowed only at decoupled modes.
template <typename Scalar>
bool interlacing_holds(const SecularProblem<Scalar>& p, const BogoliubovSpectrum<Scalar>& s) {
  const Eigen::Index n = p.size();
  if (s.size() != n + 1) return false;
  if (!(s.x(0) > 0)) return false;
  for (Eigen::Index a = 1; a <= n; ++a)
    if (!(s.x(a) >= s.x(a - 1))) return false;
  for (Eigen::Index q = 0; q < n; ++q) {
    const Scalar pole = p.omega(q) * p.omega(q);
    if (p.gamma(q) == Scalar(0)) {
      if (!(s.x(q) <= pole && pole <= s.x(q + 1))) return false;
    } else if (!(s.x(q) < pole && pole < s.x(q + 1))) {
      return false;
    }
  }
  return true;
}

/// Reference problem on which Yurke's transcendental equation is exact in the continuum:
/// a string clamped at both ends (ω_n = nπc/ℓ) with flat couplings γ_n² = cνω_n/(ω_0ℓ), at
/// the special coupling ω_c = √((4/π)νω_d).
template <typename Scalar = double>
struct YurkeReference {
  SecularProblem<Scalar> problem;
  DerivedScales<Scalar> scales;
};

template <typename Scalar>
YurkeReference<Scalar> yurke_reference(Scalar omega_b, Scalar nu, Scalar ell, int n_modes,
                                       Scalar c = Scalar(1)) {
  using std::sqrt;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(omega_b > 0)) throw ValidationError("omega_b", "must be strictly positive");
  if (!(nu >= 0)) throw ValidationError("nu", "must be non-negative");
  if (!(ell > 0)) throw ValidationError("ell", "must be strictly positive");
  if (n_modes < 1) throw ValidationError("n_modes", "must be >= 1");
  YurkeReference<Scalar> r;
  DerivedScales<Scalar>& s = r.scales;
  s.c = c;
  s.nu = nu;
  s.ell = ell;
  s.n_modes = n_modes;
  s.d = ell / Scalar(n_modes);
  s.omega_d = Scalar(n_modes) * pi * c / ell;
  s.dos = ell / (pi * c);
  s.omega_b = omega_b;
  s.omega_c = sqrt(4 / pi * nu * s.omega_d);
  s.omega_0 = sqrt(omega_b * omega_b + s.omega_c * s.omega_c);
  s.k_s = std::numeric_limits<Scalar>::infinity();
  s.omega_s = std::numeric_limits<Scalar>::infinity();
  r.problem.omega_0 = s.omega_0;
  r.problem.omega.resize(n_modes);
  r.problem.gamma.resize(n_modes);
  for (int i = 0; i < n_modes; ++i) {
    const Scalar w = Scalar(i + 1) * pi * c / ell;
    r.problem.omega(i) = w;
    r.problem.gamma(i) = sqrt(c * nu * w / (s.omega_0 * ell));
  }
  return r;
}

/// |Ω_α² - ω_b² - 2νΩ_α cot(Ω_α ℓ/c)| for each α.
template <typename Scalar>
Vector<Scalar> yurke_check(const DerivedScales<Scalar>& s, const BogoliubovSpectrum<Scalar>& spec) {
  using std::abs;
  using std::tan;
  Vector<Scalar> r(spec.size());
  for (Eigen::Index a = 0; a < spec.size(); ++a) {
    const Scalar w = spec.Omega(a);
    r(a) = abs(w * w - s.omega_b * s.omega_b - 2 * s.nu * w / tan(w * s.ell / s.c));
  }
  return r;
}

}  // namespace lambq
