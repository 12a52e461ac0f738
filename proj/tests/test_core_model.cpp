#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"

using namespace lambq;
using testing::rel_diff;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalParams<double> raw(double kappa, double kappa_c, double tau, double ell, int n) {
  PhysicalParams<double> p;
  p.kappa = kappa;
  p.kappa_c = kappa_c;
  p.tau = tau;
  p.sigma = 1;
  p.ell = ell;
  p.n_modes = n;
  return p;
}

// Roots of tan(kℓ) + (τ/κ_c)k by scanning a fine grid for sign changes that are not poles.
std::vector<double> scan_roots(const PhysicalParams<double>& p, int n_roots) {
  auto f = [&](double k) { return std::tan(k * p.ell) + p.tau / p.kappa_c * k; };
  std::vector<double> roots;
  const double k_max = (n_roots + 0.25) * pi / p.ell;
  const int samples = 200000;
  double prev_k = 1e-9, prev = f(prev_k);
  for (int i = 1; i <= samples && static_cast<int>(roots.size()) < n_roots; ++i) {
    const double k = k_max * i / samples;
    const double v = f(k);
    if (prev < 0 && v > 0) roots.push_back(testing::bisect(f, prev_k, k));
    prev_k = k;
    prev = v;
  }
  return roots;
}

}  // namespace

TEST_CASE("derive_scales from raw constants") {
  auto p = raw(3, 1, 1, 2, 4);
  const auto s = derive_scales(p);
  CHECK(s.omega_0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.omega_b == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(s.omega_c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.c == doctest::Approx(1.0));
  CHECK(s.nu == doctest::Approx(0.5));
  CHECK(s.k_s == doctest::Approx(1.0));
  CHECK(s.d == doctest::Approx(0.5));
  CHECK(std::abs(s.omega_0 * s.omega_0 - s.omega_b * s.omega_b - s.omega_c * s.omega_c) < 1e-15);
  CHECK(std::abs(s.omega_d - pi * s.c / s.d) < 1e-14);
  CHECK(s.dos == doctest::Approx(2 / pi));
}

TEST_CASE("validation names the offending field") {
  auto p = raw(3, 1, 1, 2, 4);
  p.kappa = -1;
  try {
    derive_scales(p);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "kappa");
  }
  p = raw(3, 1, 1, 2, 0);
  CHECK_THROWS_AS(derive_scales(p), ValidationError);
  p = raw(3, 1, 1, 2, 4);
  p.sigma = std::nan("");
  CHECK_THROWS_AS(derive_scales(p), ValidationError);
  DimensionlessParams<double> d;
  d.omega_c_ratio = 1.0;
  CHECK_THROWS_AS(to_physical(d), ValidationError);
}

TEST_CASE("dimensionless round trip") {
  DimensionlessParams<double> d;
  d.omega_c_ratio = 0.6;
  d.tension_ratio = 2.5;
  d.n_modes = 7;
  d.length = 13;
  d.omega_0 = 1.7;
  const auto back = to_dimensionless(to_physical(d));
  CHECK(back.omega_c_ratio == doctest::Approx(d.omega_c_ratio).epsilon(1e-14));
  CHECK(back.tension_ratio == doctest::Approx(d.tension_ratio).epsilon(1e-14));
  CHECK(back.length == doctest::Approx(d.length).epsilon(1e-14));
  CHECK(back.omega_0 == doctest::Approx(d.omega_0).epsilon(1e-14));
  CHECK(back.n_modes == 7);
}

TEST_CASE("wavenumbers match a grid-scan oracle") {
  const auto p = raw(1, 1, 1, 1, 3);
  const auto modes = solve_wavenumbers(p);
  const auto oracle = scan_roots(p, 3);
  REQUIRE(oracle.size() == 3);
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(modes.k(n) - oracle[n]) < 1e-12 * oracle[n]);
    CHECK(modes.k(n) > (n + 0.5) * pi);
    CHECK(modes.k(n) < (n + 1) * pi);
  }
  CHECK(wavenumber_residuals(p, modes).maxCoeff() < 1e-12);
  CHECK(modes.omega.isApprox(modes.k * std::sqrt(p.tau / p.sigma)));
}

TEST_CASE("wavenumber limits") {
  // Stiff coupling spring: clamped end, k_n -> nπ/ℓ.
  auto stiff = solve_wavenumbers(raw(1, 1e8, 1, 2, 5));
  for (int n = 0; n < 5; ++n) CHECK(rel_diff(stiff.k(n), (n + 1) * pi / 2) < 1e-7);
  // Soft coupling spring: free slope, k_n -> (n-½)π/ℓ.
  auto soft = solve_wavenumbers(raw(1, 1e-8, 1, 2, 5));
  for (int n = 0; n < 5; ++n) CHECK(rel_diff(soft.k(n), (n + 0.5) * pi / 2) < 1e-7);
}

TEST_CASE("each bracket holds exactly one sign change") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial * 49 / 19;
    const auto p = raw(1, std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng) / 2), n);
    const auto modes = solve_wavenumbers(p);
    for (int i = 0; i < n; ++i) {
      const double lo = (i + 0.5) * pi / p.ell, hi = (i + 1) * pi / p.ell;
      int changes = 0;
      double prev = 0;
      for (int j = 1; j < 2000; ++j) {
        const double k = lo + (hi - lo) * j / 2000.0;
        const double v = std::tan(k * p.ell) + p.tau / p.kappa_c * k;
        if (j > 1 && (v > 0) != (prev > 0)) ++changes;
        prev = v;
      }
      CHECK(changes <= 1);
      CHECK(modes.k(i) > lo);
      CHECK(modes.k(i) < hi);
      if (i > 0) CHECK(modes.k(i) > modes.k(i - 1));
    }
  }
}

TEST_CASE("couplings agree with a quadrature normalization of the mode shapes") {
  const auto p = raw(0.7, 0.9, 0.4, 3.0, 8);
  const auto model = build_model(p);
  for (int n = 0; n < 8; ++n) {
    const double k = model.modes.k(n);
    // ∫_0^ℓ sin²(k(x-ℓ)) dx, then A_n = 1/√I and w_n(0) = -A_n sin(kℓ).
    const double I = testing::simpson([&](double x) { return std::pow(std::sin(k * (x - p.ell)), 2); }, 0, p.ell,
                                      20000);
    const double w0 = -std::sin(k * p.ell) / std::sqrt(I);
    const double g = std::abs(p.kappa_c * w0) / (2 * std::sqrt(p.m * p.sigma * model.scales.omega_0 *
                                                                model.modes.omega(n)));
    CHECK(rel_diff(model.modes.gamma(n), g) < 1e-10);
    CHECK(rel_diff(model.modes.a_norm(n), 1 / std::sqrt(I)) < 1e-10);
  }
  const VectorXd fp = first_principles_gammas(model.params, model.scales, model.modes);
  CHECK(testing::max_rel(fp.cwiseAbs(), model.modes.gamma) < 1e-12);
}

TEST_CASE("couplings are positive and fall off above k_s") {
  DimensionlessParams<double> d;
  d.n_modes = 400;
  d.length = 20;
  d.tension_ratio = 5;  // k_s = 2, well inside the band
  const auto m = build_model(d);
  CHECK(m.modes.gamma.minCoeff() > 0);
  int checked = 0;
  for (int n = 1; n < 400; ++n)
    if (m.modes.k(n - 1) > 2 * m.scales.k_s) {
      CHECK(m.modes.gamma(n) < m.modes.gamma(n - 1));
      ++checked;
    }
  CHECK(checked > 300);
  // Far above k_s the couplings fall as k^(-1/2).
  CHECK(rel_diff(m.modes.gamma(399) / m.modes.gamma(199), std::sqrt(m.modes.k(199) / m.modes.k(399))) < 0.01);
}

TEST_CASE("weak coupling spring gives vanishing couplings") {
  const auto m = build_model(raw(1, 1e-12, 1, 1, 5));
  CHECK(m.modes.gamma.maxCoeff() < 1e-10);
  CHECK(m.g() < 1e-11);
  CHECK(coupling_strength(1.0, m.modes.omega, VectorXd::Zero(5).eval()) == 0.0);
}

TEST_CASE("thermodynamic-limit coupling strength") {
  CHECK(g_infinity(0.8, 0.0) == 0.0);
  CHECK(g_infinity(0.8, std::numeric_limits<double>::infinity()) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(std::abs(g_infinity(0.8, 1e15) - 0.64) < 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1), lt(-6, 6);
  for (int i = 0; i < 200; ++i) CHECK(g_infinity(u(rng), std::pow(10.0, lt(rng))) < 1);
}

TEST_CASE("discrete g approaches g_inf as N grows at fixed Debye frequency") {
  double prev = 1;
  for (int n : {25, 50, 100, 200, 400}) {
    DimensionlessParams<double> d;
    d.omega_c_ratio = 0.8;
    d.tension_ratio = 0.5;
    d.n_modes = n;
    d.length = 0.5 * n;  // d = 0.5 c/ω_0, ω_d fixed
    const auto m = build_model(d);
    const auto cs = coupling_strength(m.params, m.scales, m.modes);
    const double gap = std::abs(cs.g - cs.g_infinity);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("g is invariant under coupling sign flips") {
  const auto m = build_model(DimensionlessParams<double>{});
  VectorXd flipped = m.modes.gamma;
  for (int i = 0; i < flipped.size(); i += 3) flipped(i) = -flipped(i);
  CHECK(coupling_strength(m.scales.omega_0, m.modes.omega, flipped) ==
        doctest::Approx(m.g()).epsilon(1e-15));
}

TEST_CASE("tension ratio solved for a target g on both branches") {
  for (auto branch : {TensionBranch::lower, TensionBranch::upper}) {
    const double t = solve_tension_for_g(0.9, 15, 0.6, branch);
    DimensionlessParams<double> d;
    d.omega_c_ratio = 0.9;
    d.tension_ratio = t;
    d.n_modes = 15;
    d.length = 7;  // g does not depend on ℓ
    CHECK(build_model(d).g() == doctest::Approx(0.6).epsilon(1e-10));
  }
  CHECK(solve_tension_for_g(0.9, 15, 0.6, TensionBranch::lower) <
        solve_tension_for_g(0.9, 15, 0.6, TensionBranch::upper));
  CHECK_THROWS_AS(solve_tension_for_g(0.9, 15, 0.85, TensionBranch::lower), ValidationError);
}
