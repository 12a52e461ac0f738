#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace lambq;
using testing::rel_diff;

namespace {

// Secular function written out directly, no pole guard.
double secular_direct(const SecularProblem<double>& p, double x) {
  double s = x - p.omega_0 * p.omega_0;
  for (Eigen::Index q = 0; q < p.size(); ++q)
    s -= 4 * p.omega_0 * p.omega(q) * p.gamma(q) * p.gamma(q) / (x - p.omega(q) * p.omega(q));
  return s;
}

// Root-by-bisection oracle between consecutive poles.
VectorXd bisection_spectrum(const SecularProblem<double>& p) {
  const Eigen::Index n = p.size();
  VectorXd x(n + 1);
  std::vector<double> edges{0.0};
  for (Eigen::Index q = 0; q < n; ++q) edges.push_back(p.omega(q) * p.omega(q));
  double top = std::max(p.omega_0 * p.omega_0, edges.back()) + 1;
  while (secular_direct(p, top) < 0) top *= 2;
  edges.push_back(top);
  for (Eigen::Index a = 0; a <= n; ++a) {
    const double lo = edges[a], hi = edges[a + 1], w = hi - lo;
    const double l = a == 0 ? 0.0 : lo + 1e-13 * w;
    x(a) = testing::bisect([&](double v) { return secular_direct(p, v); }, l, hi - 1e-13 * w);
  }
  return x.cwiseSqrt();
}

}  // namespace

TEST_CASE("spectrum agrees with bisection and with the quadrature eigenvalues") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 5, 15, 50}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto p = random_secular_problem(rng, n, 0.05, 0.9);
      const auto s = solve_spectrum(p);
      CHECK(testing::max_rel(s.Omega, bisection_spectrum(p)) < 1e-10);
      CHECK(testing::max_rel(s.Omega, quadrature_spectrum(p)) < 1e-10);
      CHECK(interlacing_holds(p, s));
      CHECK(s.residuals.maxCoeff() < kSpectrumTolerance);
    }
  }
}

TEST_CASE("secular derivative matches a finite difference") {
  std::mt19937_64 rng(8);
  const auto p = random_secular_problem(rng, 6);
  for (double x : {0.01, 0.3, 1.7, 4.0, 12.0}) {
    bool near_pole = false;
    for (Eigen::Index q = 0; q < p.size(); ++q)
      near_pole |= std::abs(x - p.omega(q) * p.omega(q)) < 1e-3;
    if (near_pole) continue;
    const double h = 1e-6 * std::max(1.0, x);
    const double fd = (secular_direct(p, x + h) - secular_direct(p, x - h)) / (2 * h);
    const auto v = secular_eval(p, x);
    CHECK(rel_diff(v.S, secular_direct(p, x)) < 1e-12);
    CHECK(rel_diff(v.dS, fd) < 1e-6);
    CHECK(v.dS >= 1);
  }
}

TEST_CASE("secular value at zero frequency") {
  std::mt19937_64 rng(9);
  const auto p = random_secular_problem(rng, 9);
  const double g = coupling_strength(p);
  CHECK(secular_eval(p, 0.0).S == doctest::Approx(-(1 - g)).epsilon(1e-13));
}

TEST_CASE("evaluation at a pole is refused") {
  SecularProblem<double> p;
  p.omega_0 = 1;
  p.omega = (VectorXd(2) << 0.5, 2.0).finished();
  p.gamma = (VectorXd(2) << 0.1, 0.1).finished();
  CHECK_THROWS_AS(secular_eval(p, 0.25), PoleProximityError);
  CHECK_NOTHROW(secular_eval(p, 0.26));
}

TEST_CASE("decoupled problem returns the bare frequencies") {
  auto p = testing::decoupled_problem(5, 0.55);
  const auto s = solve_spectrum(p);
  VectorXd bare(6);
  bare << 0.55, 0.95, 1.0, 1.35, 1.75, 2.15;
  CHECK(max_abs(s.Omega - bare) < 1e-14);
  int bare_rows = 0;
  for (Eigen::Index a = 0; a < s.size(); ++a) bare_rows += s.decoupled(a);
  CHECK(bare_rows == 5);
  CHECK(!s.decoupled(2));
  CHECK(interlacing_holds(p, s));
}

TEST_CASE("partially decoupled problem") {
  std::mt19937_64 rng(12);
  auto p = random_secular_problem(rng, 8, 0.3, 0.6);
  p.gamma(2) = 0;
  p.gamma(5) = 0;
  const auto s = solve_spectrum(p);
  CHECK(testing::max_rel(s.Omega, quadrature_spectrum(p)) < 1e-10);
  CHECK(interlacing_holds(p, s));
  int bare_rows = 0;
  for (Eigen::Index a = 0; a < s.size(); ++a)
    if (s.decoupled(a)) {
      ++bare_rows;
      CHECK((s.decoupled_mode[a] == 2 || s.decoupled_mode[a] == 5));
      CHECK(s.Omega(a) == p.omega(s.decoupled_mode[a]));
    }
  CHECK(bare_rows == 2);
}

TEST_CASE("coupling strength at or beyond one is an instability") {
  std::mt19937_64 rng(4);
  auto p = random_secular_problem(rng, 5, 0.5, 0.5);
  const auto at_one = testing::at_coupling(p, 1.0);
  CHECK_THROWS_AS(solve_spectrum(at_one), InstabilityError);
  const auto beyond = scale_couplings(p, std::sqrt(1.2 / coupling_strength(p)));
  try {
    solve_spectrum(beyond);
    FAIL("expected InstabilityError");
  } catch (const InstabilityError& e) {
    CHECK(e.g() == doctest::Approx(1.2).epsilon(1e-12));
  }
  CHECK(quadrature_eigenvalues(beyond)(0) < 0);
  CHECK_THROWS_AS(quadrature_spectrum(beyond), InstabilityError);
}

TEST_CASE("lowest frequency closes as g approaches one") {
  std::mt19937_64 rng(14);
  const auto p = random_secular_problem(rng, 6, 0.5, 0.5);
  double prev = 1e300;
  for (double g : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
    const auto s = solve_spectrum(scale_couplings(p, std::sqrt(g / coupling_strength(p))));
    CHECK(s.Omega(0) < prev);
    CHECK(s.Omega(0) > 0);
    prev = s.Omega(0);
  }
  CHECK(prev < 0.05);
}

TEST_CASE("spectrum of the Lamb model is insensitive to coupling signs") {
  const auto r = testing::run(DimensionlessParams<double>{});
  auto flipped = r.problem;
  for (Eigen::Index i = 1; i < flipped.size(); i += 2) flipped.gamma(i) = -flipped.gamma(i);
  CHECK(max_abs(solve_spectrum(flipped).Omega - r.spectrum.Omega) < 1e-13);
}

TEST_CASE("detuning rows agree with the direct difference away from poles") {
  const auto r = testing::run(DimensionlessParams<double>{});
  const auto& s = r.spectrum;
  for (Eigen::Index a = 0; a < s.size(); ++a)
    for (Eigen::Index q = 0; q < r.problem.size(); ++q) {
      const double direct = s.x(a) - r.problem.omega(q) * r.problem.omega(q);
      CHECK(std::abs(s.detuning(a, q) - direct) < 1e-12 * std::max(1.0, s.x(a)));
    }
}

TEST_CASE("discrete spectrum approaches the continuum transcendental equation") {
  // Flat-coupling reference: low modes satisfy the continuum equation better as N grows.
  auto worst = [](int n) {
    const auto ref = yurke_reference(1.0, 0.05, 20.0, n);
    const auto s = solve_spectrum(ref.problem);
    const VectorXd r = yurke_check(ref.scales, s);
    double m = 0;
    for (Eigen::Index a = 0; a < s.size(); ++a)
      if (s.Omega(a) < 2.0) m = std::max(m, r(a));
    return m;
  };
  const double coarse = worst(50), fine = worst(400);
  CHECK(fine < coarse);
  CHECK(fine < 5e-3);

  // Couplings off the special value break the equation.
  const auto ref = yurke_reference(1.0, 0.05, 20.0, 400);
  const auto s = solve_spectrum(scale_couplings(ref.problem, 0.8));
  const VectorXd r = yurke_check(ref.scales, s);
  double off = 0;
  for (Eigen::Index a = 0; a < s.size(); ++a)
    if (s.Omega(a) < 2.0) off = std::max(off, r(a));
  CHECK(off > 100 * fine);
}
