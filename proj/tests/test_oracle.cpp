#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace lambq;

namespace {

SecularProblem<double> small_problem() {
  SecularProblem<double> p;
  p.omega_0 = 1;
  p.omega = (VectorXd(2) << 0.8, 1.3).finished();
  p.gamma = (VectorXd(2) << 0.1, 0.12).finished();
  return p;
}

}  // namespace

TEST_CASE("quadrature form is symmetric with the bare frequencies on the diagonal") {
  std::mt19937_64 rng(41);
  const auto p = random_secular_problem(rng, 5);
  const auto q = quadrature_form(p);
  CHECK(max_abs(q.K - q.K.transpose()) == 0.0);
  CHECK(q.K(0, 0) == 1.0);
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(q.K(i + 1, i + 1) == doctest::Approx(p.omega(i) * p.omega(i)));
    CHECK(q.K(0, i + 1) == doctest::Approx(-2 * p.gamma(i) * std::sqrt(p.omega(i))));
  }
  // det K = ω_0² Πω_q² (1 - g)
  const double g = coupling_strength(p);
  double det = 1;
  for (Eigen::Index i = 0; i < 5; ++i) det *= p.omega(i) * p.omega(i);
  CHECK(q.K.determinant() == doctest::Approx(det * (1 - g)).epsilon(1e-10));
}

TEST_CASE("coefficient system residual is small and sensitive to corruption") {
  std::mt19937_64 rng(42);
  const auto r = testing::run(random_secular_problem(rng, 12));
  CHECK(verify_coefficient_system(r.problem, r.spectrum, r.coeffs).max() < 1e-12);
  auto bad = r.coeffs;
  bad.M(4, 7) *= 1 + 1e-6;
  const double scale = std::abs(r.coeffs.M(4, 7)) * 1e-6;
  CHECK(verify_coefficient_system(r.problem, r.spectrum, bad).max() > 0.1 * scale);
  bad = r.coeffs;
  bad.N_mat(2, 0) += 1e-7;
  CHECK(verify_coefficient_system(r.problem, r.spectrum, bad).max() > 1e-8);
}

TEST_CASE("Fock truncation indexing") {
  const auto t = fock_truncation(small_problem(), 4);
  CHECK(t.dimension() == 125);
  CHECK(t.occupation(1, 0) == 1);
  CHECK(t.occupation(5, 1) == 1);
  CHECK(t.occupation(25, 2) == 1);
  CHECK(t.total(31) == 3);
  CHECK(max_abs(t.H - t.H.transpose()) == 0.0);
  SecularProblem<double> big;
  big.omega_0 = 1;
  big.omega = VectorXd::LinSpaced(4, 0.5, 2);
  big.gamma = VectorXd::Constant(4, 0.01);
  CHECK_THROWS_AS(fock_truncation(big), ValidationError);
  CHECK_THROWS_AS(fock_truncation(small_problem(), 400), ValidationError);
}

TEST_CASE("Fock diagonalization reproduces the Bogoliubov ground state") {
  const auto p = small_problem();
  const auto r = testing::run(p);
  const auto t = fock_truncation(p, 12);
  const auto sol = fock_ground_state(t);
  CHECK(sol.warnings.empty());
  CHECK(std::abs(sol.ground_energy - symplectic_ground_energy(p, r.spectrum)) < 1e-10);
  CHECK(max_abs(fock_occupations(t, sol.ground) - occupation_numbers(r.coeffs)) < 1e-10);
  CHECK(std::abs(fock_bead_variance(t, sol.ground, 1.0, 1.0) -
                 bead_variance(r.coeffs, r.spectrum, 1.0, 1.0).variance) < 1e-10);
  CHECK(odd_parity_amplitude(t, sol.ground) < 1e-12);
  const auto em = emission_spectrum(r.coeffs, r.spectrum);
  CHECK(max_abs(fock_emission(t, sol, r.spectrum.Omega, 1e-6) - em.p1) < 1e-10);
  // Excitation energies include every Ω_α.
  for (Eigen::Index a = 0; a < r.spectrum.size(); ++a) {
    const double target = sol.ground_energy + r.spectrum.Omega(a);
    CHECK(((sol.energies.array() - target).abs().minCoeff()) < 1e-9);
  }
}

TEST_CASE("Fock parity blocks match the full diagonalization") {
  const auto t = fock_truncation(small_problem(), 6);
  const auto blocks = fock_ground_state(t, true);
  const auto full = fock_ground_state(t, false);
  CHECK(blocks.ground_energy == doctest::Approx(full.ground_energy).epsilon(1e-13));
  CHECK(max_abs(blocks.energies - full.energies) < 1e-12);
}

TEST_CASE("Fock results converge with the cutoff") {
  const auto p = small_problem();
  const auto coarse = fock_ground_state(fock_truncation(p, 4));
  const auto fine = fock_ground_state(fock_truncation(p, 10));
  const double exact = symplectic_ground_energy(p, solve_spectrum(p));
  CHECK(std::abs(fine.ground_energy - exact) < std::abs(coarse.ground_energy - exact));
}

TEST_CASE("a tight cutoff is flagged") {
  auto p = small_problem();
  p.gamma *= 2.5;
  const auto sol = fock_ground_state(fock_truncation(p, 2));
  CHECK(!sol.warnings.empty());
  CHECK(sol.top_occupancy > kFockCutoffWarning);
}
