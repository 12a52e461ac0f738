#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace lambq;

namespace {

// Normal-mode oracle: eigenvectors v of the quadrature form K give
// M_αj = v_j(√(Ω/ω_j) + √(ω_j/Ω))/2 and N_αj = v_j(√(Ω/ω_j) - √(ω_j/Ω))/2, sign fixed by M_α0 > 0.
void eigenvector_coefficients(const SecularProblem<double>& p, MatrixXd& M, MatrixXd& N) {
  const Eigen::Index dim = p.size() + 1;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(quadrature_form(p).K);
  VectorXd w(dim);
  w << p.omega_0, p.omega;
  M.resize(dim, dim);
  N.resize(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    VectorXd v = eig.eigenvectors().col(a);
    if (v(0) < 0) v = -v;
    const double W = std::sqrt(eig.eigenvalues()(a));
    for (Eigen::Index j = 0; j < dim; ++j) {
      M(a, j) = v(j) * (std::sqrt(W / w(j)) + std::sqrt(w(j) / W)) / 2;
      N(a, j) = v(j) * (std::sqrt(W / w(j)) - std::sqrt(w(j) / W)) / 2;
    }
  }
}

}  // namespace

TEST_CASE("coefficients agree with the normal-mode eigenvector oracle") {
  std::mt19937_64 rng(21);
  for (int n : {1, 3, 10, 40}) {
    const auto p = random_secular_problem(rng, n, 0.1, 0.9);
    const auto r = testing::run(p);
    MatrixXd M, N;
    eigenvector_coefficients(p, M, N);
    CHECK(max_abs(r.coeffs.M - M) < 1e-9);
    CHECK(max_abs(r.coeffs.N_mat - N) < 1e-9);
  }
}

TEST_CASE("symplectic identities hold on random problems") {
  std::mt19937_64 rng(22);
  for (int n : {1, 2, 5, 15, 50, 200}) {
    const auto r = testing::run(random_secular_problem(rng, n));
    const auto rep = check_symplectic(r.coeffs);
    CHECK(rep.max() < 1e-10);
    CHECK(rep.det_T == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.coeffs.U.isApprox(r.coeffs.M.transpose()));
    CHECK(r.coeffs.V.isApprox(-r.coeffs.N_mat.transpose()));
  }
}

TEST_CASE("symplectic identities hold for the string model") {
  for (int n : {5, 15, 50, 200}) {
    DimensionlessParams<double> d;
    d.n_modes = n;
    d.length = 2.0 * n;
    const auto r = testing::run(d);
    CHECK(check_symplectic(r.coeffs).max() < 1e-10);
    CHECK(r.coeffs.warnings.empty());
  }
}

TEST_CASE("decoupled problem gives the identity transformation") {
  const auto r = testing::run(testing::decoupled_problem(6));
  CHECK(max_abs(r.coeffs.M - MatrixXd::Identity(7, 7)) < 1e-15);
  CHECK(max_abs(r.coeffs.N_mat) < 1e-15);
  CHECK(std::abs(r.coeffs.det_M) == doctest::Approx(1.0));
  CHECK(std::isinf(r.coeffs.norm_factors(1)));
  CHECK(std::isfinite(r.coeffs.norm_factors(0)));
}

TEST_CASE("decoupled problem with the bead in the middle is a permutation") {
  const auto r = testing::run(testing::decoupled_problem(4, 0.55));
  const MatrixXd& M = r.coeffs.M;
  CHECK(max_abs(M * M.transpose() - MatrixXd::Identity(5, 5)) < 1e-15);
  CHECK(M(2, 0) == doctest::Approx(1.0));
  CHECK(M(0, 1) == 1.0);
  CHECK(max_abs(r.coeffs.N_mat) < 1e-15);
}

TEST_CASE("weak coupling matches second-order perturbation theory") {
  std::mt19937_64 rng(23);
  auto p = random_secular_problem(rng, 6, 1e-4, 1e-4);
  const auto r = testing::run(p);
  // Leading order: ⟨n_0⟩ = Σ γ_q²/(ω_0 + ω_q)², ⟨n_q⟩ = γ_q²/(ω_0 + ω_q)².
  double n0 = 0;
  for (Eigen::Index q = 0; q < p.size(); ++q) n0 += std::pow(p.gamma(q) / (p.omega_0 + p.omega(q)), 2);
  const VectorXd occ = occupation_numbers(r.coeffs);
  CHECK(testing::rel_diff(occ(0), n0) < 1e-3);
  for (Eigen::Index q = 0; q < p.size(); ++q) {
    const double nq = std::pow(p.gamma(q) / (p.omega_0 + p.omega(q)), 2);
    CHECK(testing::rel_diff(occ(q + 1), nq) < 1e-3);
  }
}

TEST_CASE("squeeze matrix is symmetric and contractive") {
  std::mt19937_64 rng(24);
  for (int n : {2, 8, 30}) {
    const auto r = testing::run(random_secular_problem(rng, n, 0.2, 0.9));
    const auto sq = squeeze_matrix(r.coeffs);
    CHECK(sq.symmetry < 1e-10);
    CHECK(sq.spectral_radius < 1);
    CHECK(sq.schur < 1e-10);
    CHECK(sq.det_identity < 1e-8);
  }
}

TEST_CASE("singular M is rejected") {
  CoefficientSet<double> c;
  c.M = MatrixXd::Zero(3, 3);
  c.N_mat = MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(squeeze_matrix(c), SingularMatrixError);
}

TEST_CASE("a frequency error is caught by the identities") {
  std::mt19937_64 rng(25);
  const auto p = random_secular_problem(rng, 10, 0.4, 0.6);
  const auto s = solve_spectrum(p);
  const auto bad = build_coefficients(p, perturb_frequency(s, 3, 1e-4));
  CHECK(check_symplectic(bad).max() > 1e-7);
  CHECK(verify_coefficient_system(p, s, bad).max() > 1e-7);
}

TEST_CASE("near-resonant weak coupling raises a conditioning warning") {
  SecularProblem<double> p;
  p.omega_0 = 1;
  p.omega = (VectorXd(2) << 1.0, 2.0).finished();
  p.gamma = (VectorXd(2) << 1e-12, 0.1).finished();
  const auto r = testing::run(p);
  CHECK(!r.coeffs.warnings.empty());
}

TEST_CASE("ground-state normalization") {
  const auto r = testing::run(DimensionlessParams<double>{});
  CHECK(r.coeffs.ground_norm == doctest::Approx(1 / std::sqrt(std::abs(r.coeffs.det_M))));
  CHECK(r.coeffs.ground_norm <= 1);
}
