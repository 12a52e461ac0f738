#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "lambq/errors.hpp"
#include "lambq/spectrum.hpp"
#include "lambq/types.hpp"

namespace lambq {

/// b_α = Σ_β (M_αβ a_β + N_αβ a_β†); inverse a_α = Σ_β (U_αβ b_β + V_αβ b_β†).
template <typename Scalar = double>
struct CoefficientSet {
  Matrix<Scalar> M;
  Matrix<Scalar> N_mat;
  Matrix<Scalar> U;
  Matrix<Scalar> V;
  Vector<Scalar> norm_factors;  ///< D_α, +inf on decoupled rows
  Scalar det_M{1};              ///< signed; the sign depends on the row phase convention
  Scalar ground_norm{1};        ///< 1/√|det M|
  std::vector<std::string> warnings;

  Eigen::Index size() const { return M.rows(); }
};

inline constexpr double kConditioningThreshold = 1e-8;

/// Coefficients from the closed forms with common factor f_α = 1/(√(4ω_0Ω_α) D_α):
///   M_α0 = (Ω_α+ω_0) f_α            N_α0 = (Ω_α-ω_0) f_α
///   M_αk = -2ω_0γ_k/(Ω_α-ω_k) f_α    N_αk = -2ω_0γ_k/(Ω_α+ω_k) f_α
template <typename Scalar>
CoefficientSet<Scalar> build_coefficients(const SecularProblem<Scalar>& p,
                                          const BogoliubovSpectrum<Scalar>& s) {
  using std::abs;
  using std::sqrt;
  const Eigen::Index n = p.size();
  const Eigen::Index dim = n + 1;
  if (s.size() != dim) throw ValidationError("spectrum", "size does not match problem");
  const Scalar w0 = p.omega_0;

  CoefficientSet<Scalar> c;
  c.M = Matrix<Scalar>::Zero(dim, dim);
  c.N_mat = Matrix<Scalar>::Zero(dim, dim);
  c.norm_factors.resize(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (s.decoupled(a)) {
      c.M(a, s.decoupled_mode[a] + 1) = 1;
      c.norm_factors(a) = std::numeric_limits<Scalar>::infinity();
      continue;
    }
    const Scalar W = s.Omega(a);
    Scalar d2 = 1;
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p.gamma(q) == Scalar(0)) continue;
      const Scalar d = s.detuning(a, q);
      d2 += 4 * w0 * p.gamma(q) * p.gamma(q) * p.omega(q) / (d * d);
      if (abs(d / (W + p.omega(q))) < Scalar(kConditioningThreshold) * w0)
        c.warnings.push_back("ill-conditioned: |Omega_" + std::to_string(a) + " - omega_" +
                             std::to_string(q + 1) + "| < 1e-8 omega_0");
    }
    const Scalar D = sqrt(d2);
    const Scalar f = 1 / (sqrt(4 * w0 * W) * D);
    c.norm_factors(a) = D;
    c.M(a, 0) = (W + w0) * f;
    c.N_mat(a, 0) = (s.x(a) - w0 * w0) / (W + w0) * f;
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p.gamma(q) == Scalar(0)) continue;
      const Scalar wq = p.omega(q);
      c.M(a, q + 1) = -2 * w0 * p.gamma(q) * (W + wq) / s.detuning(a, q) * f;
      c.N_mat(a, q + 1) = -2 * w0 * p.gamma(q) / (W + wq) * f;
    }
  }
  c.U = c.M.transpose();
  c.V = -c.N_mat.transpose();
  c.det_M = c.M.partialPivLu().determinant();
  c.ground_norm = 1 / sqrt(abs(c.det_M));
  return c;
}

/// Max-norm residuals of the symplectic identities.
template <typename Scalar = double>
struct SymplecticReport {
  Scalar tjt{0};       ///< T J Tᵀ - J
  Scalar mm_nn{0};     ///< M Mᵀ - N Nᵀ - I
  Scalar uu_vv{0};     ///< U Uᵀ - V Vᵀ - I
  Scalar sym_nm{0};    ///< N Mᵀ - (N Mᵀ)ᵀ
  Scalar sym_uv{0};    ///< U Vᵀ - (U Vᵀ)ᵀ
  Scalar det_t{0};     ///< |det T - 1|
  Scalar row_norm{0};  ///< max_β |Σ_γ (M_βγ² - N_βγ²) - 1|
  Scalar det_T{1};

  Scalar max() const {
    return std::max({tjt, mm_nn, uu_vv, sym_nm, sym_uv, det_t, row_norm});
  }
};

template <typename Scalar>
SymplecticReport<Scalar> check_symplectic(const CoefficientSet<Scalar>& c) {
  using std::abs;
  const Eigen::Index dim = c.size();
  const auto I = Matrix<Scalar>::Identity(dim, dim);
  Matrix<Scalar> T(2 * dim, 2 * dim), J = Matrix<Scalar>::Zero(2 * dim, 2 * dim);
  T << c.M, c.N_mat, c.N_mat, c.M;
  J.topRightCorner(dim, dim) = I;
  J.bottomLeftCorner(dim, dim) = -I;

  SymplecticReport<Scalar> r;
  r.tjt = max_abs(T * J * T.transpose() - J);
  const Matrix<Scalar> mm_nn = c.M * c.M.transpose() - c.N_mat * c.N_mat.transpose();
  r.mm_nn = max_abs(mm_nn - I);
  r.uu_vv = max_abs(c.U * c.U.transpose() - c.V * c.V.transpose() - I);
  const Matrix<Scalar> nm = c.N_mat * c.M.transpose();
  r.sym_nm = max_abs(nm - nm.transpose());
  const Matrix<Scalar> uv = c.U * c.V.transpose();
  r.sym_uv = max_abs(uv - uv.transpose());
  r.det_T = T.partialPivLu().determinant();
  r.det_t = abs(r.det_T - 1);
  r.row_norm = max_abs((c.M.array().square() - c.N_mat.array().square()).rowwise().sum() - 1);
  return r;
}

template <typename Scalar = double>
struct SqueezeMatrix {
  Matrix<Scalar> xi;
  Scalar symmetry{0};         ///< ‖ξ - ξᵀ‖_max
  Scalar spectral_radius{0};
  Scalar schur{0};            ///< ‖Mᵀ(M - N ξ) - I‖_max, i.e. (Mᵀ)⁻¹ = M - N M⁻¹ N
  Scalar det_identity{0};     ///< |det(1 - ξ²)(det M)² - 1|
};

/// ξ = M⁻¹N by LU solve.
template <typename Scalar>
SqueezeMatrix<Scalar> squeeze_matrix(const CoefficientSet<Scalar>& c) {
  using std::abs;
  const Eigen::Index dim = c.size();
  Eigen::PartialPivLU<Matrix<Scalar>> lu(c.M);
  if (!(abs(lu.determinant()) > 0) || !(lu.rcond() > 16 * std::numeric_limits<Scalar>::epsilon()))
    throw SingularMatrixError("M is singular to working precision (g at or beyond 1?)");
  SqueezeMatrix<Scalar> s;
  s.xi = lu.solve(c.N_mat);
  s.symmetry = max_abs(s.xi - s.xi.transpose());
  const Matrix<Scalar> sym = (s.xi + s.xi.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sym, Eigen::EigenvaluesOnly);
  s.spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  const auto I = Matrix<Scalar>::Identity(dim, dim);
  s.schur = max_abs(c.M.transpose() * (c.M - c.N_mat * s.xi) - I);
  const Scalar det_1_xi2 = (I - s.xi * s.xi).partialPivLu().determinant();
  s.det_identity = abs(det_1_xi2 * c.det_M * c.det_M - 1);
  return s;
}

/// Shifts Ω_α by delta, keeping x and the detunings consistent. Used for sensitivity probes.
template <typename Scalar>
BogoliubovSpectrum<Scalar> perturb_frequency(BogoliubovSpectrum<Scalar> s, Eigen::Index alpha,
                                             Scalar delta) {
  const Scalar x_new = (s.Omega(alpha) + delta) * (s.Omega(alpha) + delta);
  s.detuning.row(alpha).array() += x_new - s.x(alpha);
  s.Omega(alpha) += delta;
  s.x(alpha) = x_new;
  return s;
}

}  // namespace lambq
