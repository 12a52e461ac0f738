#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lambq/bogoliubov.hpp"
#include "lambq/errors.hpp"
#include "lambq/spectrum.hpp"
#include "lambq/types.hpp"

namespace lambq {

/// Normal-mode matrix of the coupled quadratures: K_αα = ω_α², K_0n = K_n0 = -2γ_n√(ω_0ω_n).
/// Its eigenvalues are the Ω_α².
template <typename Scalar = double>
struct QuadratureForm {
  Matrix<Scalar> K;
};

template <typename Scalar>
QuadratureForm<Scalar> quadrature_form(const SecularProblem<Scalar>& p) {
  using std::sqrt;
  validate(p);
  const Eigen::Index n = p.size();
  QuadratureForm<Scalar> q;
  q.K = Matrix<Scalar>::Zero(n + 1, n + 1);
  q.K(0, 0) = p.omega_0 * p.omega_0;
  for (Eigen::Index i = 0; i < n; ++i) {
    q.K(i + 1, i + 1) = p.omega(i) * p.omega(i);
    q.K(0, i + 1) = q.K(i + 1, 0) = -2 * p.gamma(i) * sqrt(p.omega_0 * p.omega(i));
  }
  return q;
}

/// Ascending eigenvalues of K; negative ones signal instability.
template <typename Scalar>
Vector<Scalar> quadrature_eigenvalues(const SecularProblem<Scalar>& p) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(quadrature_form(p).K, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

template <typename Scalar>
Vector<Scalar> quadrature_spectrum(const SecularProblem<Scalar>& p) {
  const Vector<Scalar> ev = quadrature_eigenvalues(p);
  if (!(ev(0) > 0)) throw InstabilityError(static_cast<double>(coupling_strength(p)));
  return ev.cwiseSqrt();
}

/// Residuals of the commutator equations [b_β, H] = Ω_β b_β, component by component:
///   (Ω_β - ω_0) M_β0 = Σ_q γ_q (N_βq - M_βq)     (Ω_β + ω_0) N_β0 = Σ_q γ_q (N_βq - M_βq)
///   (Ω_β - ω_q) M_βq = γ_q (N_β0 - M_β0)          (Ω_β + ω_q) N_βq = γ_q (N_β0 - M_β0)
template <typename Scalar = double>
struct CoefficientSystemResidual {
  Scalar bead_m{0};
  Scalar bead_n{0};
  Scalar string_m{0};
  Scalar string_n{0};

  Scalar max() const { return std::max({bead_m, bead_n, string_m, string_n}); }
};

template <typename Scalar>
CoefficientSystemResidual<Scalar> verify_coefficient_system(const SecularProblem<Scalar>& p,
                                                            const BogoliubovSpectrum<Scalar>& s,
                                                            const CoefficientSet<Scalar>& c) {
  using std::abs;
  CoefficientSystemResidual<Scalar> r;
  const Eigen::Index n = p.size();
  for (Eigen::Index b = 0; b <= n; ++b) {
    const Scalar W = s.Omega(b);
    Scalar rhs0 = 0;
    for (Eigen::Index q = 0; q < n; ++q) rhs0 += p.gamma(q) * (c.N_mat(b, q + 1) - c.M(b, q + 1));
    r.bead_m = std::max(r.bead_m, abs((W - p.omega_0) * c.M(b, 0) - rhs0));
    r.bead_n = std::max(r.bead_n, abs((W + p.omega_0) * c.N_mat(b, 0) - rhs0));
    const Scalar diff0 = c.N_mat(b, 0) - c.M(b, 0);
    for (Eigen::Index q = 0; q < n; ++q) {
      r.string_m = std::max(r.string_m,
                            abs((W - p.omega(q)) * c.M(b, q + 1) - p.gamma(q) * diff0));
      r.string_n = std::max(r.string_n,
                            abs((W + p.omega(q)) * c.N_mat(b, q + 1) - p.gamma(q) * diff0));
    }
  }
  return r;
}

inline constexpr int kFockCutoff = 12;
inline constexpr Eigen::Index kFockMaxDimension = 100000;

/// The Hamiltonian on the product Fock space with at most `cutoff` quanta per mode.
/// Mode 0 is the bead; basis index Σ_i n_i (cutoff+1)^i.
template <typename Scalar = double>
struct FockTruncation {
  int n_modes_small{2};
  int cutoff{kFockCutoff};
  Matrix<Scalar> H;

  Eigen::Index dimension() const { return H.rows(); }
  int occupation(Eigen::Index index, int mode) const {
    for (int i = 0; i < mode; ++i) index /= (cutoff + 1);
    return static_cast<int>(index % (cutoff + 1));
  }
  int total(Eigen::Index index) const {
    int t = 0;
    for (int i = 0; i <= n_modes_small; ++i) t += occupation(index, i);
    return t;
  }
};

template <typename Scalar>
FockTruncation<Scalar> fock_truncation(const SecularProblem<Scalar>& p, int cutoff = kFockCutoff) {
  using std::sqrt;
  validate(p);
  if (p.size() > 3) throw ValidationError("n_modes", "Fock oracle supports at most 3 string modes");
  if (cutoff < 1) throw ValidationError("cutoff", "must be >= 1");
  FockTruncation<Scalar> t;
  t.n_modes_small = static_cast<int>(p.size());
  t.cutoff = cutoff;
  const int modes = t.n_modes_small + 1;
  Eigen::Index dim = 1;
  std::vector<Eigen::Index> stride(modes);
  for (int i = 0; i < modes; ++i) {
    stride[i] = dim;
    dim *= cutoff + 1;
  }
  if (dim > kFockMaxDimension) throw ValidationError("cutoff", "Fock basis exceeds 1e5 states");
  t.H = Matrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    Scalar e = p.omega_0 * t.occupation(k, 0);
    for (int q = 1; q < modes; ++q) e += p.omega(q - 1) * t.occupation(k, q);
    t.H(k, k) = e;
    // -(a_0 + a_0†)(a_q + a_q†) γ_q acting on |k⟩.
    const int n0 = t.occupation(k, 0);
    for (int q = 1; q < modes; ++q) {
      const int nq = t.occupation(k, q);
      for (int s0 : {-1, 1}) {
        const int m0 = n0 + s0;
        if (m0 < 0 || m0 > cutoff) continue;
        const Scalar f0 = sqrt(Scalar(s0 > 0 ? m0 : n0));
        for (int sq : {-1, 1}) {
          const int mq = nq + sq;
          if (mq < 0 || mq > cutoff) continue;
          const Scalar fq = sqrt(Scalar(sq > 0 ? mq : nq));
          const Eigen::Index j = k + s0 * stride[0] + sq * stride[q];
          t.H(j, k) -= p.gamma(q - 1) * f0 * fq;
        }
      }
    }
  }
  return t;
}

inline constexpr double kFockCutoffWarning = 1e-8;

/// Eigenpairs of the truncated Hamiltonian, ascending in energy, with vectors in the full basis.
template <typename Scalar = double>
struct FockSolution {
  Vector<Scalar> energies;
  Matrix<Scalar> vectors;
  Scalar ground_energy{0};
  Vector<Scalar> ground;
  Scalar top_occupancy{0};  ///< weight of the ground state on states with some n_i = cutoff
  std::vector<std::string> warnings;
};

/// Dense diagonalization. With parity_blocks the even and odd total-number sectors are
/// diagonalized separately (H only couples states of equal parity).
template <typename Scalar>
FockSolution<Scalar> fock_ground_state(const FockTruncation<Scalar>& t, bool parity_blocks = true) {
  const Eigen::Index dim = t.dimension();
  FockSolution<Scalar> sol;
  if (!parity_blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(t.H);
    sol.energies = eig.eigenvalues();
    sol.vectors = eig.eigenvectors();
  } else {
    std::vector<Eigen::Index> sector[2];
    for (Eigen::Index k = 0; k < dim; ++k) sector[t.total(k) % 2].push_back(k);
    std::vector<std::pair<Scalar, Vector<Scalar>>> pairs;
    pairs.reserve(dim);
    for (const auto& idx : sector) {
      const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
      Matrix<Scalar> h(m, m);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) h(i, j) = t.H(idx[i], idx[j]);
      Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(h);
      for (Eigen::Index c = 0; c < m; ++c) {
        Vector<Scalar> v = Vector<Scalar>::Zero(dim);
        for (Eigen::Index i = 0; i < m; ++i) v(idx[i]) = eig.eigenvectors()(i, c);
        pairs.emplace_back(eig.eigenvalues()(c), std::move(v));
      }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    sol.energies.resize(dim);
    sol.vectors.resize(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      sol.energies(c) = pairs[c].first;
      sol.vectors.col(c) = pairs[c].second;
    }
  }
  sol.ground_energy = sol.energies(0);
  sol.ground = sol.vectors.col(0);
  for (Eigen::Index k = 0; k < dim; ++k) {
    bool top = false;
    for (int i = 0; i <= t.n_modes_small; ++i) top = top || t.occupation(k, i) == t.cutoff;
    if (top) sol.top_occupancy += sol.ground(k) * sol.ground(k);
  }
  if (sol.top_occupancy > kFockCutoffWarning)
    sol.warnings.push_back("cutoff insufficient: top-occupancy probability " +
                           std::to_string(static_cast<double>(sol.top_occupancy)));
  return sol;
}

/// ⟨a_α† a_α⟩ in state psi, α = 0 (bead) .. N.
template <typename Scalar>
Vector<Scalar> fock_occupations(const FockTruncation<Scalar>& t, const Vector<Scalar>& psi) {
  Vector<Scalar> n = Vector<Scalar>::Zero(t.n_modes_small + 1);
  for (Eigen::Index k = 0; k < t.dimension(); ++k)
    for (int i = 0; i <= t.n_modes_small; ++i) n(i) += psi(k) * psi(k) * t.occupation(k, i);
  return n;
}

/// ⟨u_0²⟩ = ‖(a_0 + a_0†)ψ‖² / (2mω_0).
template <typename Scalar>
Scalar fock_bead_variance(const FockTruncation<Scalar>& t, const Vector<Scalar>& psi,
                          Scalar omega_0, Scalar mass = Scalar(1)) {
  using std::sqrt;
  Vector<Scalar> x = Vector<Scalar>::Zero(t.dimension());
  for (Eigen::Index k = 0; k < t.dimension(); ++k) {
    const int n0 = t.occupation(k, 0);
    if (n0 > 0) x(k - 1) += sqrt(Scalar(n0)) * psi(k);
    if (n0 < t.cutoff) x(k + 1) += sqrt(Scalar(n0 + 1)) * psi(k);
  }
  return x.squaredNorm() / (2 * mass * omega_0);
}

/// Largest |ψ_k| over basis states with odd total excitation number.
template <typename Scalar>
Scalar odd_parity_amplitude(const FockTruncation<Scalar>& t, const Vector<Scalar>& psi) {
  using std::abs;
  Scalar m = 0;
  for (Eigen::Index k = 0; k < t.dimension(); ++k)
    if (t.total(k) % 2 == 1) m = std::max(m, abs(psi(k)));
  return m;
}

/// |⟨E_j| a_0† |⟩_0|² summed over eigenstates with E_j - E_0 within tol of each Ω_α.
/// a_0†|⟩_0 is the basis state with one bead quantum.
template <typename Scalar>
Vector<Scalar> fock_emission(const FockTruncation<Scalar>& t, const FockSolution<Scalar>& sol,
                             const Vector<Scalar>& Omega, Scalar tol) {
  using std::abs;
  Vector<Scalar> p = Vector<Scalar>::Zero(Omega.size());
  for (Eigen::Index j = 0; j < sol.energies.size(); ++j) {
    const Scalar e = sol.energies(j) - sol.ground_energy;
    for (Eigen::Index a = 0; a < Omega.size(); ++a)
      if (abs(e - Omega(a)) < tol) p(a) += sol.vectors(1, j) * sol.vectors(1, j);
  }
  return p;
}

/// (1/2) Σ_α (Ω_α - ω_α), the ground energy relative to the uncoupled vacuum.
template <typename Scalar>
Scalar symplectic_ground_energy(const SecularProblem<Scalar>& p, const BogoliubovSpectrum<Scalar>& s) {
  Scalar e = s.Omega.sum() - p.omega_0 - p.omega.sum();
  return e / 2;
}

}  // namespace lambq
