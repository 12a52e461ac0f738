#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "lambq/lambq.hpp"

namespace testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline double max_rel(const lambq::VectorXd& a, const lambq::VectorXd& b) {
  return ((a - b).array().abs() / b.array().abs()).maxCoeff();
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

// Plain bisection on a sign change.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::abs(b); ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Builds the Lamb model pipeline for one parameter set.
struct Run {
  lambq::LambModel<double> model;
  lambq::SecularProblem<double> problem;
  lambq::BogoliubovSpectrum<double> spectrum;
  lambq::CoefficientSet<double> coeffs;
};

inline Run run(const lambq::DimensionlessParams<double>& p) {
  Run r;
  r.model = lambq::build_model(p);
  r.problem = lambq::make_secular_problem(r.model);
  r.spectrum = lambq::solve_spectrum(r.problem);
  r.coeffs = lambq::build_coefficients(r.problem, r.spectrum);
  return r;
}

inline Run run(const lambq::SecularProblem<double>& p) {
  Run r;
  r.problem = p;
  r.spectrum = lambq::solve_spectrum(p);
  r.coeffs = lambq::build_coefficients(p, r.spectrum);
  return r;
}

// String frequencies first, first + 0.4, ...; with first > 1 the bead is the lowest mode.
inline lambq::SecularProblem<double> decoupled_problem(int n, double first = 1.25) {
  lambq::SecularProblem<double> p;
  p.omega_0 = 1;
  p.omega = lambq::VectorXd::LinSpaced(n, first, first + 0.4 * (n - 1));
  p.gamma = lambq::VectorXd::Zero(n);
  return p;
}

// Couplings rescaled so that g is exactly `g`, nudged upward until the computed g reaches it.
inline lambq::SecularProblem<double> at_coupling(lambq::SecularProblem<double> p, double g) {
  p = lambq::scale_couplings(p, std::sqrt(g / lambq::coupling_strength(p)));
  while (lambq::coupling_strength(p) < g) p.gamma(0) = std::nextafter(p.gamma(0), 2 * p.gamma(0));
  return p;
}

}  // namespace testing
