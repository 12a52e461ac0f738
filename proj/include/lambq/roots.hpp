#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "lambq/errors.hpp"

namespace lambq {

/// Brent's method on a bracket [a, b] with f(a), f(b) of opposite sign (or zero).
/// Converges when the bracket half-width drops below rel_tol*|x| + abs_tol.
template <typename Scalar, typename Fn>
Scalar brent_root(Fn&& f, Scalar a, Scalar b, Scalar fa, Scalar fb, Scalar rel_tol,
                  Scalar abs_tol = std::numeric_limits<Scalar>::min(), int bracket = -1,
                  int max_iter = 300) {
  using std::abs;
  if (fa == Scalar(0)) return a;
  if (fb == Scalar(0)) return b;
  if ((fa > 0) == (fb > 0)) throw RootNotFoundError(bracket, "no sign change");

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar c = b, fc = fb, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (abs(fc) < abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const Scalar tol1 = 2 * eps * abs(b) + Scalar(0.5) * (rel_tol * abs(b) + abs_tol);
    const Scalar xm = Scalar(0.5) * (c - b);
    if (abs(xm) <= tol1 || fb == Scalar(0)) return b;
    if (abs(e) >= tol1 && abs(fa) > abs(fb)) {
      Scalar p, q, r;
      const Scalar s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = abs(p);
      const Scalar min1 = 3 * xm * q - abs(tol1 * q);
      const Scalar min2 = abs(e * q);
      if (2 * p < (min1 < min2 ? min1 : min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw RootNotFoundError(bracket, "Brent iteration limit reached");
}

template <typename Scalar, typename Fn>
Scalar brent_root(Fn&& f, Scalar a, Scalar b, Scalar rel_tol, int bracket = -1) {
  return brent_root(f, a, b, f(a), f(b), rel_tol, std::numeric_limits<Scalar>::min(),
                    bracket);
}

}  // namespace lambq
