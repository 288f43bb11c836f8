#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace starsec {

struct PgOptions {
  double tolerance = 1e-7;  // on ||x - P(x - grad f(x))||
  int max_iters = 5000;
};

struct PgResult {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double pg_norm = 0.0;
};

namespace detail {
inline double re(double v) { return v; }
inline double re(std::complex<double> v) { return v.real(); }
}  // namespace detail

/// Monotone projected gradient with Barzilai-Borwein trial steps and an
/// Armijo-type backtracking test. `x` must be an Eigen vector (real or
/// complex); for complex vectors `grad` returns 2 * df/d(conj x), so the
/// first-order model is f(x + d) ~ f(x) + Re(g^H d).
template <class Vec, class Obj, class Grad, class Proj>
PgResult projected_gradient(Vec& x, Obj&& f, Grad&& grad, Proj&& project, double lipschitz,
                            const PgOptions& opts = {}) {
  PgResult res;
  x = project(x);
  double fx = f(x);
  Vec gx = grad(x);
  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  for (; res.iterations < opts.max_iters; ++res.iterations) {
    const Vec unit = project(Vec(x - gx));
    res.pg_norm = (x - unit).norm();
    if (res.pg_norm <= opts.tolerance) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    Vec xt;
    double ft = fx;
    for (int bt = 0; bt < 80; ++bt) {
      xt = project(Vec(x - step * gx));
      const Vec d = xt - x;
      ft = f(xt);
      const double model = fx + detail::re(gx.dot(d)) + d.squaredNorm() / (2.0 * step);
      if (ft <= model && ft <= fx) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at roundoff level
    const Vec gt = grad(xt);
    const Vec s = xt - x;
    const Vec y = gt - gx;
    const double sy = detail::re(s.dot(y));
    x = xt;
    fx = ft;
    gx = gt;
    if (sy > 0.0) {
      step = std::clamp(s.squaredNorm() / sy, 1e-20, 1e20);
    } else {
      step = std::max(step * 2.0, lipschitz > 0.0 ? 1.0 / lipschitz : 1.0);
    }
  }
  res.objective = fx;
  return res;
}

}  // namespace starsec
