#include "preimage.hpp"

#include <cmath>

namespace nearsing {

CostDerivatives cost_grad_hessian(const CurvedTriangle& tri, const Vec3& x0, RefPoint p) {
  const MapJet j = tri.eval(p, 2);
  const Vec3 e = j.f - x0;
  return {dot(e, e),
          2.0 * dot(e, j.d1),
          2.0 * dot(e, j.d2),
          2.0 * (dot(e, j.d11) + dot(j.d1, j.d1)),
          2.0 * (dot(e, j.d12) + dot(j.d1, j.d2)),
          2.0 * (dot(e, j.d22) + dot(j.d2, j.d2))};
}

namespace {

struct Trace {
  RefPoint x;
  double value;
  double gradient_norm;
  int iterations;
  bool converged;
};

// Unshifted Newton steps past the stopping test, kept while E decreases, so
// that on-surface points recover their preimage to working precision.
void polish(const CurvedTriangle& tri, const Vec3& x0, RefPoint& x, CostDerivatives& c) {
  for (int k = 0; k < 3; ++k) {
    const double det = c.h11 * c.h22 - c.h12 * c.h12;
    if (!(det > 0.0)) return;
    const RefPoint trial = x + RefPoint{-(c.h22 * c.g1 - c.h12 * c.g2) / det, -(c.h11 * c.g2 - c.h12 * c.g1) / det};
    const CostDerivatives ct = cost_grad_hessian(tri, x0, trial);
    if (!(ct.value < c.value)) return;
    x = trial;
    c = ct;
  }
}

Trace run_newton(const CurvedTriangle& tri, const Vec3& x0, RefPoint start, const NewtonOptions& opts) {
  const double rho = tri.diameter();
  const double tol = opts.tolerance_scale * rho * rho;
  RefPoint x = start;
  CostDerivatives c = cost_grad_hessian(tri, x0, x);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gnorm = std::hypot(c.g1, c.g2);
    if (gnorm <= tol) {
      polish(tri, x0, x, c);
      return {x, c.value, std::hypot(c.g1, c.g2), it, true};
    }

    // Closed-form eigenvalues of the symmetric 2×2 Hessian.
    double h11 = c.h11, h12 = c.h12, h22 = c.h22;
    const double mean = 0.5 * (h11 + h22);
    const double rad = std::hypot(0.5 * (h11 - h22), h12);
    const double lmin = mean - rad;
    if (lmin <= 0.0) {
      const double tau = std::max(0.0, opts.beta - lmin);
      h11 += tau;
      h22 += tau;
    }
    const double det = h11 * h22 - h12 * h12;
    const RefPoint step{-(h22 * c.g1 - h12 * c.g2) / det, -(h11 * c.g2 - h12 * c.g1) / det};
    const double slope = c.g1 * step.x1 + c.g2 * step.x2;

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const RefPoint trial = x + alpha * step;
      const CostDerivatives ct = cost_grad_hessian(tri, x0, trial);
      if (ct.value <= c.value + opts.armijo * alpha * slope) {
        x = trial;
        c = ct;
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    // No decrease representable in floating point: we are at the minimum to
    // working precision, so report based on the gradient test.
    if (!accepted) break;
  }
  const double gnorm = std::hypot(c.g1, c.g2);
  return {x, c.value, gnorm, it, gnorm <= tol};
}

}  // namespace

SingularityLocation newton_locate(const CurvedTriangle& tri, const Vec3& x0, const NewtonOptions& opts) {
  Trace t = run_newton(tri, x0, opts.start, opts);
  if (!t.converged) {
    Trace retry = run_newton(tri, x0, {1.0 / 3.0, 1.0 / 3.0}, opts);
    retry.iterations += t.iterations;
    if (retry.converged || retry.gradient_norm < t.gradient_norm) t = retry;
    else t.iterations = retry.iterations;
  }

  SingularityLocation loc;
  loc.preimage = t.x;
  loc.iterations = t.iterations;
  loc.gradient_norm = t.gradient_norm;
  loc.converged = t.converged;
  const Vec3 offset = tri.eval(t.x, 0).f - x0;
  loc.h = norm(offset);
  if (loc.h > 1e-14 * tri.diameter()) loc.e_h = (1.0 / loc.h) * offset;
  return loc;
}

}  // namespace nearsing
