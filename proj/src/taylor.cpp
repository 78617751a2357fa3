#include "taylor.hpp"

#include <cmath>

#include "error.hpp"

namespace nearsing {

R2Coefficients r2_coeffs(const MapJet& j, const std::optional<Vec3>& e_h) {
  R2Coefficients r;
  if (e_h) {
    const Vec3& e = *e_h;
    r.a = {dot(e, j.d11), 2.0 * dot(e, j.d12), dot(e, j.d22)};
    r.b = {dot(e, j.d111) / 3.0, dot(e, j.d112), dot(e, j.d122), dot(e, j.d222) / 3.0};
  }
  r.c = {dot(j.d1, j.d11),
         2.0 * dot(j.d1, j.d12) + dot(j.d2, j.d11),
         2.0 * dot(j.d2, j.d12) + dot(j.d1, j.d22),
         dot(j.d2, j.d22)};
  r.d = {dot(j.d1, j.d111) / 3.0 + dot(j.d11, j.d11) / 4.0,
         dot(j.d2, j.d111) / 3.0 + dot(j.d1, j.d112) + dot(j.d11, j.d12),
         dot(j.d11, j.d22) / 2.0 + dot(j.d1, j.d122) + dot(j.d2, j.d112) + dot(j.d12, j.d12),
         dot(j.d1, j.d222) / 3.0 + dot(j.d2, j.d122) + dot(j.d22, j.d12),
         dot(j.d2, j.d222) / 3.0 + dot(j.d22, j.d22) / 4.0};
  return r;
}

PsiRCoefficients psi_r_coeffs(const R2Coefficients& r, const MetricDensity& psi) {
  const double p0 = psi.value, p1 = psi.d1, p2 = psi.d2;
  const auto& a = r.a;
  const auto& b = r.b;
  const auto& c = r.c;
  const auto& d = r.d;
  constexpr double k = 3.0 / 8.0;
  PsiRCoefficients out;
  out.e = {-0.5 * (a[0] * p1 + b[0] * p0),
           -0.5 * (a[1] * p1 + a[0] * p2 + b[1] * p0),
           -0.5 * (a[2] * p1 + a[1] * p2 + b[2] * p0),
           -0.5 * (a[2] * p2 + b[3] * p0)};
  out.f = {k * p0 * (a[0] * a[0]),
           k * p0 * (2.0 * a[0] * a[1]),
           k * p0 * (a[1] * a[1] + 2.0 * a[0] * a[2]),
           k * p0 * (2.0 * a[1] * a[2]),
           k * p0 * (a[2] * a[2])};
  out.g = {-0.5 * (c[0] * p1 + d[0] * p0),
           -0.5 * (c[1] * p1 + c[0] * p2 + d[1] * p0),
           -0.5 * (c[2] * p1 + c[1] * p2 + d[2] * p0),
           -0.5 * (c[3] * p1 + c[2] * p2 + d[3] * p0),
           -0.5 * (c[3] * p2 + d[4] * p0)};
  out.h = {k * p0 * (c[0] * c[0]),
           k * p0 * (2.0 * c[0] * c[1]),
           k * p0 * (c[1] * c[1] + 2.0 * c[0] * c[2]),
           k * p0 * (2.0 * c[0] * c[3] + 2.0 * c[1] * c[2]),
           k * p0 * (c[2] * c[2] + 2.0 * c[1] * c[3]),
           k * p0 * (2.0 * c[2] * c[3]),
           k * p0 * (c[3] * c[3])};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t m = 0; m < 4; ++m) out.ac[i + m] += 2.0 * k * p0 * a[i] * c[m];
  }
  return out;
}

TaylorData make_taylor_data(const CurvedTriangle& tri, const DensityPolynomial& phi,
                            const SingularityLocation& loc) {
  TaylorData t;
  t.x0 = loc.preimage;
  t.h = loc.effective_h();
  t.e_h = loc.e_h;
  t.jet = tri.eval(t.x0, 3);
  t.j1 = t.jet.d1;
  t.j2 = t.jet.d2;
  t.psi = metric_density(tri, phi, t.x0);
  t.r2 = r2_coeffs(t.jet, t.e_h);
  t.pr = psi_r_coeffs(t.r2, t.psi);
  return t;
}

double eval_T(int level, const TaylorData& t, RefPoint x) {
  const RefPoint d = x - t.x0;
  const double r2 = std::pow(t.jacobian_norm(d), 2) + t.h * t.h;
  if (!(r2 > 0.0)) throw Error(ErrorCode::kSingularEvaluation, "subtraction term evaluated at the singularity");
  const double r = std::sqrt(r2);
  const double r3 = r2 * r, r5 = r3 * r2;
  const double p0 = t.psi.value;
  switch (level) {
    case -1:
      return p0 / r;
    case 0: {
      const double dpsi = t.psi.d1 * d.x1 + t.psi.d2 * d.x2;
      return dpsi / r - 0.5 * t.h * p0 * monomial_sum(t.r2.a, d) / r3 - 0.5 * p0 * monomial_sum(t.r2.c, d) / r3;
    }
    case 1: {
      const double d2psi = 0.5 * t.psi.d11 * d.x1 * d.x1 + t.psi.d12 * d.x1 * d.x2 + 0.5 * t.psi.d22 * d.x2 * d.x2;
      return d2psi / r + t.h * monomial_sum(t.pr.e, d) / r3 + t.h * t.h * monomial_sum(t.pr.f, d) / r5 +
             monomial_sum(t.pr.g, d) / r3 + monomial_sum(t.pr.h, d) / r5 + t.h * monomial_sum(t.pr.ac, d) / r5;
    }
    default:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "subtraction level must be -1, 0 or 1");
}

namespace {

// F(x̂) - x₀ expanded about x̂₀; exact for maps of degree ≤ 3 and free of the
// cancellation in F(x̂) - F(x̂₀) when x̂ is close to x̂₀.
Vec3 offset_from_singularity(const CurvedTriangle& tri, const Vec3& x0, const TaylorData& t, RefPoint x) {
  if (tri.degree() > 3) return tri.eval(x, 0).f - x0;
  const RefPoint d = x - t.x0;
  const MapJet& j = t.jet;
  const double a = d.x1, b = d.x2;
  Vec3 v = (j.f - x0) + a * j.d1 + b * j.d2;
  v += 0.5 * (a * a * j.d11 + 2.0 * a * b * j.d12 + b * b * j.d22);
  v += (1.0 / 6.0) * (a * a * a * j.d111 + 3.0 * a * a * b * j.d112 + 3.0 * a * b * b * j.d122 + b * b * b * j.d222);
  return v;
}

}  // namespace

double regularized_residual(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                            const TaylorData& t, int level, RefPoint x) {
  if (level < -1 || level > 1) throw Error(ErrorCode::kInvalidArgument, "subtraction level must be -1, 0 or 1");
  const double r = norm(offset_from_singularity(tri, x0, t, x));
  if (!(r > 0.0)) throw Error(ErrorCode::kSingularEvaluation, "residual evaluated at the singularity");
  const MapJet jx = tri.eval(x, 1);
  double value = phi.eval(x).value * norm(cross(jx.d1, jx.d2)) / r;
  for (int l = -1; l <= level; ++l) value -= eval_T(l, t, x);
  return value;
}

}  // namespace nearsing
