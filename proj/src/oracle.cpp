#include "oracle.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace nearsing::oracle {

UnitRule unit_gauss(int n) {
  static std::mutex mu;
  static std::map<int, UnitRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  UnitRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  const long double pi = std::numbers::pi_v<long double>;
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(pi * (i + 0.5L) / n);  // Chebyshev guess
    long double dp = 0;
    for (int it = 0; it < 200; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    const long double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = static_cast<double>((1 + x) / 2);
    r.weights[static_cast<std::size_t>(i)] = static_cast<double>(w / 2);
  }
  cache.emplace(n, r);
  return r;
}

namespace {

// Panels [lo, hi] covering [0, 1], graded geometrically toward 0 down to `scale`.
std::vector<std::array<double, 2>> graded_panels(double scale) {
  constexpr double kRatio = 0.2;
  std::vector<std::array<double, 2>> out;
  double hi = 1.0;
  while (hi > scale && out.size() < 40) {
    out.push_back({hi * kRatio, hi});
    hi *= kRatio;
  }
  out.push_back({0.0, hi});
  return out;
}

double cross2(RefPoint a, RefPoint b) { return a.x1 * b.x2 - a.x2 * b.x1; }

template <typename Value, typename Integrand>
Value split_integrate(RefPoint x0, double h_over_diam, Integrand&& f, int order, int* panels) {
  const UnitRule g = unit_gauss(order);
  const std::array<RefPoint, 3> v{RefPoint{0, 0}, RefPoint{1, 0}, RefPoint{0, 1}};
  Value total{};
  *panels = 0;
  for (int e = 0; e < 3; ++e) {
    const RefPoint p = v[static_cast<std::size_t>(e)], q = v[static_cast<std::size_t>((e + 1) % 3)];
    const RefPoint pq = q - p;
    const double t = ((x0.x1 - p.x1) * pq.x1 + (x0.x2 - p.x2) * pq.x2) / (pq.x1 * pq.x1 + pq.x2 * pq.x2);
    const RefPoint foot = p + t * pq;
    const double dist = norm(foot - x0);
    for (int side_index = 0; side_index < 2; ++side_index) {
      const RefPoint corner = side_index == 0 ? p : q;
      const double signed_area = side_index == 0 ? cross2(p - x0, foot - x0) : cross2(foot - x0, q - x0);
      if (signed_area == 0.0) continue;
      const double sign = signed_area > 0 ? 1.0 : -1.0;
      const RefPoint leg = foot - x0, side = corner - foot;
      const double jac = std::abs(cross2(leg, side));
      const double side_len = norm(side);
      if (side_len == 0.0) continue;
      // Radial grading is only needed when the kernel has a length scale h.
      const auto u_panels = graded_panels(h_over_diam > 0.0 ? 1e-2 * h_over_diam : 1.0);
      const auto v_panels = graded_panels(dist / side_len < 0.5 ? 1e-2 * dist / side_len : 1.0);
      for (const auto& up : u_panels) {
        for (const auto& vp : v_panels) {
          ++*panels;
          const double uw = up[1] - up[0], vw = vp[1] - vp[0];
          Value panel{};
          for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double u = up[0] + uw * g.nodes[i];
            Value row{};
            for (std::size_t k = 0; k < g.nodes.size(); ++k) {
              const double vv = vp[0] + vw * g.nodes[k];
              row += g.weights[k] * f(x0 + u * (leg + vv * side));
            }
            panel += (g.weights[i] * u) * row;
          }
          total += (sign * uw * vw * jac) * panel;
        }
      }
    }
  }
  return total;
}

template <typename Value, typename Integrand>
std::pair<Value, Value> two_levels(const CurvedTriangle& tri, const Vec3& x0, int refinement, Integrand&& f,
                                   int* panels) {
  const SingularityLocation loc = newton_locate(tri, x0);
  if (!loc.converged) throw Error(ErrorCode::kNoConvergence, "oracle: preimage search did not converge");
  const double scale = loc.effective_h() / tri.diameter();
  const int coarse = 16 << refinement;
  int unused = 0;
  const Value a = split_integrate<Value>(loc.preimage, scale, f, coarse, &unused);
  const Value b = split_integrate<Value>(loc.preimage, scale, f, 2 * coarse, panels);
  return {a, b};
}

}  // namespace

OracleResult duffy_split(RefPoint center, double length_scale, const std::function<double(RefPoint)>& f,
                         int refinement) {
  const int coarse = 16 << refinement;
  OracleResult r;
  int unused = 0;
  const double a = split_integrate<double>(center, length_scale, f, coarse, &unused);
  const double b = split_integrate<double>(center, length_scale, f, 2 * coarse, &r.subdivision_count);
  r.value = b;
  r.estimated_error = std::abs(b - a);
  return r;
}

OracleResult duffy_single(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0, int refinement) {
  auto f = [&](RefPoint x) {
    const MapJet j = tri.eval(x, 1);
    return phi.eval(x).value * norm(cross(j.d1, j.d2)) / norm(j.f - x0);
  };
  OracleResult r;
  const auto [coarse, fine] = two_levels<double>(tri, x0, refinement, f, &r.subdivision_count);
  r.value = fine;
  r.estimated_error = std::abs(fine - coarse);
  return r;
}

ComplexOracleResult duffy_single_helmholtz(const CurvedTriangle& tri, int basis_index, const Vec3& x0,
                                           double wavenumber, int refinement) {
  const DensityPolynomial phi = DensityPolynomial::basis(basis_index);
  auto f = [&](RefPoint x) {
    const MapJet j = tri.eval(x, 1);
    const double r = norm(j.f - x0);
    const std::complex<double> kernel = std::exp(std::complex<double>(0.0, wavenumber * r)) / r;
    return phi.eval(x).value * norm(cross(j.d1, j.d2)) * kernel;
  };
  ComplexOracleResult r;
  const auto [coarse, fine] = two_levels<std::complex<double>>(tri, x0, refinement, f, &r.subdivision_count);
  r.value = fine;
  r.estimated_error = std::abs(fine - coarse);
  return r;
}

namespace {

// Sub-regions of the identical-panel decomposition on {0 ≤ s₂ ≤ s₁ ≤ 1};
// each returns (x, y) for (ξ, η₁, η₂, η₃) ∈ [0,1]⁴ with Jacobian ξ³η₁²η₂.
std::array<std::array<RefPoint, 2>, 6> identical_regions(double xi, double e1, double e2, double e3) {
  return {{
      {RefPoint{xi, xi * (1 - e1 + e1 * e2)}, RefPoint{xi * (1 - e1 * e2 * e3), xi * (1 - e1)}},
      {RefPoint{xi * (1 - e1 * e2 * e3), xi * (1 - e1)}, RefPoint{xi, xi * (1 - e1 + e1 * e2)}},
      {RefPoint{xi, xi * e1 * (1 - e2 + e2 * e3)}, RefPoint{xi * (1 - e1 * e2), xi * e1 * (1 - e2)}},
      {RefPoint{xi * (1 - e1 * e2), xi * e1 * (1 - e2)}, RefPoint{xi, xi * e1 * (1 - e2 + e2 * e3)}},
      {RefPoint{xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3)}, RefPoint{xi, xi * e1 * (1 - e2)}},
      {RefPoint{xi, xi * e1 * (1 - e2)}, RefPoint{xi * (1 - e1 * e2 * e3), xi * e1 * (1 - e2 * e3)}},
  }};
}

// {0 ≤ s₂ ≤ s₁ ≤ 1} → reference triangle, unit Jacobian.
RefPoint to_reference(RefPoint s) { return {s.x1 - s.x2, s.x2}; }

double identical_panel_sum(const CurvedTriangle& tri, int order) {
  const UnitRule g = unit_gauss(order);
  const std::size_t n = g.nodes.size();
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double xi = g.nodes[a];
    double s1 = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const double e1 = g.nodes[b];
      double s2 = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double e2 = g.nodes[c];
        double s3 = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
          double sum = 0.0;
          for (const auto& [xs, ys] : identical_regions(xi, e1, e2, g.nodes[d])) {
            const RefPoint x = to_reference(xs), y = to_reference(ys);
            const MapJet jx = tri.eval(x, 1), jy = tri.eval(y, 1);
            sum += norm(cross(jx.d1, jx.d2)) * norm(cross(jy.d1, jy.d2)) / norm(jx.f - jy.f);
          }
          s3 += g.weights[d] * sum;
        }
        s2 += g.weights[c] * e2 * s3;
      }
      s1 += g.weights[b] * e1 * e1 * s2;
    }
    total += g.weights[a] * xi * xi * xi * s1;
  }
  return total;
}

}  // namespace

OracleResult relative_coordinate_double(const CurvedTriangle& tri, int refinement) {
  const int coarse = 8 << refinement;
  OracleResult r;
  const double a = identical_panel_sum(tri, coarse);
  const double b = identical_panel_sum(tri, 2 * coarse);
  r.value = b;
  r.estimated_error = std::abs(b - a);
  r.subdivision_count = 6;
  return r;
}

}  // namespace nearsing::oracle
