#include <cmath>
#include <numbers>

#include "continuation.hpp"
#include "doctest.h"
#include "error.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace nearsing;

namespace {

const KernelShape kShapes[] = {{0, 0, 1}, {1, 0, 1}, {2, 1, 3}, {3, 0, 3}, {2, 0, 1},
                               {3, 1, 3}, {4, 2, 5}, {4, 0, 3}, {6, 0, 5}, {5, 1, 5}};

// With u = h/s the kernel is |r|^m h^{k-p} ∫₀¹ s^{m+1} (1 + (ρs/h)²)^{-p/2} ds.
// Panels are graded geometrically toward s = 0 at the scale h/ρ.
double kernel_by_quadrature(KernelShape k, double r_norm, double rho_unit, double h) {
  const double rho = r_norm * rho_unit;
  const double scale = std::min(1.0, h / rho);
  const oracle::UnitRule g = oracle::unit_gauss(40);
  auto f = [&](double s) { return std::pow(s, k.m + 1) * std::pow(1.0 + std::pow(rho * s / h, 2), -0.5 * k.p); };
  double total = 0.0, hi = 1.0;
  for (;;) {
    const double lo = hi > scale * 1e-3 ? hi * 0.25 : 0.0;
    double panel = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) panel += g.weights[i] * f(lo + (hi - lo) * g.nodes[i]);
    total += (hi - lo) * panel;
    if (lo == 0.0) break;
    hi = lo;
  }
  return std::pow(r_norm, k.m) * std::pow(h, k.k - k.p) * total;
}

EdgeRules rules_for(RefPoint x0, std::size_t points, double skip = 0.0) {
  EdgeRuleOptions o;
  o.points = points;
  o.skip_tolerance = skip;
  return make_edge_rules(edge_geometry(x0), o);
}

double continuation_value(int level, const TaylorData& t, std::size_t points = 200) {
  const EdgeGeometry geo = edge_geometry(t.x0);
  const EdgeRules rules = rules_for(t.x0, points);
  switch (level) {
    case -1: return integrate_T_minus1(t, geo, rules);
    case 0: return integrate_T0(t, geo, rules);
    default: return integrate_T1(t, geo, rules);
  }
}

}  // namespace

TEST_CASE("edge geometry") {
  const EdgeGeometry g = edge_geometry({0.2, 0.3});
  CHECK(g.edges[0].distance == doctest::Approx(0.3));
  CHECK(g.edges[1].distance == doctest::Approx(std::numbers::sqrt2 / 2 * 0.5));
  CHECK(g.edges[2].distance == doctest::Approx(0.2));
  for (const RefPoint x0 : {RefPoint{0.2, 0.3}, RefPoint{0.5, -0.1}, RefPoint{0.9, 0.4}}) {
    const EdgeGeometry e = edge_geometry(x0);
    double area = 0.0;
    for (const ShiftedEdge& s : e.edges) {
      area += s.distance * s.speed;
      CHECK(std::abs(norm(s.normal) - 1.0) < 1e-15);
      CHECK(norm(s.direction) == doctest::Approx(2.0 * s.speed));
      for (double t : {-1.0, -0.3, 0.5, 1.0}) {
        const RefPoint r = s.at(t);
        CHECK(std::abs(r.x1 * s.normal.x1 + r.x2 * s.normal.x2 - s.distance) < 1e-15);
      }
      // The outward normal points away from the centroid.
      const RefPoint c = RefPoint{1.0 / 3.0, 1.0 / 3.0} - x0;
      CHECK(c.x1 * s.normal.x1 + c.x2 * s.normal.x2 < s.distance);
      // The map centre is the parameter of the foot of the perpendicular.
      const RefPoint foot = s.at(s.map_mu);
      CHECK(norm(foot - s.distance * s.normal) < 1e-14);
      CHECK(s.map_nu == doctest::Approx(2.0 * std::abs(s.distance)));
    }
    CHECK(area == doctest::Approx(0.5).epsilon(1e-15));
    // Consecutive edges join up.
    for (std::size_t j = 0; j < 3; ++j) CHECK(norm(e.edges[j].at(1.0) - e.edges[(j + 1) % 3].at(-1.0)) < 1e-15);
  }
}

TEST_CASE("edge rules") {
  EdgeRuleOptions o;
  o.points = 12;
  const EdgeRules r = make_edge_rules(edge_geometry({0.5, 0.05}), o);
  CHECK(r.active == std::array<bool, 3>{true, true, true});
  CHECK(r.transplanted == std::array<bool, 3>{true, false, false});
  CHECK(r.rules[0].nodes.size() == 12);

  const EdgeRules vertex = make_edge_rules(edge_geometry({0.0, 0.0}), o);
  CHECK(vertex.active == std::array<bool, 3>{false, true, false});

  o.skip_tolerance = -1.0;
  CHECK_THROWS_AS(make_edge_rules(edge_geometry({0.5, 0.0}), o), Error);
  o.policy = EdgeRulePolicy::kPlainGauss;
  o.skip_tolerance = 0.0;
  const EdgeRules plain = make_edge_rules(edge_geometry({0.5, 0.05}), o);
  CHECK(plain.transplanted == std::array<bool, 3>{false, false, false});
}

TEST_CASE("continuation kernels against direct quadrature") {
  for (const KernelShape k : kShapes) {
    for (double x : {1e-3, 0.1, 0.5, 0.69, 0.71, 1.0, 3.0, 50.0, 1e4}) {
      const double h = 0.01, rho_unit = 1.3;
      const double r_norm = x * h / rho_unit;
      const double got = continuation_kernel(k, r_norm, rho_unit, h);
      const double want = kernel_by_quadrature(k, r_norm, rho_unit, h);
      INFO("shape " << k.m << k.k << k.p << " rho/h " << x);
      CHECK(testing::rel(got, want) < 1e-12);
    }
  }
}

TEST_CASE("kernels are continuous at h = 0") {
  for (const KernelShape k : kShapes) {
    const double at_zero = continuation_kernel(k, 0.4, 1.2, 0.0);
    const double small = continuation_kernel(k, 0.4, 1.2, 1e-10);
    if (k.k == 0) {
      CHECK(testing::rel(small, at_zero) < 1e-8);
    } else {
      CHECK(at_zero == 0.0);
      CHECK(std::abs(small) < 1e-8 * std::pow(0.4, k.m - k.p));
    }
  }
  CHECK(continuation_kernel({0, 0, 1}, 0.5, 1.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("flat element at a vertex") {
  const TaylorData t = make_taylor_data(testing::flat_triangle(), DensityPolynomial::constant(1.0),
                                        newton_locate(testing::flat_triangle(), {0, 0, 0}));
  const double want = std::numbers::sqrt2 * std::log(1.0 + std::numbers::sqrt2);
  CHECK(testing::rel(continuation_value(-1, t), want) < 1e-10);
  CHECK(continuation_value(0, t) == 0.0);
  CHECK(continuation_value(1, t) == 0.0);
}

TEST_CASE("continuation matches the reference integrals of the subtraction terms") {
  struct Case {
    const char* name;
    CurvedTriangle tri;
    RefPoint p;
    double offset;
  };
  const Case cases[] = {
      {"centre", testing::exp_triangle(), {0.3, 0.35}, 0.0},
      {"centre off-surface", testing::exp_triangle(), {0.3, 0.35}, 0.05},
      {"near edge", testing::exp_triangle(), {0.5, 1e-3}, 0.0},
      {"near edge off-surface", testing::exp_triangle(), {0.5, 1e-3}, 2e-3},
      {"near hypotenuse", testing::exp_triangle(), {0.5, 0.4995}, 1e-3},
      {"near vertical edge", testing::cubic_triangle(), {1e-3, 0.4}, 0.0},
      {"cubic", testing::cubic_triangle(), {0.2, 0.25}, 0.01},
      {"outside", testing::exp_triangle(), {0.5, -0.05}, 0.0},
  };
  const DensityPolynomial phi = testing::quadratic_density();
  for (const Case& c : cases) {
    const Vec3 x0 = c.tri.eval(c.p, 0).f + c.offset * testing::unit_normal(c.tri, c.p);
    const SingularityLocation loc = newton_locate(c.tri, x0);
    REQUIRE(loc.converged);
    const TaylorData t = make_taylor_data(c.tri, phi, loc);
    for (int level = -1; level <= 1; ++level) {
      const oracle::OracleResult ref =
          oracle::duffy_split(t.x0, t.h, [&](RefPoint x) { return eval_T(level, t, x); }, 2);
      INFO(c.name << " level " << level);
      CHECK(ref.estimated_error < 1e-11);
      CHECK(testing::rel_floor(continuation_value(level, t), ref.value, 1.0) < 1e-8);
    }
  }
}

TEST_CASE("skipped edge agrees with a vanishing distance") {
  const CurvedTriangle tri = testing::exp_triangle();
  const DensityPolynomial phi = testing::quadratic_density();
  auto at = [&](RefPoint p) {
    SingularityLocation loc;
    loc.preimage = p;
    loc.converged = true;
    return make_taylor_data(tri, phi, loc);
  };
  const TaylorData on = at({0.5, 0.0}), tiny = at({0.5, 1e-300});
  for (int level = -1; level <= 1; ++level) {
    const double a = continuation_value(level, on, 40), b = continuation_value(level, tiny, 40);
    CHECK(std::isfinite(b));
    CHECK(testing::rel_floor(b, a, 1.0) < 1e-10);
  }
}
