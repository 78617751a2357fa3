#include "continuation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace nearsing {

EdgeGeometry edge_geometry(RefPoint x0) {
  const double x = x0.x1, y = x0.x2;
  const double r2 = std::numbers::sqrt2 / 2.0;
  EdgeGeometry g;
  g.edges[0] = {{-x, -y}, {1.0, 0.0}, 0.5, {0.0, -1.0}, y, -1.0 + 2.0 * x, 2.0 * std::abs(y)};
  const double s2 = r2 * (1.0 - x - y);
  g.edges[1] = {{1.0 - x, -y}, {-1.0, 1.0}, r2, {r2, r2}, s2, y - x, 2.0 * std::abs(s2)};
  g.edges[2] = {{-x, 1.0 - y}, {0.0, -1.0}, 0.5, {-1.0, 0.0}, x, -1.0 + 2.0 * (1.0 - y), 2.0 * std::abs(x)};
  return g;
}

EdgeRules make_edge_rules(const EdgeGeometry& geo, const EdgeRuleOptions& opts) {
  EdgeRules out;
  const Rule1D gauss = gauss_legendre(opts.points);
  for (std::size_t j = 0; j < 3; ++j) {
    const ShiftedEdge& e = geo.edges[j];
    const double s = std::abs(e.distance);
    if (opts.skip_tolerance >= 0.0 && s <= opts.skip_tolerance) continue;
    if (s == 0.0) {
      throw Error(ErrorCode::kSingularEvaluation, "singularity lies on an edge that is not skipped");
    }
    out.active[j] = true;
    if (opts.policy == EdgeRulePolicy::kTransplanted && s < opts.near_edge) {
      out.rules[j] = transplanted_rule(gauss, ConformalMap(e.map_mu, std::max(e.map_nu, 1e-300)));
      out.transplanted[j] = true;
    } else {
      out.rules[j] = gauss;
    }
  }
  return out;
}

namespace {

// Σ_n C(-p/2, n) x^{2n} / (m + 2 + 2n), convergent for x < 1.
double small_ratio_series(int m, int p, double x) {
  const double x2 = x * x;
  double coeff = 1.0, power = 1.0, sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double term = coeff * power / (m + 2 + 2 * n);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    coeff *= (-0.5 * p - n) / (n + 1.0);
    power *= x2;
  }
  return sum;
}

double closed_form(KernelShape s, double rho, double h) {
  const double r2 = rho * rho, h2 = h * h;
  const double S = std::sqrt(r2 + h2);
  const auto key = s.m * 100 + s.k * 10 + s.p;
  switch (key) {
    case 1:  // T₋₁
      return 1.0 / (S + h);
    case 101:
      return (rho * S - h2 * std::asinh(rho / h)) / (2.0 * r2 * rho);
    case 213:
      return h * (r2 + 2.0 * h * (h - S)) / (r2 * r2 * S);
    case 303:
      return ((3.0 * h2 * rho + r2 * rho) / S - 3.0 * h2 * std::asinh(rho / h)) / (2.0 * r2 * r2 * rho);
    case 201:
      return (2.0 * h2 * h - 2.0 * h2 * S + r2 * S) / (3.0 * r2 * r2);
    case 313:
      return h * closed_form({3, 0, 3}, rho, h);
    case 425: {
      const double S3 = S * S * S;
      return h2 * (8.0 * h2 * h2 + 12.0 * h2 * r2 + 3.0 * r2 * r2 - 8.0 * h * S3) / (3.0 * r2 * r2 * r2 * S3);
    }
    case 403:
      return (-8.0 * h2 * h2 - 4.0 * h2 * r2 + r2 * r2 + 8.0 * h2 * h * S) / (3.0 * r2 * r2 * r2 * S);
    case 605: {
      const double S3 = S * S * S;
      const double h4 = h2 * h2, r4 = r2 * r2;
      return (-16.0 * h4 * h2 - 24.0 * h4 * r2 - 6.0 * h2 * r4 + r4 * r2 + 16.0 * h4 * h * S + 16.0 * h2 * h * r2 * S) /
             (3.0 * r4 * r4 * S3);
    }
    case 515: {
      const double S4 = (r2 + h2) * (r2 + h2);
      const double r4 = r2 * r2;
      return h * ((15.0 * h2 * h2 * rho + 20.0 * h2 * r2 * rho + 3.0 * r4 * rho) * S - 15.0 * h2 * S4 * std::asinh(rho / h)) /
             (6.0 * r4 * r2 * rho * S4);
    }
    default:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported continuation kernel");
}

}  // namespace

double continuation_kernel(KernelShape s, double r_norm, double rho_unit, double h) {
  const int r = s.m + s.k - s.p;
  if (h == 0.0) {
    if (s.k > 0) return 0.0;
    return std::pow(r_norm, s.m - s.p) * std::pow(rho_unit, -s.p) / (r + 2);
  }
  const double rho = r_norm * rho_unit;
  const double x = rho / h;
  if (x < 0.7) {
    // Closed forms cancel catastrophically for ρ ≪ h.
    return std::pow(h, r) * std::pow(x / rho_unit, s.m) * small_ratio_series(s.m, s.p, x);
  }
  return std::pow(r_norm, s.m) * closed_form(s, rho, h);
}

namespace {

struct Term {
  KernelShape shape;
  std::vector<double> coeffs;  // homogeneous polynomial of degree shape.m in r̂
};

template <std::size_t N>
std::vector<double> scaled(const std::array<double, N>& a, double s) {
  std::vector<double> v(a.begin(), a.end());
  for (double& x : v) x *= s;
  return v;
}

double poly(const std::vector<double>& c, RefPoint d) {
  const std::size_t n = c.size();
  double sum = 0.0, p2 = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p1 = 1.0;
    for (std::size_t k = 0; k + 1 + i < n; ++k) p1 *= d.x1;
    sum += c[i] * p1 * p2;
    p2 *= d.x2;
  }
  return sum;
}

std::vector<Term> level_terms(int level, const TaylorData& t) {
  const double p0 = t.psi.value;
  switch (level) {
    case -1:
      return {{{0, 0, 1}, {p0}}};
    case 0:
      return {{{1, 0, 1}, {t.psi.d1, t.psi.d2}},
              {{2, 1, 3}, scaled(t.r2.a, -0.5 * p0)},
              {{3, 0, 3}, scaled(t.r2.c, -0.5 * p0)}};
    case 1:
      return {{{2, 0, 1}, {0.5 * t.psi.d11, t.psi.d12, 0.5 * t.psi.d22}},
              {{3, 1, 3}, scaled(t.pr.e, 1.0)},
              {{4, 2, 5}, scaled(t.pr.f, 1.0)},
              {{4, 0, 3}, scaled(t.pr.g, 1.0)},
              {{6, 0, 5}, scaled(t.pr.h, 1.0)},
              {{5, 1, 5}, scaled(t.pr.ac, 1.0)}};
    default:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "subtraction level must be -1, 0 or 1");
}

double integrate_level(int level, const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                       std::array<double, 3>* per_edge) {
  const std::vector<Term> terms = level_terms(level, t);
  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double contribution = 0.0;
    if (rules.active[j]) {
      const ShiftedEdge& e = geo.edges[j];
      const double line = rules.rules[j].apply([&](double tt) {
        const RefPoint r = e.at(tt);
        const double rn = norm(r);
        const RefPoint u = (1.0 / rn) * r;
        const double rho_unit = t.jacobian_norm(u);
        double v = 0.0;
        for (const Term& term : terms) v += poly(term.coeffs, u) * continuation_kernel(term.shape, rn, rho_unit, t.h);
        return v;
      });
      contribution = e.distance * e.speed * line;
    }
    if (per_edge) (*per_edge)[j] = contribution;
    total += contribution;
  }
  return total;
}

}  // namespace

double integrate_T_minus1(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                          std::array<double, 3>* per_edge) {
  return integrate_level(-1, t, geo, rules, per_edge);
}

double integrate_T0(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                    std::array<double, 3>* per_edge) {
  return integrate_level(0, t, geo, rules, per_edge);
}

double integrate_T1(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                    std::array<double, 3>* per_edge) {
  return integrate_level(1, t, geo, rules, per_edge);
}

}  // namespace nearsing
