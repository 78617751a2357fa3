#pragma once

#include <array>
#include <cstddef>

#include "quadrature.hpp"
#include "taylor.hpp"

namespace nearsing {

/// One edge of the shifted triangle T̂ - x̂₀, parametrised as
/// r(t) = start + (t+1)/2·direction for t ∈ [-1, 1].
struct ShiftedEdge {
  RefPoint start;
  RefPoint direction;
  double speed;      // |r'(t)|
  RefPoint normal;   // outward unit normal
  double distance;   // signed distance ŝ from the origin to the edge line
  double map_mu;     // transplanted-map centre along t
  double map_nu;     // transplanted-map width, 2|ŝ|

  RefPoint at(double t) const { return start + (0.5 * (t + 1.0)) * direction; }
};

struct EdgeGeometry {
  std::array<ShiftedEdge, 3> edges;
};

EdgeGeometry edge_geometry(RefPoint x0);

enum class EdgeRulePolicy { kTransplanted, kPlainGauss };

struct EdgeRuleOptions {
  std::size_t points = 20;
  EdgeRulePolicy policy = EdgeRulePolicy::kTransplanted;
  double near_edge = 0.1;        // transplant when |ŝ| < near_edge
  double skip_tolerance = 0.0;   // skip edges with |ŝ| ≤ this; negative disables skipping
};

struct EdgeRules {
  std::array<Rule1D, 3> rules;
  std::array<bool, 3> active{};
  std::array<bool, 3> transplanted{};
};

EdgeRules make_edge_rules(const EdgeGeometry& geo, const EdgeRuleOptions& opts = {});

/// Closed-form (series near ρ ≪ h) value of
///   |r|^m · h^{r+2} ∫_h^∞ u^{k-r-3} (ρ² + u²)^{-p/2} du,   ρ = |r|·ρ̃, r = m + k - p,
/// which is the continuation kernel multiplying a degree-m monomial in r̂ = r/|r|.
/// At h = 0 this is the homogeneous limit |r|^{m-p} ρ̃^{-p}/(r+2) (zero when k > 0).
struct KernelShape {
  int m, k, p;
};
double continuation_kernel(KernelShape shape, double r_norm, double rho_unit, double h);

/// ∫_T̂ T_ℓ dS reduced to the three edges. The per-edge values are returned in
/// `per_edge` when non-null (already multiplied by ŝ_j).
double integrate_T_minus1(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                          std::array<double, 3>* per_edge = nullptr);
double integrate_T0(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                    std::array<double, 3>* per_edge = nullptr);
double integrate_T1(const TaylorData& t, const EdgeGeometry& geo, const EdgeRules& rules,
                    std::array<double, 3>* per_edge = nullptr);

}  // namespace nearsing
