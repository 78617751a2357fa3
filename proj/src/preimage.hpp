#pragma once

#include <optional>

#include "geometry.hpp"

namespace nearsing {

struct CostDerivatives {
  double value;          // E = |F(x̂) - x₀|²
  double g1, g2;         // ∇E
  double h11, h12, h22;  // Hessian of E
};

CostDerivatives cost_grad_hessian(const CurvedTriangle& tri, const Vec3& x0, RefPoint p);

/// Result of the closest-point search on the surface spanned by the element.
struct SingularityLocation {
  RefPoint preimage;
  double h = 0.0;            // |F(x̂₀) - x₀|
  std::optional<Vec3> e_h;   // (F(x̂₀) - x₀)/h; absent when h ≤ 1e-14·ρ
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;

  /// Offset used by the subtraction formulas: h, or 0 when e_h is absent.
  double effective_h() const { return e_h ? h : 0.0; }
};

struct NewtonOptions {
  int max_iterations = 50;
  double beta = 1e-3;            // Hessian shift floor
  double backtrack = 0.5;        // α ← backtrack·α
  double armijo = 1e-4;
  double tolerance_scale = 1e-12;  // stop when |∇E| ≤ tolerance_scale·ρ²
  RefPoint start{0.0, 0.0};
};

/// Safeguarded Newton minimisation of E starting at (0,0), restarted once from
/// the centroid. The result is flagged non-converged rather than thrown.
SingularityLocation newton_locate(const CurvedTriangle& tri, const Vec3& x0, const NewtonOptions& opts = {});

}  // namespace nearsing
