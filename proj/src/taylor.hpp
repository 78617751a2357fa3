#pragma once

#include <array>
#include <optional>

#include "geometry.hpp"
#include "preimage.hpp"

namespace nearsing {

/// Coefficients of the expansions of R² = |F(x̂) - x₀|² and ψR⁻¹ about the
/// preimage x̂₀. Monomial convention: coefficient i of a degree-m set
/// multiplies δx̂₁^{m+1-i} δx̂₂^{i-1}.
struct R2Coefficients {
  std::array<double, 3> a{};  // h-weighted, cubic order
  std::array<double, 4> b{};  // h-weighted, quartic order
  std::array<double, 4> c{};
  std::array<double, 5> d{};
};

struct PsiRCoefficients {
  std::array<double, 4> e{};
  std::array<double, 5> f{};
  std::array<double, 5> g{};
  std::array<double, 7> h{};
  std::array<double, 6> ac{};  // h-weighted product of the a and c sets
};

/// Appendix-style R² coefficients from the map derivatives at x̂₀. e_h may be
/// absent, in which case the h-weighted sets are zero.
R2Coefficients r2_coeffs(const MapJet& jet, const std::optional<Vec3>& e_h);

PsiRCoefficients psi_r_coeffs(const R2Coefficients& r2, const MetricDensity& psi);

/// Everything the subtraction terms T₋₁, T₀, T₁ need, computed once per
/// (element, density, x₀).
struct TaylorData {
  RefPoint x0;
  double h = 0.0;
  std::optional<Vec3> e_h;
  MapJet jet;  // map derivatives at x̂₀ (order 3)
  Vec3 j1, j2;
  MetricDensity psi;
  R2Coefficients r2;
  PsiRCoefficients pr;

  double jacobian_norm(RefPoint delta) const { return norm(delta.x1 * j1 + delta.x2 * j2); }
};

TaylorData make_taylor_data(const CurvedTriangle& tri, const DensityPolynomial& phi,
                            const SingularityLocation& loc);

/// Single term T_level, level ∈ {-1, 0, 1}. Throws kSingularEvaluation at
/// x̂ = x̂₀ when h = 0.
double eval_T(int level, const TaylorData& taylor, RefPoint x);

/// ψ(x̂)/|F(x̂) - x₀| minus T₋₁ + … + T_level.
double regularized_residual(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                            const TaylorData& taylor, int level, RefPoint x);

/// Homogeneous polynomial Σ coeffs[i] δ₁^{m-i} δ₂^{i}, m = coeffs.size() - 1.
template <std::size_t N>
double monomial_sum(const std::array<double, N>& coeffs, RefPoint d) {
  double sum = 0.0, p2 = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    double p1 = 1.0;
    for (std::size_t k = 0; k + 1 + i < N; ++k) p1 *= d.x1;
    sum += coeffs[i] * p1 * p2;
    p2 *= d.x2;
  }
  return sum;
}

}  // namespace nearsing
