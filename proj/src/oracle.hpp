#pragma once

#include <complex>
#include <functional>

#include "geometry.hpp"
#include "preimage.hpp"

namespace nearsing::oracle {

// Reference integrators for tests and reference values. They share the
// element/density evaluators with the main pipeline but none of its
// quadrature, subtraction or continuation code.

struct OracleResult {
  double value = 0.0;
  double estimated_error = 0.0;  // |level L+1 - level L|
  int subdivision_count = 0;     // tensor panels used at the finer level
};

struct ComplexOracleResult {
  std::complex<double> value;
  double estimated_error = 0.0;
  int subdivision_count = 0;
};

/// ∫_T ψ/|x - x₀| by splitting T̂ at x̂₀ into right triangles and a Duffy
/// collapse onto x̂₀, with geometric grading toward x̂₀ and toward the foot of
/// each edge. Tensor Gauss order 16·2^refinement per panel.
OracleResult duffy_single(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                          int refinement = 1);

/// ∫_T̂ f dx̂ for an f singular or nearly singular at `center` only, with
/// `length_scale` the width of the near-singularity (0 for a point singularity).
OracleResult duffy_split(RefPoint center, double length_scale, const std::function<double(RefPoint)>& f,
                         int refinement = 1);

/// Same split applied to φ_j·e^{ikR}/R.
ComplexOracleResult duffy_single_helmholtz(const CurvedTriangle& tri, int basis_index, const Vec3& x0,
                                           double wavenumber, int refinement = 1);

/// ∫_T∫_T dS dS / |x - y| via the identical-panel relative-coordinate
/// decomposition into six regular 4D integrals. Gauss order 8·2^refinement per
/// coordinate.
OracleResult relative_coordinate_double(const CurvedTriangle& tri, int refinement = 1);

/// Gauss-Legendre on [0, 1], computed in extended precision independently of
/// the main quadrature module.
struct UnitRule {
  std::vector<double> nodes, weights;
};
UnitRule unit_gauss(int n);

}  // namespace nearsing::oracle
