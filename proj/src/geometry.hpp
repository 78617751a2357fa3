#pragma once

#include <array>
#include <functional>
#include <string>

#include "vec.hpp"

namespace nearsing {

/// Value and partial derivatives of a map from the reference plane to R³.
/// Entries beyond the requested order are left zero.
struct MapJet {
  Vec3 f;
  Vec3 d1, d2;               // J₁, J₂
  Vec3 d11, d12, d22;        // second partials
  Vec3 d111, d112, d122, d222;
};

struct BasisValue {
  double value;
  double d1, d2;
};

/// Quadratic Lagrange basis φ_j, j = 1..6. Nodes 1-3 are the vertices
/// (0,0), (1,0), (0,1); 4 is the midpoint of 1-2, 5 of 2-3 and 6 of 1-3.
BasisValue basis_eval(int j, RefPoint p);

/// Reference coordinates of node j = 1..6.
RefPoint reference_node(int j);

/// A curved triangle F: T̂ → R³ given by its derivative evaluator.
/// Quadratic elements are built from six control points; other degrees are
/// supplied as an evaluator returning derivatives to the requested order.
class CurvedTriangle {
 public:
  using Evaluator = std::function<MapJet(RefPoint, int order)>;

  CurvedTriangle(int degree, Evaluator evaluator);

  static CurvedTriangle quadratic(const std::array<Vec3, 6>& nodes);

  /// The curved test element with a₅ = (a, b, c) and the other five nodes on
  /// the reference triangle in the z = 0 plane.
  static CurvedTriangle explicit_quadratic(double a, double b, double c);

  /// Reads "j x y z" lines (j = 1..6, any order, '#' comments allowed).
  static CurvedTriangle load(const std::string& path);

  MapJet eval(RefPoint p, int order = 1) const;
  int degree() const { return degree_; }

  /// Max pairwise distance of the images of the six reference nodes, plus 10%.
  double diameter() const { return diameter_; }

  /// Control points for quadratic elements; images of the reference nodes otherwise.
  const std::array<Vec3, 6>& nodes() const { return nodes_; }

  /// Same element with every node passed through x ↦ s·R·x + t (R given row-wise).
  CurvedTriangle transformed(const std::array<Vec3, 3>& rotation, double scale,
                             const Vec3& translation) const;

 private:
  int degree_;
  Evaluator evaluator_;
  std::array<Vec3, 6> nodes_{};
  double diameter_ = 0.0;
};

struct DensityJet {
  double value = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
};

/// Polynomial density φ on the reference triangle.
class DensityPolynomial {
 public:
  using Evaluator = std::function<DensityJet(RefPoint)>;

  DensityPolynomial(int degree, Evaluator evaluator);

  static DensityPolynomial constant(double c);
  static DensityPolynomial basis(int j);

  DensityJet eval(RefPoint p) const { return evaluator_(p); }
  int degree() const { return degree_; }

 private:
  int degree_;
  Evaluator evaluator_;
};

/// ψ = φ·|J₁×J₂| with analytic first and second partials.
struct MetricDensity {
  double value;
  double d1, d2;
  double d11, d12, d22;
};

/// Throws ErrorCode::kDegenerateElement when |J₁×J₂| < 1e-12·ρ².
MetricDensity metric_density(const CurvedTriangle& tri, const DensityPolynomial& phi, RefPoint p);

/// |J₁×J₂| only; used on hot paths that need no derivatives.
double area_element(const CurvedTriangle& tri, RefPoint p);

}  // namespace nearsing
