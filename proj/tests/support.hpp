#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "geometry.hpp"

namespace testing {

using nearsing::CurvedTriangle;
using nearsing::RefPoint;
using nearsing::Vec3;

inline CurvedTriangle flat_triangle() { return CurvedTriangle::explicit_quadratic(0.5, 0.5, 0.0); }
inline CurvedTriangle exp_triangle() { return CurvedTriangle::explicit_quadratic(0.6, 0.7, 0.5); }

// A cubic element, for the third-derivative paths that quadratic elements never exercise.
inline CurvedTriangle cubic_triangle() {
  return CurvedTriangle(3, [](RefPoint p, int order) {
    const double x = p.x1, y = p.x2;
    nearsing::MapJet j;
    j.f = {x + 0.2 * x * y + 0.1 * x * x * x, y + 0.15 * x * x * y - 0.05 * y * y * y + 0.1 * x * y,
           0.4 * x * y + 0.3 * x * x - 0.2 * y * y * y + 0.1 * x * x * y};
    if (order >= 1) {
      j.d1 = {1 + 0.2 * y + 0.3 * x * x, 0.3 * x * y + 0.1 * y, 0.4 * y + 0.6 * x + 0.2 * x * y};
      j.d2 = {0.2 * x, 1 + 0.15 * x * x - 0.15 * y * y + 0.1 * x, 0.4 * x - 0.6 * y * y + 0.1 * x * x};
    }
    if (order >= 2) {
      j.d11 = {0.6 * x, 0.3 * y, 0.6 + 0.2 * y};
      j.d12 = {0.2, 0.3 * x + 0.1, 0.4 + 0.2 * x};
      j.d22 = {0.0, -0.3 * y, -1.2 * y};
    }
    if (order >= 3) {
      j.d111 = {0.6, 0, 0};
      j.d112 = {0, 0.3, 0.2};
      j.d122 = {0, 0, 0};
      j.d222 = {0, -0.3, -1.2};
    }
    return j;
  });
}

// φ = 1 + x̂₁ - 2x̂₂ + 0.5x̂₁² + x̂₁x̂₂ + 0.25x̂₂², a generic quadratic density.
inline nearsing::DensityPolynomial quadratic_density() {
  return nearsing::DensityPolynomial(2, [](RefPoint p) {
    const double x = p.x1, y = p.x2;
    return nearsing::DensityJet{1 + x - 2 * y + 0.5 * x * x + x * y + 0.25 * y * y, 1 + x + y, -2 + x + 0.5 * y,
                                1.0, 1.0, 0.5};
  });
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Relative error with a floor on the reference magnitude, for quantities that may vanish.
inline double rel_floor(double a, double b, double floor) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

inline Vec3 unit_normal(const CurvedTriangle& tri, RefPoint p) {
  const auto j = tri.eval(p, 1);
  const Vec3 n = nearsing::cross(j.d1, j.d2);
  return (1.0 / nearsing::norm(n)) * n;
}

// Uniform points strictly inside the reference triangle.
inline RefPoint random_interior(std::mt19937& gen, double margin = 0.05) {
  std::uniform_real_distribution<double> u(margin, 1.0 - 2.0 * margin);
  for (;;) {
    const RefPoint p{u(gen), u(gen)};
    if (p.x1 + p.x2 <= 1.0 - margin) return p;
  }
}

}  // namespace testing
