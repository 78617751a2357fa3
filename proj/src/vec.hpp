#pragma once

#include <array>
#include <cmath>

namespace nearsing {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// hypot avoids underflow for tiny vectors (edge integrals at ŝ ~ 1e-300).
inline double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

/// Point of the (x̂₁, x̂₂) reference plane. Not restricted to the reference triangle.
struct RefPoint {
  double x1 = 0.0, x2 = 0.0;
};

constexpr RefPoint operator+(RefPoint a, RefPoint b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
constexpr RefPoint operator-(RefPoint a, RefPoint b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
constexpr RefPoint operator*(double s, RefPoint a) { return {s * a.x1, s * a.x2}; }
inline double norm(RefPoint a) { return std::hypot(a.x1, a.x2); }

constexpr bool inside_reference_triangle(RefPoint p) {
  return p.x1 >= 0.0 && p.x2 >= 0.0 && p.x1 + p.x2 <= 1.0;
}

/// Euclidean distance from p to the closed reference triangle (0 inside).
double distance_to_reference_triangle(RefPoint p);

}  // namespace nearsing
