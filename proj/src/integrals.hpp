#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "continuation.hpp"
#include "geometry.hpp"
#include "preimage.hpp"
#include "quadrature.hpp"

namespace nearsing {

/// Subtraction through T₋₁, T₀ or T₁.
enum class Level { kTm1 = -1, kT0 = 0, kT1 = 1 };

struct SingleOptions {
  EdgeRulePolicy rule = EdgeRulePolicy::kTransplanted;
  std::size_t points_per_n = 10;  // 1D points per edge = points_per_n·n
  double near_edge = 0.1;
  double skip_tolerance = 0.0;
  double far_h_ratio = 0.5;       // far field when h > far_h_ratio·ρ
  double far_reference = 0.5;     // ... or dist(x̂₀, T̂) > far_reference
};

struct SingleResult {
  double value = 0.0;
  double continuation_part = 0.0;
  double residual_part = 0.0;
  bool far_field = false;
  SingularityLocation location;
};

/// Rules for one n, reusable across many evaluation points.
class SingleIntegrator {
 public:
  SingleIntegrator(std::size_t n, SingleOptions opts = {});

  SingleResult operator()(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                          Level level) const;
  /// Variant with the preimage search already done.
  SingleResult operator()(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0, Level level,
                          const SingularityLocation& loc) const;

  std::size_t n() const { return n_; }
  const TriangleRule& triangle() const { return tri_rule_; }

 private:
  std::size_t n_;
  SingleOptions opts_;
  TriangleRule tri_rule_;
};

/// ∫_T φ/|x - x₀| dS. Throws Error(kNoConvergence) when the preimage search fails.
double integrate_single(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0, Level level,
                        std::size_t n, const SingleOptions& opts = {});

/// ∫_T φ_j e^{ikR}/R dS, split into the smooth part (e^{ikR}-1)/R by the
/// triangle rule and the 1/R part by integrate_single.
std::complex<double> integrate_single_helmholtz(const CurvedTriangle& tri, int basis_index, const Vec3& x0,
                                                double wavenumber, Level level, std::size_t n,
                                                const SingleOptions& opts = {});

struct DoubleResult {
  double value = 0.0;
  std::size_t points = 0;  // M = N², N = n²
};

/// ∫_T∫_T dS dS/|x - y|. The N outer integrals run on `threads` workers
/// (0 = hardware concurrency).
DoubleResult integrate_double_identical(const CurvedTriangle& tri, std::size_t n, Level level,
                                        unsigned threads = 0);

struct ConvergenceRow {
  std::size_t n;
  std::size_t points;
  double value;
  double relative_error;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;
  std::optional<double> slope;  // absent when fewer than two usable rows
};

/// Least-squares slope of log(error) vs log(points) over the final two-thirds
/// of the rows whose error exceeds 1e-13.
std::optional<double> fit_slope(const std::vector<ConvergenceRow>& rows);

/// Evaluates `compute(n)` for each n and compares with `reference`.
/// `points(n)` gives the abscissa (n² for 2D studies, n⁴ for 4D ones).
ConvergenceRecord convergence_study(const std::function<double(std::size_t)>& compute, double reference,
                                    const std::vector<std::size_t>& ns,
                                    const std::function<std::size_t(std::size_t)>& points);

/// Runs `body(i)` for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace nearsing
