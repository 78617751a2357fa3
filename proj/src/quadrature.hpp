#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "vec.hpp"

namespace nearsing {

/// Weighted rule on [-1, 1]. Plain Gauss-Legendre rules and their transplanted
/// variants share this type; for transplanted rules the weights already carry g'.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  auto apply(F&& f) const {
    decltype(f(0.0)) sum{};
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(nodes[k]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule on [-1, 1]. Throws on n == 0.
Rule1D gauss_legendre(std::size_t n);

/// Collapsed-square rule on the reference triangle with n*n nodes.
struct TriangleRule {
  std::vector<RefPoint> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

TriangleRule triangle_rule(std::size_t n);

/// Parameters of the sinh map g_{μ,ν} that sends [-1,1] onto itself while
/// spreading nodes around the near-singularity μ ± iν.
class ConformalMap {
 public:
  ConformalMap(double mu, double nu);

  double mu() const { return mu_; }
  double nu() const { return nu_; }
  double a() const { return a_; }
  double b() const { return b_; }

  struct Value {
    double g;
    double dg;
  };
  Value operator()(double z) const;

 private:
  double mu_, nu_, a_, b_;
};

Rule1D transplanted_rule(const Rule1D& base, const ConformalMap& map);

/// ∫₋₁¹ dt / sqrt((t-μ)² + ν²) in closed form.
double near_singular_model_integral(double mu, double nu);

enum class RateCase { kMatched, kGauss, kMismatched };

/// Bernstein-ellipse parameter governing the convergence of the n-point rule
/// on f_{μ,ν}. For the mismatched case (transplanted map g_{μ,ν} applied to
/// f_{μ',ν'} with μ' = μ + δμ ν, ν' = δν ν) the value is a lower bound.
/// Parameters must satisfy |μ| ≤ 1 and 0 < ν < 1.
///
/// For μ strictly between 0 and ±1 the matched and Gauss cases only bracket ρ;
/// the lower end of the bracket is returned.
double predicted_rho(RateCase which, double mu, double nu, double delta_mu = 0.0,
                     double delta_nu = 1.0);

struct RhoBracket {
  double lower;
  double upper;
};
RhoBracket predicted_rho_bracket(RateCase which, double mu, double nu);

double rho0(double x);
double rho1(double x);

}  // namespace nearsing
