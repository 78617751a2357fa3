#include "quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"

namespace nearsing {

namespace {

struct LegendreEval {
  double p;   // P_n(x)
  double dp;  // P_n'(x)
};

LegendreEval legendre(std::size_t n, double x) {
  double p0 = 1.0, p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = p2;
  }
  return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule1D gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "gauss_legendre: n must be positive");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's asymptotic guess for the i-th largest root, refined by Newton.
    const double theta = std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5);
    double x = std::cos(theta) * (1.0 - (1.0 - 1.0 / nd) / (8.0 * nd * nd));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double dp = legendre(n, x).dp;
    const double w = 2.0 / ((1.0 - x) * (1.0 + x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

TriangleRule triangle_rule(std::size_t n) {
  const Rule1D g = gauss_legendre(n);
  TriangleRule rule;
  rule.nodes.reserve(n * n);
  rule.weights.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ti = g.nodes[i], tj = g.nodes[j];
      rule.nodes.push_back({0.5 * (1.0 - ti), 0.25 * (1.0 + ti) * (1.0 - tj)});
      rule.weights.push_back(0.125 * g.weights[i] * (1.0 + ti) * g.weights[j]);
    }
  }
  return rule;
}

ConformalMap::ConformalMap(double mu, double nu) : mu_(mu), nu_(nu) {
  if (!(nu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kInvalidArgument, "conformal map requires nu > 0");
  }
  a_ = std::asinh((1.0 - mu) / nu);
  b_ = std::asinh((1.0 + mu) / nu);
}

ConformalMap::Value ConformalMap::operator()(double z) const {
  const double s = a_ + b_;
  const double arg = s * (z - 1.0) / 2.0 + a_;
  // Endpoints are pinned exactly; the sinh round trip loses a few ulps.
  double g = mu_ + nu_ * std::sinh(arg);
  if (z == 1.0) g = 1.0;
  if (z == -1.0) g = -1.0;
  return {g, nu_ * std::cosh(arg) * s / 2.0};
}

Rule1D transplanted_rule(const Rule1D& base, const ConformalMap& map) {
  Rule1D out;
  out.nodes.resize(base.size());
  out.weights.resize(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    const auto [g, dg] = map(base.nodes[k]);
    out.nodes[k] = g;
    out.weights[k] = base.weights[k] * dg;
  }
  return out;
}

double near_singular_model_integral(double mu, double nu) {
  return std::asinh((1.0 - mu) / nu) + std::asinh((1.0 + mu) / nu);
}

double rho0(double x) { return x + std::sqrt(1.0 + x * x); }

double rho1(double x) {
  const double r = rho0(x);
  return r + std::sqrt(2.0 * x * r);
}

namespace {

double c_nu(double nu) { return (std::numbers::pi / 2.0) / std::asinh(2.0 / nu); }

void check_ranges(double mu, double nu) {
  if (!(std::abs(mu) <= 1.0) || !(nu > 0.0 && nu < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "predicted_rho requires |mu| <= 1 and 0 < nu < 1");
  }
}

}  // namespace

RhoBracket predicted_rho_bracket(RateCase which, double mu, double nu) {
  check_ranges(mu, nu);
  const bool centered = mu == 0.0;
  const bool endpoint = std::abs(mu) == 1.0;
  switch (which) {
    case RateCase::kMatched: {
      const double lo = rho0(c_nu(2.0 * nu));
      const double hi = rho1(c_nu(nu));
      if (centered) return {lo, lo};
      if (endpoint) return {hi, hi};
      return {lo, hi};
    }
    case RateCase::kGauss: {
      const double lo = rho0(nu);
      const double hi = rho1(nu / 2.0);
      if (centered) return {lo, lo};
      if (endpoint) return {hi, hi};
      return {lo, hi};
    }
    case RateCase::kMismatched:
      break;
  }
  throw Error(ErrorCode::kInvalidArgument, "bracket is only defined for matched and gauss cases");
}

double predicted_rho(RateCase which, double mu, double nu, double delta_mu, double delta_nu) {
  check_ranges(mu, nu);
  if (which != RateCase::kMismatched) return predicted_rho_bracket(which, mu, nu).lower;
  if (!(delta_nu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta_nu must be positive");
  const double imag = std::asinh(std::complex<double>(delta_mu, delta_nu)).imag() / (std::numbers::pi / 2.0);
  if (std::abs(mu) == 1.0) return rho0(2.0 * imag * c_nu(nu));
  return rho0(imag * c_nu(2.0 * nu));
}

}  // namespace nearsing
