#include "integrals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "error.hpp"
#include "taylor.hpp"

namespace nearsing {

namespace {

// Quadrature nodes closer than this to x̂₀, with h below kCoincident·ρ,
// coincide with the singularity; the bounded residual there is dropped.
constexpr double kCoincident = 1e-9;

double plain_integral(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                      const TriangleRule& rule) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const MapJet j = tri.eval(rule.nodes[q], 1);
    sum += rule.weights[q] * phi.eval(rule.nodes[q]).value * norm(cross(j.d1, j.d2)) / norm(j.f - x0);
  }
  return sum;
}

}  // namespace

SingleIntegrator::SingleIntegrator(std::size_t n, SingleOptions opts)
    : n_(n), opts_(opts), tri_rule_(n >= 2 ? triangle_rule(n) : TriangleRule{}) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be at least 2");
}

SingleResult SingleIntegrator::operator()(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                                          Level level) const {
  const SingularityLocation loc = newton_locate(tri, x0);
  if (!loc.converged) throw Error(ErrorCode::kNoConvergence, "preimage search did not converge");
  return (*this)(tri, phi, x0, level, loc);
}

SingleResult SingleIntegrator::operator()(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0,
                                          Level level, const SingularityLocation& loc) const {
  SingleResult out;
  out.location = loc;
  const double h = loc.effective_h();
  if (h > opts_.far_h_ratio * tri.diameter() ||
      distance_to_reference_triangle(loc.preimage) > opts_.far_reference) {
    out.far_field = true;
    out.value = plain_integral(tri, phi, x0, tri_rule_);
    out.residual_part = out.value;
    return out;
  }

  const TaylorData taylor = make_taylor_data(tri, phi, loc);
  const EdgeGeometry geo = edge_geometry(loc.preimage);
  EdgeRuleOptions ro;
  ro.points = opts_.points_per_n * n_;
  ro.policy = opts_.rule;
  ro.near_edge = opts_.near_edge;
  ro.skip_tolerance = opts_.skip_tolerance;
  const EdgeRules rules = make_edge_rules(geo, ro);

  const int lv = static_cast<int>(level);
  double cont = integrate_T_minus1(taylor, geo, rules);
  if (lv >= 0) cont += integrate_T0(taylor, geo, rules);
  if (lv >= 1) cont += integrate_T1(taylor, geo, rules);

  const bool coincident = h <= kCoincident * tri.diameter();
  double residual = 0.0;
  for (std::size_t q = 0; q < tri_rule_.size(); ++q) {
    const RefPoint x = tri_rule_.nodes[q];
    if (coincident && norm(x - loc.preimage) <= kCoincident) continue;
    residual += tri_rule_.weights[q] * regularized_residual(tri, phi, x0, taylor, lv, x);
  }
  out.continuation_part = cont;
  out.residual_part = residual;
  out.value = cont + residual;
  return out;
}

double integrate_single(const CurvedTriangle& tri, const DensityPolynomial& phi, const Vec3& x0, Level level,
                        std::size_t n, const SingleOptions& opts) {
  return SingleIntegrator(n, opts)(tri, phi, x0, level).value;
}

std::complex<double> integrate_single_helmholtz(const CurvedTriangle& tri, int basis_index, const Vec3& x0,
                                                double wavenumber, Level level, std::size_t n,
                                                const SingleOptions& opts) {
  if (!(wavenumber >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "wavenumber must be non-negative");
  const DensityPolynomial phi = DensityPolynomial::basis(basis_index);
  const SingleIntegrator single(n, opts);
  const double singular = single(tri, phi, x0, level).value;
  if (wavenumber == 0.0) return {singular, 0.0};

  const TriangleRule& rule = single.triangle();
  double re = 0.0, im = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const MapJet j = tri.eval(rule.nodes[q], 1);
    const double r = norm(j.f - x0);
    const double w = rule.weights[q] * phi.eval(rule.nodes[q]).value * norm(cross(j.d1, j.d2));
    if (r == 0.0) {
      im += w * wavenumber;
      continue;
    }
    const double half = std::sin(0.5 * wavenumber * r);
    re += w * (-2.0 * half * half / r);
    im += w * std::sin(wavenumber * r) / r;
  }
  return {singular + re, im};
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

DoubleResult integrate_double_identical(const CurvedTriangle& tri, std::size_t n, Level level, unsigned threads) {
  const SingleIntegrator single(n);
  const DensityPolynomial one = DensityPolynomial::constant(1.0);
  const TriangleRule& outer = single.triangle();
  std::vector<double> inner(outer.size());
  parallel_for(outer.size(), threads, [&](std::size_t m) {
    const RefPoint y = outer.nodes[m];
    const MapJet j = tri.eval(y, 1);
    inner[m] = outer.weights[m] * norm(cross(j.d1, j.d2)) * single(tri, one, j.f, level).value;
  });
  DoubleResult r;
  for (double v : inner) r.value += v;
  r.points = outer.size() * outer.size();
  return r;
}

std::optional<double> fit_slope(const std::vector<ConvergenceRow>& rows) {
  std::vector<const ConvergenceRow*> usable;
  for (const auto& row : rows) {
    if (row.relative_error > 1e-13 && std::isfinite(row.relative_error)) usable.push_back(&row);
  }
  const std::size_t skip = usable.size() / 3;
  if (usable.size() - skip < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(usable.size() - skip);
  for (std::size_t i = skip; i < usable.size(); ++i) {
    const double x = std::log(static_cast<double>(usable[i]->points));
    const double y = std::log(usable[i]->relative_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

ConvergenceRecord convergence_study(const std::function<double(std::size_t)>& compute, double reference,
                                    const std::vector<std::size_t>& ns,
                                    const std::function<std::size_t(std::size_t)>& points) {
  ConvergenceRecord rec;
  for (std::size_t n : ns) {
    const double v = compute(n);
    rec.rows.push_back({n, points(n), v, std::abs(v - reference) / std::abs(reference)});
  }
  rec.slope = fit_slope(rec.rows);
  return rec;
}

}  // namespace nearsing
