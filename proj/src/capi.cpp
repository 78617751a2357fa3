#include "nearsing/nearsing.h"

#include <exception>
#include <new>
#include <string>

#include "error.hpp"
#include "integrals.hpp"
#include "oracle.hpp"

struct ns_triangle {
  nearsing::CurvedTriangle tri;
};

struct ns_density {
  nearsing::DensityPolynomial phi;
};

namespace {

thread_local std::string last_error;

template <typename F>
ns_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return NS_OK;
  } catch (const nearsing::Error& e) {
    last_error = e.what();
    return static_cast<ns_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return NS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw nearsing::Error(nearsing::ErrorCode::kInvalidArgument, what);
}

nearsing::Vec3 vec(const double p[3]) { return {p[0], p[1], p[2]}; }

nearsing::Level level_of(ns_level l) {
  require(l >= NS_LEVEL_TM1 && l <= NS_LEVEL_T1, "unknown level");
  return static_cast<nearsing::Level>(l);
}

nearsing::SingleOptions options_of(const ns_single_options* o) {
  nearsing::SingleOptions s;
  if (!o) return s;
  require(o->rule == NS_RULE_TRANSPLANTED || o->rule == NS_RULE_PLAIN_GAUSS, "unknown rule");
  require(o->points_per_n > 0, "points_per_n must be positive");
  s.rule = o->rule == NS_RULE_PLAIN_GAUSS ? nearsing::EdgeRulePolicy::kPlainGauss
                                          : nearsing::EdgeRulePolicy::kTransplanted;
  s.points_per_n = o->points_per_n;
  s.near_edge = o->near_edge;
  s.skip_tolerance = o->skip_tolerance;
  return s;
}

void copy_rule(const nearsing::Rule1D& r, double* nodes, double* weights) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    nodes[i] = r.nodes[i];
    weights[i] = r.weights[i];
  }
}

}  // namespace

extern "C" {

const char* ns_version(void) { return "1.0.0"; }

const char* ns_last_error(void) { return last_error.c_str(); }

ns_status ns_triangle_create_quadratic(const double nodes[18], ns_triangle** out) {
  return guarded([&] {
    require(nodes && out, "null argument");
    std::array<nearsing::Vec3, 6> p;
    for (int j = 0; j < 6; ++j) p[static_cast<std::size_t>(j)] = vec(nodes + 3 * j);
    *out = new ns_triangle{nearsing::CurvedTriangle::quadratic(p)};
  });
}

ns_status ns_triangle_create_explicit(double a, double b, double c, ns_triangle** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new ns_triangle{nearsing::CurvedTriangle::explicit_quadratic(a, b, c)};
  });
}

ns_status ns_triangle_load(const char* path, ns_triangle** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new ns_triangle{nearsing::CurvedTriangle::load(path)};
  });
}

void ns_triangle_destroy(ns_triangle* tri) { delete tri; }

ns_status ns_triangle_map(const ns_triangle* tri, double x1, double x2, double out[3]) {
  return guarded([&] {
    require(tri && out, "null argument");
    const nearsing::Vec3 p = tri->tri.eval({x1, x2}, 0).f;
    out[0] = p.x;
    out[1] = p.y;
    out[2] = p.z;
  });
}

ns_status ns_triangle_normal(const ns_triangle* tri, double x1, double x2, double out[3]) {
  return guarded([&] {
    require(tri && out, "null argument");
    const nearsing::MapJet j = tri->tri.eval({x1, x2}, 1);
    const nearsing::Vec3 n = nearsing::cross(j.d1, j.d2);
    const double len = nearsing::norm(n);
    if (!(len > 0.0)) throw nearsing::Error(nearsing::ErrorCode::kDegenerateElement, "vanishing normal");
    out[0] = n.x / len;
    out[1] = n.y / len;
    out[2] = n.z / len;
  });
}

ns_status ns_density_create_constant(double value, ns_density** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new ns_density{nearsing::DensityPolynomial::constant(value)};
  });
}

ns_status ns_density_create_basis(int j, ns_density** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new ns_density{nearsing::DensityPolynomial::basis(j)};
  });
}

void ns_density_destroy(ns_density* density) { delete density; }

ns_status ns_locate(const ns_triangle* tri, const double x0[3], ns_location* out) {
  return guarded([&] {
    require(tri && x0 && out, "null argument");
    const nearsing::SingularityLocation loc = nearsing::newton_locate(tri->tri, vec(x0));
    out->preimage[0] = loc.preimage.x1;
    out->preimage[1] = loc.preimage.x2;
    out->h = loc.h;
    out->has_direction = loc.e_h ? 1 : 0;
    const nearsing::Vec3 e = loc.e_h.value_or(nearsing::Vec3{});
    out->direction[0] = e.x;
    out->direction[1] = e.y;
    out->direction[2] = e.z;
    out->iterations = loc.iterations;
    out->converged = loc.converged ? 1 : 0;
  });
}

void ns_single_options_default(ns_single_options* opts) {
  if (!opts) return;
  const nearsing::SingleOptions s;
  opts->rule = NS_RULE_TRANSPLANTED;
  opts->points_per_n = static_cast<unsigned>(s.points_per_n);
  opts->near_edge = s.near_edge;
  opts->skip_tolerance = s.skip_tolerance;
}

ns_status ns_integrate_single(const ns_triangle* tri, const ns_density* density, const double x0[3], ns_level level,
                              size_t n, const ns_single_options* opts, double* out) {
  return guarded([&] {
    require(tri && density && x0 && out, "null argument");
    *out = nearsing::integrate_single(tri->tri, density->phi, vec(x0), level_of(level), n, options_of(opts));
  });
}

ns_status ns_integrate_helmholtz(const ns_triangle* tri, int basis_index, const double x0[3], double wavenumber,
                                 ns_level level, size_t n, const ns_single_options* opts, double* out_re,
                                 double* out_im) {
  return guarded([&] {
    require(tri && x0 && out_re && out_im, "null argument");
    const std::complex<double> v = nearsing::integrate_single_helmholtz(
        tri->tri, basis_index, vec(x0), wavenumber, level_of(level), n, options_of(opts));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

ns_status ns_integrate_double_identical(const ns_triangle* tri, size_t n, ns_level level, unsigned threads,
                                        double* out, size_t* points) {
  return guarded([&] {
    require(tri && out, "null argument");
    const nearsing::DoubleResult r = nearsing::integrate_double_identical(tri->tri, n, level_of(level), threads);
    *out = r.value;
    if (points) *points = r.points;
  });
}

ns_status ns_oracle_single(const ns_triangle* tri, const ns_density* density, const double x0[3], int refinement,
                           double* value, double* estimated_error) {
  return guarded([&] {
    require(tri && density && x0 && value, "null argument");
    require(refinement >= 0 && refinement <= 4, "refinement must be in 0..4");
    const auto r = nearsing::oracle::duffy_single(tri->tri, density->phi, vec(x0), refinement);
    *value = r.value;
    if (estimated_error) *estimated_error = r.estimated_error;
  });
}

ns_status ns_oracle_double(const ns_triangle* tri, int refinement, double* value, double* estimated_error) {
  return guarded([&] {
    require(tri && value, "null argument");
    require(refinement >= 0 && refinement <= 3, "refinement must be in 0..3");
    const auto r = nearsing::oracle::relative_coordinate_double(tri->tri, refinement);
    *value = r.value;
    if (estimated_error) *estimated_error = r.estimated_error;
  });
}

ns_status ns_gauss_legendre(size_t n, double* nodes, double* weights) {
  return guarded([&] {
    require(nodes && weights, "null argument");
    copy_rule(nearsing::gauss_legendre(n), nodes, weights);
  });
}

ns_status ns_transplanted_rule(size_t n, double mu, double nu, double* nodes, double* weights) {
  return guarded([&] {
    require(nodes && weights, "null argument");
    copy_rule(nearsing::transplanted_rule(nearsing::gauss_legendre(n), nearsing::ConformalMap(mu, nu)), nodes,
              weights);
  });
}

ns_status ns_model_integral(double mu, double nu, double* out) {
  return guarded([&] {
    require(out, "null argument");
    require(nu > 0.0, "nu must be positive");
    *out = nearsing::near_singular_model_integral(mu, nu);
  });
}

ns_status ns_predicted_rho(ns_rate_case which, double mu, double nu, double delta_mu, double delta_nu, double* out) {
  return guarded([&] {
    require(out, "null argument");
    require(which >= NS_RATE_MATCHED && which <= NS_RATE_MISMATCHED, "unknown rate case");
    *out = nearsing::predicted_rho(static_cast<nearsing::RateCase>(which), mu, nu, delta_mu, delta_nu);
  });
}

ns_status ns_fit_slope(size_t count, const double* points, const double* errors, double* slope, int* defined) {
  return guarded([&] {
    require((count == 0 || (points && errors)) && slope && defined, "null argument");
    std::vector<nearsing::ConvergenceRow> rows;
    for (size_t i = 0; i < count; ++i) {
      rows.push_back({i, static_cast<std::size_t>(points[i]), 0.0, errors[i]});
    }
    const auto s = nearsing::fit_slope(rows);
    *defined = s ? 1 : 0;
    *slope = s.value_or(0.0);
  });
}

}  // extern "C"
