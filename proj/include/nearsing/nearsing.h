#ifndef NEARSING_NEARSING_H
#define NEARSING_NEARSING_H

#include <stddef.h>

#if defined(_WIN32)
#define NS_API __declspec(dllexport)
#else
#define NS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. On failure ns_last_error() describes the problem (per thread). */
typedef enum ns_status {
  NS_OK = 0,
  NS_ERR_INVALID_ARGUMENT = 1,
  NS_ERR_DEGENERATE_ELEMENT = 2,
  NS_ERR_SINGULAR_EVALUATION = 3,
  NS_ERR_NO_CONVERGENCE = 4,
  NS_ERR_IO = 5,
  NS_ERR_INTERNAL = 6
} ns_status;

typedef enum ns_level { NS_LEVEL_TM1 = -1, NS_LEVEL_T0 = 0, NS_LEVEL_T1 = 1 } ns_level;

typedef enum ns_rule { NS_RULE_TRANSPLANTED = 0, NS_RULE_PLAIN_GAUSS = 1 } ns_rule;

typedef enum ns_rate_case { NS_RATE_MATCHED = 0, NS_RATE_GAUSS = 1, NS_RATE_MISMATCHED = 2 } ns_rate_case;

typedef struct ns_triangle ns_triangle;
typedef struct ns_density ns_density;

NS_API const char* ns_version(void);
NS_API const char* ns_last_error(void);

/* Elements. Node order: (0,0), (1,0), (0,1), (1/2,0), (1/2,1/2), (0,1/2);
   `nodes` holds 6 consecutive xyz triples. */
NS_API ns_status ns_triangle_create_quadratic(const double nodes[18], ns_triangle** out);
/* Quadratic element of the test family: node 5 at (a, b, c), the others on z = 0. */
NS_API ns_status ns_triangle_create_explicit(double a, double b, double c, ns_triangle** out);
/* Text file with lines "j x y z", j = 1..6; '#' starts a comment. */
NS_API ns_status ns_triangle_load(const char* path, ns_triangle** out);
NS_API void ns_triangle_destroy(ns_triangle* tri);
NS_API ns_status ns_triangle_map(const ns_triangle* tri, double x1, double x2, double out[3]);
/* Unit normal J1 x J2 / |J1 x J2| at (x1, x2). */
NS_API ns_status ns_triangle_normal(const ns_triangle* tri, double x1, double x2, double out[3]);

NS_API ns_status ns_density_create_constant(double value, ns_density** out);
/* Quadratic Lagrange basis function j = 1..6. */
NS_API ns_status ns_density_create_basis(int j, ns_density** out);
NS_API void ns_density_destroy(ns_density* density);

typedef struct ns_location {
  double preimage[2];
  double h;
  int has_direction; /* 0 when h is negligible */
  double direction[3];
  int iterations;
  int converged;
} ns_location;

NS_API ns_status ns_locate(const ns_triangle* tri, const double x0[3], ns_location* out);

typedef struct ns_single_options {
  ns_rule rule;
  unsigned points_per_n;  /* 1D points per edge = points_per_n * n */
  double near_edge;       /* transplant edges closer than this in reference space */
  double skip_tolerance;  /* drop edges at distance <= this; negative disables */
} ns_single_options;

NS_API void ns_single_options_default(ns_single_options* opts);

/* Integral of phi / |x - x0| over the element. `opts` may be NULL. */
NS_API ns_status ns_integrate_single(const ns_triangle* tri, const ns_density* density, const double x0[3],
                                     ns_level level, size_t n, const ns_single_options* opts, double* out);

/* Integral of phi_j exp(ikR)/R over the element. */
NS_API ns_status ns_integrate_helmholtz(const ns_triangle* tri, int basis_index, const double x0[3],
                                        double wavenumber, ns_level level, size_t n,
                                        const ns_single_options* opts, double* out_re, double* out_im);

/* Double integral of 1/|x - y| over element x element. `points` receives M = n^4.
   threads = 0 uses all hardware threads. */
NS_API ns_status ns_integrate_double_identical(const ns_triangle* tri, size_t n, ns_level level, unsigned threads,
                                               double* out, size_t* points);

/* Reference integrators (slow, accurate). */
NS_API ns_status ns_oracle_single(const ns_triangle* tri, const ns_density* density, const double x0[3],
                                  int refinement, double* value, double* estimated_error);
NS_API ns_status ns_oracle_double(const ns_triangle* tri, int refinement, double* value, double* estimated_error);

/* 1D rules on [-1, 1]; arrays hold n entries. */
NS_API ns_status ns_gauss_legendre(size_t n, double* nodes, double* weights);
NS_API ns_status ns_transplanted_rule(size_t n, double mu, double nu, double* nodes, double* weights);
/* Exact integral over [-1, 1] of 1/sqrt((t - mu)^2 + nu^2). */
NS_API ns_status ns_model_integral(double mu, double nu, double* out);
NS_API ns_status ns_predicted_rho(ns_rate_case which, double mu, double nu, double delta_mu, double delta_nu,
                                  double* out);

/* Least-squares slope of log(error) against log(points) over the last two
   thirds of the entries with error > 1e-13. *defined = 0 if too few remain. */
NS_API ns_status ns_fit_slope(size_t count, const double* points, const double* errors, double* slope,
                              int* defined);

#ifdef __cplusplus
}
#endif

#endif
