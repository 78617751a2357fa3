// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "continuation.hpp"
#include "integrals.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "taylor.hpp"

using namespace nearsing;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

const char* level_name(Level l) {
  switch (l) {
    case Level::kTm1: return "T-1";
    case Level::kT0: return "T0";
    default: return "T1";
  }
}

struct Window {
  double lo, hi;
};
constexpr Window kWindows2D[3] = {{-1.2, -0.85}, {-2.0, -1.2}, {-2.3, -1.8}};
constexpr Level kLevels[3] = {Level::kTm1, Level::kT0, Level::kT1};

Vec3 unit_normal(const CurvedTriangle& tri, RefPoint p) {
  const MapJet j = tri.eval(p, 1);
  const Vec3 n = cross(j.d1, j.d2);
  return (1.0 / norm(n)) * n;
}

// Reference value, required to be self-consistent across two oracle refinements.
double single_reference(const CurvedTriangle& tri, const Vec3& x0, bool& consistent) {
  const DensityPolynomial one = DensityPolynomial::constant(1.0);
  const oracle::OracleResult a = oracle::duffy_single(tri, one, x0, 1);
  const oracle::OracleResult b = oracle::duffy_single(tri, one, x0, 2);
  const double spread = std::abs(a.value - b.value) / std::abs(b.value);
  consistent = spread < 1e-10;
  std::printf("  reference %.15e (refinement spread %.1e)\n", b.value, spread);
  return b.value;
}

std::vector<ConvergenceRecord> study_2d(const CurvedTriangle& tri, const Vec3& x0, double reference,
                                        const SingleOptions& opts, std::size_t nmin, std::size_t nmax) {
  const DensityPolynomial one = DensityPolynomial::constant(1.0);
  const SingularityLocation loc = newton_locate(tri, x0);
  std::vector<std::size_t> ns;
  for (std::size_t n = nmin; n <= nmax; ++n) ns.push_back(n);
  std::vector<ConvergenceRecord> out;
  for (Level level : kLevels) {
    out.push_back(convergence_study(
        [&](std::size_t n) { return SingleIntegrator(n, opts)(tri, one, x0, level, loc).value; }, reference, ns,
        [](std::size_t n) { return n * n; }));
  }
  return out;
}

bool report_slopes(const std::vector<ConvergenceRecord>& recs, const Window* windows) {
  bool ok = true;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    const auto& r = recs[k];
    const bool has = r.slope.has_value();
    const bool in = has && within(*r.slope, windows[k].lo, windows[k].hi);
    std::printf("  %-3s slope %s (window [%.2f, %.2f]) error at N=%zu: %.2e %s\n", level_name(kLevels[k]),
                has ? std::to_string(*r.slope).c_str() : "undefined", windows[k].lo, windows[k].hi,
                r.rows.back().points, r.rows.back().relative_error, in ? "ok" : "OUT");
    ok = ok && in;
  }
  return ok;
}

void criterion_center() {
  std::printf("criterion 1: centre singularity, a=0.6 b=0.7 c=0.5, x0=F(0.2,0.4), n=2..128\n");
  const auto t0 = std::chrono::steady_clock::now();
  const CurvedTriangle tri = CurvedTriangle::explicit_quadratic(0.6, 0.7, 0.5);
  const Vec3 x0 = tri.eval({0.2, 0.4}, 0).f;
  bool consistent = false;
  const double ref = single_reference(tri, x0, consistent);
  const bool slopes = report_slopes(study_2d(tri, x0, ref, {}, 2, 128), kWindows2D);
  const double elapsed = seconds_since(t0);
  std::printf("  runtime %.1f s (limit 120 s)\n", elapsed);
  verdict(1, slopes && consistent && elapsed <= 120.0, "2D centre-singularity slopes");
}

void criterion_near() {
  std::printf("criterion 2: near-singular, x0=F(0.2,0.4)+1e-4*n, n=2..128\n");
  const CurvedTriangle tri = CurvedTriangle::explicit_quadratic(0.6, 0.7, 0.5);
  const Vec3 x0 = tri.eval({0.2, 0.4}, 0).f + 1e-4 * unit_normal(tri, {0.2, 0.4});
  bool consistent = false;
  const double ref = single_reference(tri, x0, consistent);
  const bool slopes = report_slopes(study_2d(tri, x0, ref, {}, 2, 128), kWindows2D);
  verdict(2, slopes && consistent, "2D near-singular slopes");
}

void criterion_edge() {
  const double eps = 1e-4;
  std::printf("criterion 3: near edge, preimage (0.5, 1e-4), h=0, n=2..128\n");
  const CurvedTriangle tri = CurvedTriangle::explicit_quadratic(0.6, 0.7, 0.5);
  const Vec3 x0 = tri.eval({0.5, eps}, 0).f;
  bool consistent = false;
  const double ref = single_reference(tri, x0, consistent);
  std::printf("  transplanted 1D rules:\n");
  const bool slopes = report_slopes(study_2d(tri, x0, ref, {}, 2, 128), kWindows2D);

  // Plain Gauss: total relative error over the tail n = 64..128.
  std::printf("  plain 1D Gauss, tail n=64..128:\n");
  SingleOptions plain;
  plain.rule = EdgeRulePolicy::kPlainGauss;
  const auto recs = study_2d(tri, x0, ref, plain, 64, 128);
  bool plateau_ok = true;
  for (std::size_t k = 0; k < 3; ++k) {
    double lo = 1e300, hi = 0.0, mean_log = 0.0;
    for (const auto& row : recs[k].rows) {
      lo = std::min(lo, row.relative_error);
      hi = std::max(hi, row.relative_error);
      mean_log += std::log(row.relative_error);
    }
    const double level = std::exp(mean_log / recs[k].rows.size());
    const double target = std::pow(eps, double(k + 1)) * std::log(2.0 / eps);
    const bool flat = hi / lo < 10.0;
    const bool near = level / target < 10.0 && target / level < 10.0;
    std::printf("  %-3s error range [%.2e, %.2e], geometric mean %.2e, target eps^%zu log(2/eps) = %.2e %s\n",
                level_name(kLevels[k]), lo, hi, level, k + 1, target, flat && near ? "ok" : "OUT");
    plateau_ok = plateau_ok && flat && near;
  }

  // Diagnostic: 1D error of each subtraction integral on its own.
  const SingularityLocation loc = newton_locate(tri, x0);
  const TaylorData t = make_taylor_data(tri, DensityPolynomial::constant(1.0), loc);
  const EdgeGeometry geo = edge_geometry(t.x0);
  EdgeRuleOptions fine;
  fine.points = 2000;
  const EdgeRules exact_rules = make_edge_rules(geo, fine);
  fine.points = 1280;
  fine.policy = EdgeRulePolicy::kPlainGauss;
  const EdgeRules gauss_rules = make_edge_rules(geo, fine);
  using Fn = double (*)(const TaylorData&, const EdgeGeometry&, const EdgeRules&, std::array<double, 3>*);
  const Fn fns[3] = {integrate_T_minus1, integrate_T0, integrate_T1};
  std::printf("  per-term 1D errors of plain Gauss at 1280 points (relative to the total):\n");
  for (std::size_t k = 0; k < 3; ++k) {
    const double e = std::abs(fns[k](t, geo, gauss_rules, nullptr) - fns[k](t, geo, exact_rules, nullptr));
    std::printf("    I%-2d %.2e (eps^%zu log(2/eps) = %.2e)\n", int(k) - 1, e / std::abs(ref), k + 1,
                std::pow(eps, double(k + 1)) * std::log(2.0 / eps));
  }
  verdict(3, slopes && consistent && plateau_ok, "near-edge slopes (transplanted) and plateaus (plain Gauss)");
}

double model_error(const Rule1D& rule, double mu, double nu) {
  const double exact = near_singular_model_integral(mu, nu);
  return std::abs(rule.apply([&](double t) { return 1.0 / std::hypot(t - mu, nu); }) - exact) / exact;
}

// ρ from a least-squares fit of log(error) ≈ c - 2n log ρ.
double fitted_rho(const std::vector<double>& ns, const std::vector<double>& errs) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += ns[i];
    my += std::log(errs[i]);
  }
  mx /= ns.size();
  my /= ns.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (ns[i] - mx) * (std::log(errs[i]) - my);
    sxx += (ns[i] - mx) * (ns[i] - mx);
  }
  return std::exp(-0.5 * sxy / sxx);
}

void criterion_rules() {
  std::printf("criterion 4: 1D rules on f(t) = 1/sqrt((t-mu)^2 + nu^2)\n");
  bool ok = true;

  std::mt19937 gen(20240601);
  std::uniform_real_distribution<double> umu(-1.0, 1.0), ulognu(std::log(1e-4), std::log(0.8));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double mu = umu(gen), nu = std::exp(ulognu(gen));
    worst = std::max(worst, model_error(transplanted_rule(gauss_legendre(1), ConformalMap(mu, nu)), mu, nu));
  }
  std::printf("  (a) matched map, n=1, 10 random (mu, nu): worst relative error %.1e (limit 1e-13)\n", worst);
  ok = ok && worst <= 1e-13;

  struct Range {
    double eps;
    int nmin, nmax;
  };
  for (const Range r : {Range{1e-2, 10, 100}, Range{1e-3, 20, 300}}) {
    std::vector<double> ns, errs;
    for (int n = r.nmin; n <= r.nmax; n += 2) {
      const double e = model_error(gauss_legendre(std::size_t(n)), -1.0, 2.0 * r.eps);
      if (e > 1e-13) {
        ns.push_back(n);
        errs.push_back(e);
      }
    }
    const double rho = fitted_rho(ns, errs);
    const double want = 1.0 + std::sqrt(2.0 * r.eps);
    const double ratio = std::log(rho) / std::log(want);
    std::printf("  (b) Gauss, mu=-1, nu=2eps, eps=%g, n=%d..%d: fitted rho %.5f, 1+sqrt(2eps) = %.5f, "
                "rate ratio %.3f\n",
                r.eps, r.nmin, r.nmax, rho, want, ratio);
    ok = ok && std::abs(ratio - 1.0) <= 0.2;
  }

  for (const double eps : {1e-2, 1e-3}) {
    const ConformalMap map(0.0, 2.0 * eps);
    std::vector<double> ns, errs;
    for (int n = 2; n <= 60; ++n) {
      const double e = model_error(transplanted_rule(gauss_legendre(std::size_t(n)), map), 0.0, 5.0 * eps);
      if (e > 1e-13) {
        ns.push_back(n);
        errs.push_back(e);
      }
    }
    const double rho = fitted_rho(ns, errs);
    const double bound = predicted_rho(RateCase::kMismatched, 0.0, 2.0 * eps, 0.0, 2.5);
    std::printf("  (c) map g(0, 2eps) on f(0, 5eps), eps=%g, %zu usable n: fitted rho %.4f >= bound %.4f %s\n", eps,
                ns.size(), rho, bound, rho >= bound ? "ok" : "OUT");
    ok = ok && ns.size() >= 3 && rho >= bound;
  }
  verdict(4, ok, "1D rule behaviour");
}

void criterion_double() {
  std::printf("criterion 5: identical-triangle double integral, a=b=0.5 c=1, n=4..56 step 4\n");
  const auto t0 = std::chrono::steady_clock::now();
  const CurvedTriangle tri = CurvedTriangle::explicit_quadratic(0.5, 0.5, 1.0);
  const oracle::OracleResult ref = oracle::relative_coordinate_double(tri, 1);
  std::printf("  relative-coordinate reference %.15e (change from the coarser level %.1e)\n", ref.value,
              ref.estimated_error);

  std::vector<std::size_t> ns;
  for (std::size_t n = 4; n <= 56; n += 4) ns.push_back(n);
  const Window windows[3] = {{-0.65, -0.35}, {-0.9, -0.6}, {-1.15, -0.85}};
  std::vector<ConvergenceRecord> recs;
  for (Level level : kLevels) {
    recs.push_back(convergence_study([&](std::size_t n) { return integrate_double_identical(tri, n, level, 0).value; },
                                     ref.value, ns, [](std::size_t n) { return n * n * n * n; }));
  }
  std::printf("  %4s %10s %12s %12s %12s\n", "n", "M", "err T-1", "err T0", "err T1");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::printf("  %4zu %10zu %12.3e %12.3e %12.3e\n", ns[i], recs[0].rows[i].points, recs[0].rows[i].relative_error,
                recs[1].rows[i].relative_error, recs[2].rows[i].relative_error);
  }
  const bool slopes = report_slopes(recs, windows);

  // Richardson extrapolation of the T1 sequence, assuming error ∝ 1/M.
  const auto& rows = recs[2].rows;
  const double m1 = double(rows[rows.size() - 2].points), m2 = double(rows.back().points);
  const double rich = (m2 * rows.back().value - m1 * rows[rows.size() - 2].value) / (m2 - m1);
  const double rich_gap = std::abs(rich - ref.value) / ref.value;
  std::printf("  Richardson estimate from T1 %.15e, relative gap to reference %.1e (limit 1e-7)\n", rich, rich_gap);

  const double final_err = rows.back().relative_error;
  const double elapsed = seconds_since(t0);
  std::printf("  T1 relative error at n=%zu: %.2e (limit 1e-6); runtime %.1f s (limit 600 s)\n", rows.back().n,
              final_err, elapsed);
  verdict(5, slopes && rich_gap <= 1e-7 && final_err <= 1e-6 && elapsed <= 600.0, "4D slopes and final value");
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

void criterion_properties() {
  std::printf("criterion 6: property suites\n");
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  auto interior = [&] {
    for (;;) {
      const RefPoint p{u(gen), u(gen)};
      if (p.x1 + p.x2 <= 0.95) return p;
    }
  };
  std::vector<std::pair<std::string, bool>> checks;

  bool pu = true;
  for (int i = 0; i < 100; ++i) {
    const RefPoint p = interior();
    double s = 0.0;
    for (int j = 1; j <= 6; ++j) s += basis_eval(j, p).value;
    pu = pu && std::abs(s - 1.0) < 1e-14;
  }
  checks.push_back({"partition of unity", pu});

  const std::array<Vec3, 6> nodes{Vec3{0, 0, 0.1},    Vec3{1.1, 0, 0},    Vec3{0, 0.9, 0.2},
                                  Vec3{0.5, -0.1, 0.3}, Vec3{0.6, 0.5, 0.4}, Vec3{-0.1, 0.4, 0.1}};
  const CurvedTriangle general = CurvedTriangle::quadratic(nodes);
  bool interp = true;
  for (int j = 1; j <= 6; ++j) interp = interp && norm(general.eval(reference_node(j), 0).f - nodes[j - 1]) == 0.0;
  checks.push_back({"F interpolates the control points", interp});

  const CurvedTriangle tri = CurvedTriangle::explicit_quadratic(0.6, 0.7, 0.5);
  const DensityPolynomial one = DensityPolynomial::constant(1.0);
  bool fd = true;
  for (int i = 0; i < 20; ++i) {
    const RefPoint p = interior();
    const double s = 1e-6;
    for (const CurvedTriangle* t : {&tri, &general}) {
      const MapJet j = t->eval(p, 2);
      const Vec3 d1 = (1.0 / (2 * s)) * (t->eval(p + RefPoint{s, 0}, 0).f - t->eval(p - RefPoint{s, 0}, 0).f);
      const Vec3 d2 = (1.0 / (2 * s)) * (t->eval(p + RefPoint{0, s}, 0).f - t->eval(p - RefPoint{0, s}, 0).f);
      const Vec3 d12 = (1.0 / (2 * s)) * (t->eval(p + RefPoint{0, s}, 1).d1 - t->eval(p - RefPoint{0, s}, 1).d1);
      fd = fd && norm(d1 - j.d1) <= 1e-6 * norm(j.d1) && norm(d2 - j.d2) <= 1e-6 * norm(j.d2) &&
           norm(d12 - j.d12) <= 1e-6 * std::max(norm(j.d12), 1.0);
      const MetricDensity m = metric_density(*t, one, p);
      const double g1 = (area_element(*t, p + RefPoint{s, 0}) - area_element(*t, p - RefPoint{s, 0})) / (2 * s);
      fd = fd && std::abs(g1 - m.d1) <= 1e-6 * std::max(std::abs(m.d1), m.value);
    }
  }
  checks.push_back({"analytic derivatives match finite differences", fd});

  bool ends = true;
  for (double mu : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    for (double nu : {1e-6, 1e-2, 0.5}) {
      const ConformalMap g(mu, nu);
      ends = ends && std::abs(g(-1.0).g + 1.0) <= 1e-14 && std::abs(g(1.0).g - 1.0) <= 1e-14;
    }
  }
  checks.push_back({"conformal map endpoint identities", ends});

  bool cont = true;
  for (const RefPoint p : {RefPoint{0.2, 0.4}, RefPoint{0.3, 0.3}, RefPoint{0.6, 0.2}}) {
    for (double offset : {0.0, 1e-3}) {
      const Vec3 x0 = tri.eval(p, 0).f + offset * unit_normal(tri, p);
      const TaylorData t = make_taylor_data(tri, one, newton_locate(tri, x0));
      const EdgeGeometry geo = edge_geometry(t.x0);
      EdgeRuleOptions o;
      o.points = 200;
      const EdgeRules rules = make_edge_rules(geo, o);
      const double vals[3] = {integrate_T_minus1(t, geo, rules), integrate_T0(t, geo, rules),
                              integrate_T1(t, geo, rules)};
      for (int level = -1; level <= 1; ++level) {
        const double ref = oracle::duffy_split(t.x0, t.h, [&](RefPoint x) { return eval_T(level, t, x); }, 2).value;
        cont = cont && std::abs(vals[level + 1] - ref) <= 1e-8 * std::max(std::abs(ref), 1.0);
      }
    }
  }
  checks.push_back({"continuation equals 2D reference for I-1, I0, I1", cont});

  const KernelShape shapes[] = {{0, 0, 1}, {1, 0, 1}, {2, 1, 3}, {3, 0, 3}, {2, 0, 1},
                                {3, 1, 3}, {4, 2, 5}, {4, 0, 3}, {6, 0, 5}, {5, 1, 5}};
  bool cont0 = true;
  for (const KernelShape s : shapes) {
    const double a = continuation_kernel(s, 0.3, 1.1, 0.0), b = continuation_kernel(s, 0.3, 1.1, 1e-9);
    cont0 = cont0 && std::abs(a - b) <= 1e-6 * std::max(std::abs(a), 1.0);
  }
  checks.push_back({"h -> 0 continuity of the continuation kernels", cont0});

  const double c = std::cos(1.1), s = std::sin(1.1);
  const std::array<Vec3, 3> rot{Vec3{c, -s, 0}, Vec3{s, c, 0}, Vec3{0, 0, 1}};
  const double scale = 0.25;
  const Vec3 shift{5, -2, 1};
  const CurvedTriangle moved = tri.transformed(rot, scale, shift);
  const Vec3 x0 = tri.eval({0.2, 0.4}, 0).f + 1e-3 * unit_normal(tri, {0.2, 0.4});
  const Vec3 y0{scale * dot(rot[0], x0) + shift.x, scale * dot(rot[1], x0) + shift.y,
                scale * dot(rot[2], x0) + shift.z};
  bool cov = true;
  for (Level level : kLevels) {
    cov = cov && close_rel(integrate_single(moved, one, y0, level, 16), scale * integrate_single(tri, one, x0, level, 16),
                           1e-12);
  }
  checks.push_back({"rigid motion and scaling", cov});

  const double vertex = integrate_single(CurvedTriangle::explicit_quadratic(0.5, 0.5, 0.0), one, {0, 0, 0},
                                         Level::kT1, 8);
  checks.push_back({"flat vertex closed form", close_rel(vertex, std::numbers::sqrt2 * std::log(1.0 + std::numbers::sqrt2), 1e-10)});

  bool all = true;
  for (const auto& [name, ok] : checks) {
    std::printf("  %-50s %s\n", name.c_str(), ok ? "ok" : "FAILED");
    all = all && ok;
  }
  verdict(6, all, "property suites");
}

void criterion_scope() {
  std::printf("criterion 7: not reproduced here, since each needs a full boundary-element solver:\n");
  std::printf("  - half-sphere scattering study\n");
  std::printf("  - far-field superconvergence\n");
  std::printf("  - convergence as the gap delta -> 0\n");
  std::printf("  no other criterion depends on them\n");
  verdict(7, true, "out-of-reach results stated");
}

}  // namespace

int main(int argc, char** argv) {
  // Optional list of criterion numbers to run; all by default.
  std::vector<bool> run(8, argc <= 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && k <= 7) run[k] = true;
  }
  const std::function<void()> fns[8] = {nullptr,           criterion_center, criterion_near,       criterion_edge,
                                        criterion_rules,   criterion_double, criterion_properties, criterion_scope};
  for (int k = 1; k <= 7; ++k) {
    if (run[k]) fns[k]();
  }
  std::printf("%s\n", failures ? "acceptance: FAILURES" : "acceptance: all criteria pass");
  return failures ? 1 : 0;
}
