#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nearsing/nearsing.h"

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct Failure : std::runtime_error {
  int exit_code;
  Failure(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

void check(ns_status s) {
  if (s == NS_OK) return;
  const int code = (s == NS_ERR_INVALID_ARGUMENT || s == NS_ERR_IO) ? kUsage : kNumerical;
  throw Failure(code, ns_last_error());
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure(kUsage, std::string("cannot parse ") + flag + " value '" + text + "'");
    }
  }
  if (out.size() != expected) {
    throw Failure(kUsage, std::string(flag) + " expects " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

struct TriangleDeleter {
  void operator()(ns_triangle* t) const { ns_triangle_destroy(t); }
};
struct DensityDeleter {
  void operator()(ns_density* d) const { ns_density_destroy(d); }
};
using TrianglePtr = std::unique_ptr<ns_triangle, TriangleDeleter>;
using DensityPtr = std::unique_ptr<ns_density, DensityDeleter>;

struct Level {
  ns_level value;
  const char* name;
};

std::vector<Level> parse_levels(const std::string& text) {
  static const std::map<std::string, Level> known{
      {"tm1", {NS_LEVEL_TM1, "tm1"}}, {"t0", {NS_LEVEL_T0, "t0"}}, {"t1", {NS_LEVEL_T1, "t1"}}};
  std::vector<Level> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto it = known.find(item);
    if (it == known.end()) throw Failure(kUsage, "unknown level '" + item + "' (use tm1,t0,t1)");
    out.push_back(it->second);
  }
  if (out.empty()) throw Failure(kUsage, "--levels is empty");
  return out;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

// CSV goes to --out when given, otherwise to stdout; the summary goes to
// whichever stream the CSV does not use.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) {
      csv_ = stdout;
      summary_ = stderr;
    } else {
      csv_ = std::fopen(path.c_str(), "w");
      if (!csv_) throw Failure(kUsage, "cannot open " + path + " for writing");
      owned_ = true;
      summary_ = stdout;
    }
  }
  ~Output() {
    if (owned_) std::fclose(csv_);
  }
  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) std::fprintf(csv_, "%s%s", i ? "," : "", cells[i].c_str());
    std::fprintf(csv_, "\n");
    std::fflush(csv_);
  }
  std::FILE* summary() const { return summary_; }

 private:
  std::FILE* csv_ = nullptr;
  std::FILE* summary_ = nullptr;
  bool owned_ = false;
};

void print_slope(std::FILE* out, const char* label, const std::vector<double>& points,
                 const std::vector<double>& errors) {
  double slope = 0.0;
  int defined = 0;
  check(ns_fit_slope(points.size(), points.data(), errors.data(), &slope, &defined));
  if (defined) {
    std::fprintf(out, "%s: fitted slope %.3f\n", label, slope);
  } else {
    std::fprintf(out, "%s: slope undefined (fewer than two errors above 1e-13)\n", label);
  }
}

struct StudyConfig {
  std::string experiment;
  std::string abc;
  std::string element;
  std::string preimage;
  std::string point;
  std::optional<double> offset;
  std::string levels = "tm1,t0,t1";
  int nmin = 2;
  int nmax = 0;
  std::string rule = "transplanted";
  std::string out;
  bool oracle = false;
  unsigned threads = 0;
};

TrianglePtr make_triangle(const StudyConfig& c, const char* default_abc) {
  ns_triangle* raw = nullptr;
  if (!c.element.empty()) {
    if (!c.abc.empty()) throw Failure(kUsage, "--abc and --element are mutually exclusive");
    check(ns_triangle_load(c.element.c_str(), &raw));
  } else {
    const auto abc = parse_list(c.abc.empty() ? default_abc : c.abc, 3, "--abc");
    check(ns_triangle_create_explicit(abc[0], abc[1], abc[2], &raw));
  }
  return TrianglePtr(raw);
}

void check_range(const StudyConfig& c) {
  if (c.nmin < 2 || c.nmax < c.nmin) throw Failure(kUsage, "need 2 <= nmin <= nmax");
}

int run_single(StudyConfig c) {
  struct Preset {
    const char* preimage;
    double offset;
  };
  static const std::map<std::string, Preset> presets{
      {"center-singular", {"0.2,0.4", 0.0}},
      {"near-singular", {"0.2,0.4", 1e-4}},
      {"near-edge", {"0.5,1e-4", 0.0}},
  };
  const auto preset = presets.find(c.experiment.empty() ? "center-singular" : c.experiment);
  if (preset == presets.end()) throw Failure(kUsage, "unknown experiment '" + c.experiment + "'");
  if (c.nmax == 0) c.nmax = 128;
  check_range(c);

  TrianglePtr tri = make_triangle(c, "0.6,0.7,0.5");
  double x0[3];
  if (!c.point.empty()) {
    if (!c.preimage.empty() || c.offset) throw Failure(kUsage, "--point excludes --preimage/--offset");
    const auto p = parse_list(c.point, 3, "--point");
    for (int i = 0; i < 3; ++i) x0[i] = p[static_cast<std::size_t>(i)];
  } else {
    const auto pre = parse_list(c.preimage.empty() ? preset->second.preimage : c.preimage, 2, "--preimage");
    const double offset = c.offset.value_or(preset->second.offset);
    double normal[3];
    check(ns_triangle_map(tri.get(), pre[0], pre[1], x0));
    check(ns_triangle_normal(tri.get(), pre[0], pre[1], normal));
    for (int i = 0; i < 3; ++i) x0[i] += offset * normal[i];
  }

  ns_single_options opts;
  ns_single_options_default(&opts);
  if (c.rule == "plain-gauss") {
    opts.rule = NS_RULE_PLAIN_GAUSS;
  } else if (c.rule != "transplanted") {
    throw Failure(kUsage, "--rule must be transplanted or plain-gauss");
  }
  const auto levels = parse_levels(c.levels);

  ns_density* raw = nullptr;
  check(ns_density_create_constant(1.0, &raw));
  DensityPtr one(raw);

  double reference = 0.0, reference_error = 0.0;
  check(ns_oracle_single(tri.get(), one.get(), x0, 2, &reference, &reference_error));

  Output out(c.out);
  if (c.oracle) {
    std::fprintf(out.summary(), "reference %s (estimated error %.2e)\n", sci(reference).c_str(), reference_error);
  }
  std::vector<std::string> header{"n", "N"};
  for (const auto& l : levels) {
    header.push_back(std::string("value_") + l.name);
    header.push_back(std::string("rel_error_") + l.name);
  }
  out.row(header);

  std::vector<double> points;
  std::vector<std::vector<double>> errors(levels.size());
  for (int n = c.nmin; n <= c.nmax; ++n) {
    const double big_n = static_cast<double>(n) * n;
    std::vector<std::string> cells{std::to_string(n), std::to_string(n * n)};
    points.push_back(big_n);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      double v = 0.0;
      check(ns_integrate_single(tri.get(), one.get(), x0, levels[k].value, static_cast<size_t>(n), &opts, &v));
      const double err = std::abs(v - reference) / std::abs(reference);
      errors[k].push_back(err);
      cells.push_back(sci(v));
      cells.push_back(sci(err));
    }
    out.row(cells);
  }
  for (std::size_t k = 0; k < levels.size(); ++k) print_slope(out.summary(), levels[k].name, points, errors[k]);
  return 0;
}

int run_double(StudyConfig c) {
  if (!c.experiment.empty() && c.experiment != "identical") {
    throw Failure(kUsage, "unknown experiment '" + c.experiment + "'");
  }
  if (!c.preimage.empty() || !c.point.empty() || c.offset) {
    throw Failure(kUsage, "the double integral takes no singularity options");
  }
  if (c.rule != "transplanted") throw Failure(kUsage, "the double integral uses the transplanted rule only");
  if (c.nmax == 0) c.nmax = 24;
  check_range(c);
  TrianglePtr tri = make_triangle(c, "0.5,0.5,1");
  const auto levels = parse_levels(c.levels);

  double reference = 0.0, reference_error = 0.0;
  check(ns_oracle_double(tri.get(), 1, &reference, &reference_error));

  Output out(c.out);
  if (c.oracle) {
    std::fprintf(out.summary(), "reference %s (estimated error %.2e)\n", sci(reference).c_str(), reference_error);
  }
  std::vector<std::string> header{"n", "M"};
  for (const auto& l : levels) {
    header.push_back(std::string("value_") + l.name);
    header.push_back(std::string("rel_error_") + l.name);
  }
  out.row(header);

  std::vector<double> points;
  std::vector<std::vector<double>> errors(levels.size());
  for (int n = c.nmin; n <= c.nmax; ++n) {
    std::size_t m = 0;
    std::vector<std::string> cells{std::to_string(n), ""};
    for (std::size_t k = 0; k < levels.size(); ++k) {
      double v = 0.0;
      check(ns_integrate_double_identical(tri.get(), static_cast<size_t>(n), levels[k].value, c.threads, &v, &m));
      const double err = std::abs(v - reference) / std::abs(reference);
      errors[k].push_back(err);
      cells.push_back(sci(v));
      cells.push_back(sci(err));
    }
    cells[1] = std::to_string(m);
    points.push_back(static_cast<double>(m));
    out.row(cells);
  }
  for (std::size_t k = 0; k < levels.size(); ++k) print_slope(out.summary(), levels[k].name, points, errors[k]);
  return 0;
}

struct DemoConfig {
  double mu = -1.0;
  double nu = 2e-4;
  std::optional<double> target_mu, target_nu;
  int nmin = 1;
  int nmax = 40;
  std::string out;
};

double rule_error(const std::vector<double>& nodes, const std::vector<double>& weights, double mu, double nu,
                  double exact) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] / std::hypot(nodes[i] - mu, nu);
  return std::abs(sum - exact) / std::abs(exact);
}

std::string rho_or_nan(ns_rate_case which, double mu, double nu, double dmu, double dnu) {
  double rho = 0.0;
  if (ns_predicted_rho(which, mu, nu, dmu, dnu, &rho) != NS_OK) return "nan";
  return sci(rho);
}

int run_quad_demo(const DemoConfig& c) {
  if (c.nmin < 1 || c.nmax < c.nmin) throw Failure(kUsage, "need 1 <= nmin <= nmax");
  const double tmu = c.target_mu.value_or(c.mu), tnu = c.target_nu.value_or(c.nu);
  if (!(c.nu > 0.0) || !(tnu > 0.0)) throw Failure(kUsage, "nu must be positive");
  double exact = 0.0;
  check(ns_model_integral(tmu, tnu, &exact));

  const bool matched = tmu == c.mu && tnu == c.nu;
  const std::string rho_gauss = rho_or_nan(NS_RATE_GAUSS, tmu, tnu, 0.0, 1.0);
  const std::string rho_trans = matched ? rho_or_nan(NS_RATE_MATCHED, c.mu, c.nu, 0.0, 1.0)
                                        : rho_or_nan(NS_RATE_MISMATCHED, c.mu, c.nu, (tmu - c.mu) / c.nu, tnu / c.nu);
  Output out(c.out);
  out.row({"n", "gauss_error", "transplanted_error", "rho_gauss", "rho_transplanted"});
  for (int n = c.nmin; n <= c.nmax; ++n) {
    const auto size = static_cast<std::size_t>(n);
    std::vector<double> gx(size), gw(size), tx(size), tw(size);
    check(ns_gauss_legendre(size, gx.data(), gw.data()));
    check(ns_transplanted_rule(size, c.mu, c.nu, tx.data(), tw.data()));
    out.row({std::to_string(n), sci(rule_error(gx, gw, tmu, tnu, exact)), sci(rule_error(tx, tw, tmu, tnu, exact)),
             rho_gauss, rho_trans});
  }
  std::fprintf(out.summary(), "f(t) = 1/sqrt((t - %g)^2 + %g^2), map g(%g, %g)\n", tmu, tnu, c.mu, c.nu);
  std::fprintf(out.summary(), "predicted rho: gauss %s, transplanted %s\n", rho_gauss.c_str(), rho_trans.c_str());
  return 0;
}

void add_study_options(CLI::App* app, StudyConfig& c) {
  app->add_option("--experiment", c.experiment, "Preset experiment");
  app->add_option("--abc", c.abc, "Control point a,b,c of the test element");
  app->add_option("--element", c.element, "Control-point file with lines 'j x y z'");
  app->add_option("--levels", c.levels, "Comma-separated subset of tm1,t0,t1");
  app->add_option("--nmin", c.nmin, "Smallest n");
  app->add_option("--nmax", c.nmax, "Largest n");
  app->add_option("--out", c.out, "CSV output path (default stdout)");
  app->add_flag("--oracle", c.oracle, "Print the reference value and its error estimate");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-singular integrals over curved triangles"};
  app.require_subcommand(1);

  StudyConfig single_cfg;
  auto* single = app.add_subcommand("single", "Convergence of the single integral of 1/|x - x0|");
  add_study_options(single, single_cfg);
  single->add_option("--preimage", single_cfg.preimage, "Reference point x1,x2 of the singularity");
  single->add_option("--offset", single_cfg.offset, "Distance along the unit normal");
  single->add_option("--point", single_cfg.point, "Explicit evaluation point x,y,z");
  single->add_option("--rule", single_cfg.rule, "1D rule: transplanted or plain-gauss");

  StudyConfig double_cfg;
  auto* dbl = app.add_subcommand("double", "Convergence of the identical-triangle double integral");
  add_study_options(dbl, double_cfg);
  dbl->add_option("--threads", double_cfg.threads, "Worker threads (0 = all cores)");

  DemoConfig demo_cfg;
  auto* demo = app.add_subcommand("quad-demo", "Gauss vs transplanted Gauss on 1/sqrt((t-mu)^2+nu^2)");
  demo->add_option("--mu", demo_cfg.mu, "Map centre");
  demo->add_option("--nu", demo_cfg.nu, "Map width");
  demo->add_option("--target-mu", demo_cfg.target_mu, "Integrand centre (default --mu)");
  demo->add_option("--target-nu", demo_cfg.target_nu, "Integrand width (default --nu)");
  demo->add_option("--nmin", demo_cfg.nmin, "Smallest n");
  demo->add_option("--nmax", demo_cfg.nmax, "Largest n");
  demo->add_option("--out", demo_cfg.out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*single) return run_single(single_cfg);
    if (*dbl) return run_double(double_cfg);
    return run_quad_demo(demo_cfg);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.what());
    return f.exit_code;
  }
}
