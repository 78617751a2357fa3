#include "geometry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace nearsing {

double distance_to_reference_triangle(RefPoint p) {
  if (inside_reference_triangle(p)) return 0.0;
  auto seg = [&](RefPoint a, RefPoint b) {
    const RefPoint ab = b - a, ap = p - a;
    const double t = std::clamp((ap.x1 * ab.x1 + ap.x2 * ab.x2) / (ab.x1 * ab.x1 + ab.x2 * ab.x2), 0.0, 1.0);
    return norm(p - (a + t * ab));
  };
  const RefPoint v1{0, 0}, v2{1, 0}, v3{0, 1};
  return std::min({seg(v1, v2), seg(v2, v3), seg(v3, v1)});
}

namespace {

struct BasisJet {
  double v, d1, d2, d11, d12, d22;
};

BasisJet basis_jet(int j, RefPoint p) {
  const double x = p.x1, y = p.x2, l = 1.0 - x - y;
  switch (j) {
    case 1: return {l * (2 * l - 1), 1 - 4 * l, 1 - 4 * l, 4, 4, 4};
    case 2: return {x * (2 * x - 1), 4 * x - 1, 0, 4, 0, 0};
    case 3: return {y * (2 * y - 1), 0, 4 * y - 1, 0, 0, 4};
    case 4: return {4 * l * x, 4 * (l - x), -4 * x, -8, -4, 0};
    case 5: return {4 * x * y, 4 * y, 4 * x, 0, 4, 0};
    case 6: return {4 * l * y, -4 * y, 4 * (l - y), 0, -4, -8};
    default: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "basis index must be in 1..6, got " + std::to_string(j));
}

double node_diameter(const std::array<Vec3, 6>& nodes) {
  double d = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t k = i + 1; k < nodes.size(); ++k) d = std::max(d, norm(nodes[i] - nodes[k]));
  return 1.1 * d;
}

}  // namespace

BasisValue basis_eval(int j, RefPoint p) {
  const BasisJet b = basis_jet(j, p);
  return {b.v, b.d1, b.d2};
}

RefPoint reference_node(int j) {
  static constexpr std::array<RefPoint, 6> kNodes{{{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}}};
  if (j < 1 || j > 6) throw Error(ErrorCode::kInvalidArgument, "node index must be in 1..6");
  return kNodes[static_cast<std::size_t>(j - 1)];
}

CurvedTriangle::CurvedTriangle(int degree, Evaluator evaluator)
    : degree_(degree), evaluator_(std::move(evaluator)) {
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "element degree must be >= 1");
  if (!evaluator_) throw Error(ErrorCode::kInvalidArgument, "element evaluator is empty");
  for (int j = 1; j <= 6; ++j) nodes_[static_cast<std::size_t>(j - 1)] = evaluator_(reference_node(j), 0).f;
  diameter_ = node_diameter(nodes_);
  if (!(diameter_ > 0.0)) throw Error(ErrorCode::kDegenerateElement, "element has zero diameter");
}

CurvedTriangle CurvedTriangle::quadratic(const std::array<Vec3, 6>& nodes) {
  for (const Vec3& a : nodes) {
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(a.z))
      throw Error(ErrorCode::kInvalidArgument, "control points must be finite");
  }
  auto eval = [nodes](RefPoint p, int order) {
    MapJet jet;
    for (int j = 1; j <= 6; ++j) {
      const BasisJet b = basis_jet(j, p);
      const Vec3& a = nodes[static_cast<std::size_t>(j - 1)];
      jet.f += b.v * a;
      if (order >= 1) {
        jet.d1 += b.d1 * a;
        jet.d2 += b.d2 * a;
      }
      if (order >= 2) {
        jet.d11 += b.d11 * a;
        jet.d12 += b.d12 * a;
        jet.d22 += b.d22 * a;
      }
    }
    return jet;
  };
  CurvedTriangle tri(2, eval);
  tri.nodes_ = nodes;
  tri.diameter_ = node_diameter(nodes);
  return tri;
}

CurvedTriangle CurvedTriangle::explicit_quadratic(double a, double b, double c) {
  return quadratic({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0.5, 0, 0}, Vec3{a, b, c}, Vec3{0, 0.5, 0}});
}

CurvedTriangle CurvedTriangle::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open element file '" + path + "'");
  std::array<Vec3, 6> nodes{};
  std::array<bool, 6> seen{};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int j = 0;
    Vec3 v;
    std::string rest;
    if (!(ls >> j >> v.x >> v.y >> v.z) || (ls >> rest)) {
      throw Error(ErrorCode::kIo, path + ":" + std::to_string(line_no) + ": expected 'j x y z'");
    }
    if (j < 1 || j > 6) throw Error(ErrorCode::kIo, path + ":" + std::to_string(line_no) + ": node index out of range");
    if (seen[static_cast<std::size_t>(j - 1)]) throw Error(ErrorCode::kIo, path + ": duplicate node " + std::to_string(j));
    seen[static_cast<std::size_t>(j - 1)] = true;
    nodes[static_cast<std::size_t>(j - 1)] = v;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }))
    throw Error(ErrorCode::kIo, path + ": expected 6 control points");
  return quadratic(nodes);
}

MapJet CurvedTriangle::eval(RefPoint p, int order) const {
  if (order < 0 || order > 3) throw Error(ErrorCode::kInvalidArgument, "derivative order must be in 0..3");
  return evaluator_(p, order);
}

CurvedTriangle CurvedTriangle::transformed(const std::array<Vec3, 3>& rotation, double scale,
                                           const Vec3& translation) const {
  auto apply = [rotation, scale](const Vec3& v) {
    return Vec3{scale * dot(rotation[0], v), scale * dot(rotation[1], v), scale * dot(rotation[2], v)};
  };
  if (degree_ == 2) {
    std::array<Vec3, 6> moved{};
    for (std::size_t j = 0; j < 6; ++j) moved[j] = apply(nodes_[j]) + translation;
    return quadratic(moved);
  }
  auto base = evaluator_;
  return CurvedTriangle(degree_, [base, apply, translation](RefPoint p, int order) {
    MapJet j = base(p, order);
    for (Vec3* v : {&j.f, &j.d1, &j.d2, &j.d11, &j.d12, &j.d22, &j.d111, &j.d112, &j.d122, &j.d222}) *v = apply(*v);
    j.f += translation;
    return j;
  });
}

DensityPolynomial::DensityPolynomial(int degree, Evaluator evaluator)
    : degree_(degree), evaluator_(std::move(evaluator)) {
  if (degree < 0) throw Error(ErrorCode::kInvalidArgument, "density degree must be >= 0");
  if (!evaluator_) throw Error(ErrorCode::kInvalidArgument, "density evaluator is empty");
}

DensityPolynomial DensityPolynomial::constant(double c) {
  return DensityPolynomial(0, [c](RefPoint) { return DensityJet{c, 0, 0, 0, 0, 0}; });
}

DensityPolynomial DensityPolynomial::basis(int j) {
  basis_jet(j, {0, 0});  // validates j
  return DensityPolynomial(2, [j](RefPoint p) {
    const BasisJet b = basis_jet(j, p);
    return DensityJet{b.v, b.d1, b.d2, b.d11, b.d12, b.d22};
  });
}

namespace {

void check_area(double area, const CurvedTriangle& tri) {
  const double rho = tri.diameter();
  if (!(area >= 1e-12 * rho * rho)) {
    throw Error(ErrorCode::kDegenerateElement, "degenerate element: |J1 x J2| below tolerance");
  }
}

}  // namespace

double area_element(const CurvedTriangle& tri, RefPoint p) {
  const MapJet j = tri.eval(p, 1);
  const double area = norm(cross(j.d1, j.d2));
  check_area(area, tri);
  return area;
}

MetricDensity metric_density(const CurvedTriangle& tri, const DensityPolynomial& phi, RefPoint p) {
  const MapJet j = tri.eval(p, 3);
  const DensityJet d = phi.eval(p);

  // N = J₁ × J₂ and its partials; J₁ = F_1, J₂ = F_2.
  const Vec3 n = cross(j.d1, j.d2);
  const Vec3 n1 = cross(j.d11, j.d2) + cross(j.d1, j.d12);
  const Vec3 n2 = cross(j.d12, j.d2) + cross(j.d1, j.d22);
  const Vec3 n11 = cross(j.d111, j.d2) + 2.0 * cross(j.d11, j.d12) + cross(j.d1, j.d112);
  const Vec3 n12 = cross(j.d112, j.d2) + cross(j.d11, j.d22) + cross(j.d12, j.d12) + cross(j.d1, j.d122);
  const Vec3 n22 = cross(j.d122, j.d2) + 2.0 * cross(j.d12, j.d22) + cross(j.d1, j.d222);

  const double a = norm(n);
  check_area(a, tri);
  const double nn1 = dot(n, n1), nn2 = dot(n, n2);
  const double a1 = nn1 / a, a2 = nn2 / a;
  const double a3 = a * a * a;
  const double a11 = (dot(n1, n1) + dot(n, n11)) / a - nn1 * nn1 / a3;
  const double a12 = (dot(n1, n2) + dot(n, n12)) / a - nn1 * nn2 / a3;
  const double a22 = (dot(n2, n2) + dot(n, n22)) / a - nn2 * nn2 / a3;

  return {d.value * a,
          d.d1 * a + d.value * a1,
          d.d2 * a + d.value * a2,
          d.d11 * a + 2.0 * d.d1 * a1 + d.value * a11,
          d.d12 * a + d.d1 * a2 + d.d2 * a1 + d.value * a12,
          d.d22 * a + 2.0 * d.d2 * a2 + d.value * a22};
}

}  // namespace nearsing
