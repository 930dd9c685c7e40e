#include "memfem/mesh.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "memfem/geometry.hpp"

namespace memfem {

namespace {

constexpr double kPi = std::numbers::pi;

struct GridMesher {
  // Builds a node grid over a parametric rectangle, merging coincident
  // nodes (degenerate pole rows).
  std::vector<Vec3> nodes;
  std::vector<int> grid_to_node;
  int ncols = 0, nrows = 0;
  double merge_tol;

  GridMesher(int ncols_, int nrows_, double tol) : ncols(ncols_), nrows(nrows_), merge_tol(tol) {
    grid_to_node.assign(ncols * nrows, -1);
  }

  int add(int i, int j, const Vec3& x) {
    for (int k = 0; k < static_cast<int>(nodes.size()); ++k)
      if ((nodes[k] - x).norm() <= merge_tol) {
        grid_to_node[i + ncols * j] = k;
        return k;
      }
    nodes.push_back(x);
    grid_to_node[i + ncols * j] = static_cast<int>(nodes.size()) - 1;
    return grid_to_node[i + ncols * j];
  }

  int at(int i, int j) const { return grid_to_node[i + ncols * j]; }
};

// Lagrange quad mesh over a parametric map (u,v) -> R^3, u = xi^1 fastest.
Mesh lagrange_patch(int nu, int nv, ElementKind kind,
                    const std::function<Vec3(double, double)>& map, double merge_tol) {
  const int sub = (kind == ElementKind::LagrangeQuadratic) ? 2 : 1;
  const int ncols = sub * nu + 1, nrows = sub * nv + 1;
  GridMesher g(ncols, nrows, merge_tol);
  for (int j = 0; j < nrows; ++j)
    for (int i = 0; i < ncols; ++i)
      g.add(i, j, map(static_cast<double>(i) / (ncols - 1), static_cast<double>(j) / (nrows - 1)));

  Mesh mesh;
  mesh.ref_coords = g.nodes;
  const ElementBasis basis = (kind == ElementKind::LagrangeQuadratic)
                                 ? ElementBasis::lagrange_quadratic()
                                 : ElementBasis::lagrange_linear();
  for (int ej = 0; ej < nv; ++ej)
    for (int ei = 0; ei < nu; ++ei) {
      Element e;
      e.basis = basis;
      for (int j = 0; j <= sub; ++j)
        for (int i = 0; i <= sub; ++i) e.nodes.push_back(g.at(sub * ei + i, sub * ej + j));
      mesh.elements.push_back(std::move(e));
    }
  return mesh;
}

void collect_plane_set(Mesh& mesh, const std::string& name, int component, double tol) {
  std::vector<int> ids;
  for (int k = 0; k < mesh.node_count(); ++k)
    if (std::abs(mesh.ref_coords[k](component)) <= tol) ids.push_back(k);
  if (!ids.empty()) mesh.node_sets[name] = std::move(ids);
}

Mesh nurbs_octant(double radius) {
  // Exact quadratic rational octant: 90-degree circular arc revolved by a
  // 90-degree rational arc, degenerate pole edge at j = 2.
  const double c = std::sqrt(0.5);
  Mesh mesh;
  const double R = radius;
  mesh.ref_coords = {
      {R, 0, 0}, {R, R, 0}, {0, R, 0},  // equator row
      {R, 0, R}, {R, R, R}, {0, R, R},  // mid row
      {0, 0, R}, {0, 0, R}, {0, 0, R},  // pole row (degenerate)
  };
  VecX w(9);
  w << 1, c, 1, c, c * c, c, 1, c, 1;
  Element e;
  e.basis = ElementBasis::bezier(2, MatX::Identity(9, 9), w);
  e.nodes = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  mesh.elements.push_back(std::move(e));
  return mesh;
}

}  // namespace

void Mesh::validate() const {
  const int n = node_count();
  for (const auto& e : elements) {
    e.basis.validate();
    if (static_cast<int>(e.nodes.size()) != e.basis.node_count())
      throw std::invalid_argument("element node count does not match basis");
    for (int id : e.nodes)
      if (id < 0 || id >= n) throw std::invalid_argument("element references invalid node id");
  }
  for (const auto& x : ref_coords)
    if (!x.allFinite()) throw std::invalid_argument("non-finite node coordinate");
}

BoundaryConditions::BoundaryConditions(int n_nodes)
    : fixed(n_nodes, {false, false, false}), value(n_nodes, Vec3::Zero()) {}

void BoundaryConditions::fix(int node, int component, double v) {
  fixed[node][component] = true;
  value[node](component) = v;
}

void BoundaryConditions::fix_set(const Mesh& mesh, const std::string& set_name, int component) {
  auto it = mesh.node_sets.find(set_name);
  if (it == mesh.node_sets.end())
    throw std::invalid_argument("fix_set: unknown node set '" + set_name + "'");
  for (int id : it->second) fix(id, component);
}

ContactPoint project_to_obstacle(const Obstacle& obstacle, const Vec3& x) {
  ContactPoint cp;
  if (const auto* hs = std::get_if<HalfSpaceObstacle>(&obstacle.shape)) {
    cp.normal = hs->normal;
    cp.gap = hs->normal.dot(x) - hs->offset;
    cp.inv_dist = 0.0;
  } else {
    const auto& sp = std::get<SphereObstacle>(obstacle.shape);
    const Vec3 r = x - sp.center;
    const double d = r.norm();
    if (d < 1e-12 * sp.radius)
      throw std::runtime_error("ambiguous projection: point at sphere center");
    cp.normal = r / d;
    cp.gap = d - sp.radius;
    cp.inv_dist = 1.0 / d;
  }
  return cp;
}

Mesh make_sphere_octant(int n_circ, int n_merid, ElementKind kind, double radius) {
  if (n_circ < 1 || n_merid < 1) throw std::invalid_argument("invalid element counts");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");

  Mesh mesh;
  if (kind == ElementKind::NurbsQuadratic) {
    if (n_circ != 1 || n_merid != 1)
      throw std::invalid_argument("NURBS octant supports only the 1x1 single-patch form");
    mesh = nurbs_octant(radius);
  } else {
    auto map = [&](double u, double v) {
      const double phi = 0.5 * kPi * u;    // azimuth, xi^1
      const double el = 0.5 * kPi * v;     // elevation, xi^2 (equator -> pole)
      return Vec3(radius * std::cos(el) * std::cos(phi),
                  radius * std::cos(el) * std::sin(phi), radius * std::sin(el));
    };
    mesh = lagrange_patch(n_circ, n_merid, kind, map, 1e-10 * radius);
  }
  const double tol = 1e-9 * radius;
  collect_plane_set(mesh, "sym_x", 0, tol);
  collect_plane_set(mesh, "sym_y", 1, tol);
  collect_plane_set(mesh, "sym_z", 2, tol);
  mesh.closed = false;
  mesh.validate();
  return mesh;
}

Mesh make_sphere_quarter(int n_circ, int n_merid, ElementKind kind, double radius) {
  if (n_circ < 1 || n_merid < 1) throw std::invalid_argument("invalid element counts");
  if (kind == ElementKind::NurbsQuadratic)
    throw std::invalid_argument("quarter-sphere generator supports Lagrange kinds only");
  auto map = [&](double u, double v) {
    const double phi = 0.5 * kPi * u;
    const double el = kPi * (v - 0.5);  // bottom pole -> top pole
    return Vec3(radius * std::cos(el) * std::cos(phi), radius * std::cos(el) * std::sin(phi),
                radius * std::sin(el));
  };
  Mesh mesh = lagrange_patch(n_circ, n_merid, kind, map, 1e-10 * radius);
  const double tol = 1e-9 * radius;
  collect_plane_set(mesh, "sym_x", 0, tol);
  collect_plane_set(mesh, "sym_y", 1, tol);
  mesh.closed = false;
  mesh.validate();
  return mesh;
}

Mesh make_square_sheet(int n, ElementKind kind, double half_width, double prestretch) {
  if (n < 1) throw std::invalid_argument("invalid element count");
  if (prestretch < 1.0) throw std::invalid_argument("prestretch must be >= 1");
  if (kind == ElementKind::NurbsQuadratic)
    throw std::invalid_argument("sheet generator supports Lagrange kinds only");
  auto map = [&](double u, double v) {
    return Vec3(half_width * (2.0 * u - 1.0), half_width * (2.0 * v - 1.0), 0.0);
  };
  Mesh mesh = lagrange_patch(n, n, kind, map, 1e-12 * half_width);
  const double tol = 1e-9 * half_width;
  std::vector<int> clamped;
  for (int k = 0; k < mesh.node_count(); ++k) {
    const Vec3& x = mesh.ref_coords[k];
    if (std::abs(std::abs(x(0)) - half_width) <= tol || std::abs(std::abs(x(1)) - half_width) <= tol)
      clamped.push_back(k);
  }
  mesh.node_sets["clamped"] = std::move(clamped);
  mesh.closed = false;
  mesh.prestretch = prestretch;
  mesh.validate();
  return mesh;
}

double enclosed_volume(const Mesh& mesh, const std::vector<Vec3>& coords, int quadrature_order) {
  if (static_cast<int>(coords.size()) != mesh.node_count())
    throw std::invalid_argument("coordinate count does not match mesh");

  if (!mesh.closed) {
    // Open membrane: the datum plane of the boundary must pass through the
    // origin so that the closure integral of x.n vanishes.
    auto it = mesh.node_sets.find("clamped");
    if (it != mesh.node_sets.end() && it->second.size() >= 3) {
      Mat3 scatter = Mat3::Zero();
      double scale = 0.0;
      for (int id : it->second) {
        scatter += coords[id] * coords[id].transpose();
        scale = std::max(scale, coords[id].squaredNorm());
      }
      Eigen::SelfAdjointEigenSolver<Mat3> es(scatter);
      const double residual = es.eigenvalues()(0);
      if (residual > 1e-10 * scale * static_cast<double>(it->second.size()))
        throw std::runtime_error("open mesh boundary plane does not pass through the origin");
    }
  }

  double vol = 0.0;
  std::vector<Vec3> xe;
  for (const auto& e : mesh.elements) {
    const int order = quadrature_order > 0 ? quadrature_order : default_quadrature_order(e.basis);
    const QuadratureRule rule = gauss_rule(order);
    xe.clear();
    for (int id : e.nodes) xe.push_back(coords[id]);
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const BasisEval be = eval_basis(e.basis, rule.points[g]);
      const SurfaceFrame f = frame(be, xe);
      Vec3 x = Vec3::Zero();
      for (size_t I = 0; I < xe.size(); ++I) x += be.N(I) * xe[I];
      vol += rule.weights[g] * x.dot(f.n) * f.Ja / 3.0;
    }
  }
  return vol;
}

}  // namespace memfem
